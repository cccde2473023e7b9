"""Truncated Bargmann space model of the square-integrable Heisenberg
representations: group arithmetic, displacement operators, matrix
coefficients, orthogonality integrals, and the weighted-monomial regular
functions with their exact norms.

Conventions.  A group element is (z, w) with z real (the central coordinate)
and w in C^n, multiplying as (z,w)(z',w') = (z + z' + Im<w,w'>, w + w') where
<w,w'> = sum_j w_j conj(w'_j).  For the central parameter t != 0 the
normalized monomials mu_m = |t|^{|m|/2} w^m / sqrt(m!) are orthonormal, and
in that basis the ladder matrices are t-independent; the operator for (z,w)
is the central phase e^{itz} times exp(alpha . a^+ - conj(alpha) . a) with
alpha = sqrt(t) w for t > 0 and sqrt(|t|) conj(w) for t < 0.

Truncated generators stay exactly skew-Hermitian, so truncated operators are
exactly unitary; what truncation limits is the group law, which is only
reproduced on degrees well below the cutoff and for displacement amplitudes
|t| |w|^2 small against the cutoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import numerics
from .exact import gram_schmidt_norms


@dataclass(frozen=True)
class HeisenbergPoint:
    z: float
    w: tuple

    @property
    def n(self) -> int:
        return len(self.w)


def heis_identity(n: int) -> HeisenbergPoint:
    return HeisenbergPoint(0.0, (0j,) * n)


def heis_mul(g: HeisenbergPoint, h: HeisenbergPoint) -> HeisenbergPoint:
    if g.n != h.n:
        raise ValueError("dimension mismatch")
    cross = sum(a * b.conjugate() for a, b in zip(g.w, h.w))
    return HeisenbergPoint(g.z + h.z + cross.imag, tuple(a + b for a, b in zip(g.w, h.w)))


def heis_inv(g: HeisenbergPoint) -> HeisenbergPoint:
    return HeisenbergPoint(-g.z, tuple(-a for a in g.w))


# ---------------------------------------------------------------------------
# truncated basis and operators
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def multi_indices(n: int, cutoff: int):
    """All multi-indices with |m| <= cutoff in degree-major order, heads
    descending within a degree (the CSV row/column order)."""

    def level(nv, d):
        if nv == 1:
            return [(d,)]
        out = []
        for head in range(d, -1, -1):
            out.extend((head,) + rest for rest in level(nv - 1, d - head))
        return out

    out = []
    for d in range(cutoff + 1):
        out.extend(level(n, d))
    return tuple(out)


@lru_cache(maxsize=None)
def _index_positions(n, cutoff):
    return {m: i for i, m in enumerate(multi_indices(n, cutoff))}


@lru_cache(maxsize=None)
def _ladder_matrices(n: int, cutoff: int):
    """Creation matrices a_j^+ on the truncated basis (annihilation is the
    conjugate transpose)."""
    idx = multi_indices(n, cutoff)
    pos = _index_positions(n, cutoff)
    mats = []
    for j in range(n):
        a = np.zeros((len(idx), len(idx)))
        for col, m in enumerate(idx):
            if sum(m) == cutoff:
                continue
            up = list(m)
            up[j] += 1
            a[pos[tuple(up)], col] = math.sqrt(up[j])
        mats.append(a)
    return mats


@dataclass(frozen=True)
class FockVector:
    """Truncated coefficient vector over the normalized monomial basis."""

    n: int
    cutoff: int
    coeffs: np.ndarray

    @classmethod
    def basis_vector(cls, n, cutoff, index):
        pos = _index_positions(n, cutoff)
        if tuple(index) not in pos:
            raise ValueError("index beyond cutoff")
        arr = np.zeros(len(pos), dtype=complex)
        arr[pos[tuple(index)]] = 1.0
        return cls(n, cutoff, arr)

    @classmethod
    def from_coeffs(cls, n, cutoff, mapping):
        pos = _index_positions(n, cutoff)
        arr = np.zeros(len(pos), dtype=complex)
        for idx, val in dict(mapping).items():
            if tuple(idx) not in pos:
                raise ValueError("index beyond cutoff")
            arr[pos[tuple(idx)]] = val
        return cls(n, cutoff, arr)

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def inner(self, other) -> complex:
        if (self.n, self.cutoff) != (other.n, other.cutoff):
            raise ValueError("vectors live in different truncations")
        return complex(np.vdot(self.coeffs, other.coeffs))


@dataclass(frozen=True)
class FockOperator:
    matrix: np.ndarray
    n: int
    t: float
    g: HeisenbergPoint
    cutoff: int

    def entry(self, left, right) -> complex:
        pos = _index_positions(self.n, self.cutoff)
        if tuple(left) not in pos or tuple(right) not in pos:
            raise ValueError("index beyond cutoff")
        return complex(self.matrix[pos[tuple(left)], pos[tuple(right)]])

    def apply(self, vec: FockVector) -> FockVector:
        if (vec.n, vec.cutoff) != (self.n, self.cutoff):
            raise ValueError("vector does not match the operator truncation")
        return FockVector(self.n, self.cutoff, self.matrix @ vec.coeffs)


def _alpha(t: float, w) -> tuple:
    s = math.sqrt(abs(t))
    if t > 0:
        return tuple(s * x for x in w)
    return tuple(s * x.conjugate() for x in w)


def fock_operator(n: int, t: float, g: HeisenbergPoint, cutoff: int) -> FockOperator:
    """Matrix of the representation at g over the truncated monomial basis.

    Central elements come out exactly scalar.  For displaced elements the
    reliable block is degrees <= cutoff - buffer with |t| |w|^2 well below
    the cutoff; the guard below rejects amplitudes past cutoff/2.
    """
    if t == 0:
        raise ValueError("t must be nonzero")
    if g.n != n:
        raise ValueError("dimension mismatch")
    phase = complex(math.cos(t * g.z), math.sin(t * g.z))
    dim = len(multi_indices(n, cutoff))
    if not any(abs(x) for x in g.w):
        return FockOperator(phase * np.eye(dim, dtype=complex), n, t, g, cutoff)
    amp = abs(t) * sum(abs(x) ** 2 for x in g.w)
    if amp > cutoff / 2:
        raise ValueError(
            f"displacement amplitude {amp:.3g} too large for cutoff {cutoff}"
        )
    alpha = _alpha(t, g.w)
    ladders = _ladder_matrices(n, cutoff)
    gen = np.zeros((dim, dim), dtype=complex)
    for a_dag, al in zip(ladders, alpha):
        gen += al * a_dag - np.conjugate(al) * a_dag.T
    return FockOperator(phase * numerics.matrix_exp(gen), n, t, g, cutoff)


def matrix_coefficient(t: float, left, right, g: HeisenbergPoint,
                       cutoff: int | None = None) -> complex:
    """<mu_left, pi_t(g) mu_right> read off the truncated operator."""
    n = g.n
    if len(left) != n or len(right) != n:
        raise ValueError("index length must match the point dimension")
    if cutoff is None:
        cutoff = max(sum(left), sum(right)) * 2 + 12
    op = fock_operator(n, t, g, cutoff)
    return op.entry(tuple(left), tuple(right))


# ---------------------------------------------------------------------------
# normal-ordered series route (exact Gaussian factor)
# ---------------------------------------------------------------------------


def _displacement_polypart(l: int, m: int, alpha: complex) -> complex:
    """G with <l| D(alpha) |m> = e^{-|alpha|^2/2} G(alpha); a finite sum from
    the normally ordered exponentials."""
    total = 0.0 + 0.0j
    sql = math.sqrt(math.factorial(l) * math.factorial(m))
    for j in range(max(0, m - l), m + 1):
        total += (
            ((-alpha.conjugate()) ** j)
            * (alpha ** (l - m + j))
            / (math.factorial(j) * math.factorial(l - m + j) * math.factorial(m - j))
        )
    return sql * total


def displacement_series_element(alpha: complex, l: int, m: int) -> complex:
    return math.exp(-abs(alpha) ** 2 / 2) * _displacement_polypart(l, m, alpha)


def coefficient_series(t: float, left, right, g: HeisenbergPoint) -> complex:
    """Same matrix coefficient through the closed normal-ordered series;
    stable at any displacement size, used under the orthogonality
    integrals where the truncated operator cannot reach."""
    if t == 0:
        raise ValueError("t must be nonzero")
    alpha = _alpha(t, g.w)
    val = complex(math.cos(t * g.z), math.sin(t * g.z))
    for l, m, al in zip(left, right, alpha):
        val *= displacement_series_element(al, l, m)
    return val


# ---------------------------------------------------------------------------
# orthogonality integrals
# ---------------------------------------------------------------------------


def coefficient_inner_product(t: float, pair_left, pair_right,
                              tolerances: numerics.Tolerances | None = None) -> complex:
    """L^2 pairing of two matrix coefficients over C^n (the group modulo its
    center), by Gauss-Hermite product quadrature.

    pair_left and pair_right are ((l, m)) index pairs; the integrand
    factorizes over coordinates, so each coordinate contributes one plane
    integral, run through the node-doubling protocol.
    """
    (l1, m1), (l2, m2) = pair_left, pair_right
    n = len(l1)
    if not (len(m1) == len(l2) == len(m2) == n):
        raise ValueError("index lengths disagree")
    if n > 2:
        raise ValueError("plane-product quadrature is limited to n <= 2")
    if t == 0:
        raise ValueError("t must be nonzero")
    tol = (tolerances or numerics.DEFAULT_TOLERANCES).quadrature_agreement
    total = 1.0 + 0.0j
    for j in range(n):
        total *= _coordinate_pairing(t, l1[j], m1[j], l2[j], m2[j], tol)
    return total


def _coordinate_pairing(t, l1, m1, l2, m2, tol):
    """integral_C d_{l1 m1}(alpha(w)) conj(d_{l2 m2}(alpha(w))) dw.

    Substituting u = alpha(w) makes the Gaussian weight exactly the Hermite
    weight, leaving the polynomial parts G.
    """

    def at_order(order):
        rule = numerics.gauss_hermite(order)
        acc = 0.0 + 0.0j
        for x, wx in zip(rule.nodes, rule.weights):
            for y, wy in zip(rule.nodes, rule.weights):
                u = complex(x, y)
                acc += wx * wy * _displacement_polypart(l1, m1, u) * \
                    _displacement_polypart(l2, m2, u).conjugate()
        return acc / abs(t)

    # pairings are bounded by the diagonal value ~ pi/|t| (Cauchy-Schwarz),
    # so agreement is judged against that scale; a vanishing integral would
    # otherwise never stabilize in purely relative terms
    floor = 1.0 / abs(t)
    prev = None
    order = 8
    while order <= 256:
        cur = at_order(order)
        if prev is not None and abs(cur - prev) <= tol * max(abs(cur), abs(prev), floor):
            return cur
        prev = cur
        order *= 2
    raise numerics.QuadratureError("coefficient pairing did not converge",
                                   residual=abs(cur - prev))


# ---------------------------------------------------------------------------
# regular functions
# ---------------------------------------------------------------------------


def regular_norm_sq(n: int, k: int):
    """Exact (k+n)!/2^{k+n} with its quadrature companion."""
    if n < 0 or k < 0:
        raise ValueError("need n, k >= 0")
    quad, exact = numerics.gamma_moment(k + n)
    return exact, quad


@dataclass(frozen=True)
class RegularFunction:
    """Finite combination of e^{-|t|} p(t) mu_m (x) conj(mu_{m'}).

    terms maps (m, m') index pairs to polynomial coefficient tuples in t.
    """

    n: int
    terms: tuple  # ((m, m'), coeff tuple) pairs, coeffs exact or float

    @classmethod
    def zero(cls, n):
        return cls(n, ())

    @classmethod
    def from_term(cls, n, poly_coeffs, m, mprime):
        m, mprime = tuple(m), tuple(mprime)
        if len(m) != n or len(mprime) != n:
            raise ValueError("index length mismatch")
        return cls(n, (((m, mprime), tuple(poly_coeffs)),))

    def __add__(self, other):
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        acc = {}
        for key, coeffs in list(self.terms) + list(other.terms):
            cur = list(acc.get(key, ()))
            merged = [0] * max(len(cur), len(coeffs))
            for i, c in enumerate(cur):
                merged[i] = c
            for i, c in enumerate(coeffs):
                merged[i] = merged[i] + c
            acc[key] = tuple(merged)
        return RegularFunction(self.n, tuple(sorted(acc.items())))

    def __mul__(self, other):
        """Ring product: polynomial parts multiply, indices add."""
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        acc = {}
        for (m1, p1), c1 in self.terms:
            for (m2, p2), c2 in other.terms:
                key = (tuple(a + b for a, b in zip(m1, m2)),
                       tuple(a + b for a, b in zip(p1, p2)))
                conv = [0] * (len(c1) + len(c2) - 1)
                for i, a in enumerate(c1):
                    for j, b in enumerate(c2):
                        conv[i + j] = conv[i + j] + a * b
                cur = acc.get(key)
                if cur is None:
                    acc[key] = tuple(conv)
                else:
                    merged = [0] * max(len(cur), len(conv))
                    for i, c in enumerate(cur):
                        merged[i] = c
                    for i, c in enumerate(conv):
                        merged[i] = merged[i] + c
                    acc[key] = tuple(merged)
        return RegularFunction(self.n, tuple(sorted(acc.items())))

    def eval(self, t: float, g: HeisenbergPoint) -> complex:
        total = 0.0 + 0.0j
        damp = math.exp(-abs(t))
        for (m, mprime), coeffs in self.terms:
            p = sum(float(c) * t ** i for i, c in enumerate(coeffs))
            total += damp * p * coefficient_series(t, m, mprime, g)
        return total


def regular_function_eval(f: RegularFunction, t: float, g: HeisenbergPoint) -> complex:
    """Value of a regular function at a central parameter and group point."""
    return f.eval(t, g)


def regular_gram(n: int, monomial_terms):
    """Exact Gram matrix of e^{-|t|} t^k mu_m (x) conj(mu_{m'}) functions in
    the weighted central integral.

    monomial_terms is a list of (k, m, m'); distinct (m, m') pairs are
    orthogonal, and within a pair the entries are the signed moments
    integral e^{-2|t|} t^{k+j} |t|^n dt (zero for odd k+j).
    """
    size = len(monomial_terms)
    gram = [[Fraction(0)] * size for _ in range(size)]
    for i, (k1, m1, p1) in enumerate(monomial_terms):
        for j, (k2, m2, p2) in enumerate(monomial_terms):
            if (tuple(m1), tuple(p1)) != (tuple(m2), tuple(p2)):
                continue
            power = k1 + k2
            if power % 2 == 1:
                continue
            gram[i][j] = Fraction(math.factorial(power + n), 2 ** (power + n))
    return gram


def regular_gram_rank(n: int, monomial_terms) -> int:
    gram = regular_gram(n, monomial_terms)
    norms = gram_schmidt_norms(gram)
    return sum(1 for x in norms if x != 0)


def operator_to_csv(op: FockOperator, path) -> None:
    """Operator matrix as CSV; rows and columns follow multi_indices order."""
    with open(path, "w", encoding="utf-8") as fh:
        header = ";".join("|".join(map(str, m)) for m in multi_indices(op.n, op.cutoff))
        fh.write("# " + header + "\n")
        for row in op.matrix:
            fh.write(",".join(f"{x.real:.17g}{x.imag:+.17g}j" for x in row) + "\n")
