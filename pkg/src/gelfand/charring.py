"""Character-ring computations for the compact groups acting on the flat
pieces of the nilmanifold constructions.

Two layers live here.  The lower one works with a single classical root
system: Freudenthal weight multiplicities, Brauer-Klimyk tensor products.
The upper one handles product groups (classical factors plus circle factors)
acting on a complex module through one of the constructions standard / S^2 /
Lambda^2 / outer tensor, and decomposes symmetric powers of the dual module,
which is what degree-d polynomials transform by.

Weights are kept in orthonormal epsilon coordinates: integer tuples for
unitary factors (full gl weight, one entry per column), integer tuples for
so/sp factors (one entry per epsilon), bare integers for circle factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from math import comb, gcd as math_gcd

from . import rootsys
from .exact import dot, fr

# ---------------------------------------------------------------------------
# single root system: Freudenthal and Brauer-Klimyk
# ---------------------------------------------------------------------------


def weight_system(rs: rootsys.RootSystemData, weight: rootsys.DominantWeight):
    """Weight multiplicities of the irreducible module, by Freudenthal's
    recursion.  Returns {epsilon tuple: multiplicity}."""
    if not rootsys.is_dominant(rs, weight.coeffs):
        raise ValueError("weight is not dominant")
    lam = rootsys.weight_to_eps(rs, weight)
    return _freudenthal(rs, lam)


def _freudenthal(rs: rootsys.RootSystemData, lam):
    """Freudenthal recursion over an integerized coordinate lattice.

    The recursion is homogeneous under rescaling all vectors, so clearing
    denominators once lets the inner loop run on plain integer tuples.
    """
    lam = tuple(map(fr, lam))
    rho = rs.rho
    scale = 1
    for vec in (lam, rho, *rs.positive_roots):
        for x in vec:
            d = fr(x).denominator
            scale = scale * d // math_gcd(scale, d)
    lam_i = tuple(int(x * scale) for x in lam)
    rho_i = tuple(int(x * scale) for x in rho)
    roots_i = [tuple(int(x * scale) for x in alpha) for alpha in rs.positive_roots]
    simple_i = [tuple(int(x * scale) for x in psi) for psi in rs.simple_roots]

    lam_rho = tuple(a + b for a, b in zip(lam_i, rho_i))
    lr_norm = sum(a * a for a in lam_rho)
    mults = {lam_i: 1}
    # breadth-first by height; every weight of the module is reachable from
    # a higher weight by subtracting one simple root
    frontier = [lam_i]
    while frontier:
        next_frontier = []
        seen_layer = set()
        for mu in frontier:
            for psi in simple_i:
                cand = tuple(a - b for a, b in zip(mu, psi))
                if cand in seen_layer or cand in mults:
                    continue
                seen_layer.add(cand)
                m = _freudenthal_mult(rho_i, roots_i, lam_rho, lr_norm, mults, cand)
                if m > 0:
                    mults[cand] = m
                    next_frontier.append(cand)
        frontier = next_frontier
    inv = Fraction(1, scale)
    return {tuple(x * inv for x in mu): m for mu, m in mults.items()}


def _freudenthal_mult(rho_i, roots_i, lam_rho, lr_norm, mults, mu):
    denom = lr_norm - sum((a + b) ** 2 for a, b in zip(mu, rho_i))
    if denom == 0:
        return 0
    total = 0
    for alpha in roots_i:
        shifted = tuple(a + b for a, b in zip(mu, alpha))
        while True:
            m = mults.get(shifted)
            if m is None:
                break
            total += m * sum(a * b for a, b in zip(shifted, alpha))
            shifted = tuple(a + b for a, b in zip(shifted, alpha))
    num = 2 * total
    if num % denom != 0 or num < 0:
        raise ArithmeticError(f"Freudenthal produced a bad multiplicity {num}/{denom}")
    return num // denom


def _reflect_to_dominant(family: str, vec):
    """Weyl-reflect ``vec`` into the closed dominant chamber.

    Returns (dominant tuple, sign) or None when the vector is singular
    (fixed by some nontrivial Weyl element).
    """
    v = list(vec)
    if family == "A":
        if len(set(v)) < len(v):
            return None
        order = sorted(range(len(v)), key=lambda i: v[i], reverse=True)
        sign = _perm_sign(order)
        return tuple(v[i] for i in order), sign
    if family in ("B", "C"):
        a = [abs(x) for x in v]
        if 0 in a or len(set(a)) < len(a):
            return None
        sign = 1 if sum(1 for x in v if x < 0) % 2 == 0 else -1
        order = sorted(range(len(a)), key=lambda i: a[i], reverse=True)
        return tuple(a[i] for i in order), sign * _perm_sign(order)
    # D: only even sign flips; determinant of every element is the
    # permutation parity.  A single zero entry absorbs an odd flip for free,
    # so only repeated absolute values are singular.
    a = [abs(x) for x in v]
    if len(set(a)) < len(a):
        return None
    neg = sum(1 for x in v if x < 0)
    order = sorted(range(len(a)), key=lambda i: a[i], reverse=True)
    out = [a[i] for i in order]
    if neg % 2 == 1 and out[-1] != 0:
        out[-1] = -out[-1]
    return tuple(out), _perm_sign(order)


def _perm_sign(order):
    seen = [False] * len(order)
    sign = 1
    for i in range(len(order)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def tensor_decompose(rs: rootsys.RootSystemData, lam: rootsys.DominantWeight,
                     mu: rootsys.DominantWeight):
    """Brauer-Klimyk: run the weight system of mu against lam + rho.

    Returns {DominantWeight: multiplicity}.
    """
    if lam.rank != mu.rank or lam.family != mu.family:
        raise ValueError("tensor factors must share the root system")
    lam_eps = rootsys.weight_to_eps(rs, lam)
    rho = rs.rho
    out: dict = {}
    for nu, m in weight_system(rs, mu).items():
        shifted = tuple(a + b + c for a, b, c in zip(lam_eps, nu, rho))
        res = _reflect_to_dominant(rs.family, shifted)
        if res is None:
            continue
        dom, sign = res
        target = tuple(a - b for a, b in zip(dom, rho))
        coeffs = rootsys.eps_to_coeffs(rs, target)
        if any(c.denominator != 1 or c < 0 for c in map(fr, coeffs)):
            raise ArithmeticError("Brauer-Klimyk left the dominant lattice")
        key = rootsys.DominantWeight(rs.family, rs.rank, tuple(int(c) for c in coeffs))
        out[key] = out.get(key, 0) + sign * m
    return {k: v for k, v in out.items() if v != 0}


# ---------------------------------------------------------------------------
# product groups and polynomial modules
# ---------------------------------------------------------------------------

GL, SO, SP, U1 = "gl", "so", "sp", "u1"


@dataclass(frozen=True)
class Factor:
    """One factor of the acting group.

    kind 'gl' with size n: the unitary group on C^n (weights are full
    integer n-tuples); 'so' with size n: SO(n); 'sp' with size n: Sp(n)
    acting on C^{2n}; 'u1': a circle acting by scalars.
    """

    kind: str
    size: int = 0

    @property
    def eps_rank(self) -> int:
        if self.kind == GL:
            return self.size
        if self.kind == SO:
            return self.size // 2
        if self.kind == SP:
            return self.size
        return 1

    def standard_weights(self):
        """Weights of the defining module (the space the factor acts on)."""
        if self.kind == GL:
            return [_unit(self.size, i) for i in range(self.size)]
        if self.kind == SO:
            r = self.size // 2
            if self.size % 2 == 0:
                return [_unit(r, i) for i in range(r)] + [_neg_unit(r, i) for i in range(r)]
            return (
                [_unit(r, i) for i in range(r)]
                + [_neg_unit(r, i) for i in range(r)]
                + [(0,) * r]
            )
        if self.kind == SP:
            r = self.size
            return [_unit(r, i) for i in range(r)] + [_neg_unit(r, i) for i in range(r)]
        return [1]  # u1 scaling: weight one per coordinate

    def zero_weight(self):
        return 0 if self.kind == U1 else (0,) * self.eps_rank

    def is_dominant(self, w) -> bool:
        if self.kind == U1:
            return True
        if self.kind == GL:
            return all(a >= b for a, b in zip(w, w[1:]))
        if self.kind == SO and self.size == 2:
            return True  # torus, no roots
        if self.kind == SO and self.size % 2 == 0:
            # D-chamber: decreasing with |last| dominated by the one before
            return all(a >= b for a, b in zip(w, w[1:])) and w[-2] >= -w[-1]
        return all(a >= b for a, b in zip(w, w[1:])) and w[-1] >= 0

    def dual(self, w):
        if self.kind == U1:
            return -w
        if self.kind == GL:
            return tuple(-x for x in reversed(w))
        if self.kind == SO and self.size == 2:
            return tuple(-x for x in w)
        if self.kind == SO and self.size % 2 == 0 and (self.size // 2) % 2 == 1:
            return w[:-1] + (-w[-1],)
        return w

    def _root_system(self):
        if self.kind == GL:
            return rootsys.build_root_system("A", self.size - 1) if self.size >= 2 else None
        if self.kind == SO:
            if self.size == 2:
                return None
            if self.size % 2 == 0:
                return rootsys.build_root_system("D", self.size // 2)
            return rootsys.build_root_system("B", self.size // 2)
        if self.kind == SP:
            return rootsys.build_root_system("C", self.size)
        return None

    def dim(self, w) -> int:
        rs = self._root_system()
        if rs is None:
            return 1
        return rootsys.weyl_dimension_eps(rs, self._to_amb(w))

    def weight_multiplicities(self, w):
        """Weight system {weight tuple: multiplicity} of the irreducible with
        highest weight ``w``."""
        rs = self._root_system()
        if rs is None:
            return {w: 1}
        sys = _freudenthal_cached(self.kind, self.size, self._amb_key(w))
        return {self._from_amb(k): m for k, m in sys.items()}

    def rho_strict(self):
        """A strictly dominant integer functional, used to pick off highest
        weights in a Weyl-invariant multiset."""
        if self.kind == U1 or (self.kind == SO and self.size == 2):
            return None
        r = self.eps_rank
        if self.kind == GL:
            return tuple(range(r, 0, -1))
        if self.kind == SO and self.size % 2 == 0:
            # strictly D-dominant: decreasing with |last| strictly smaller
            return tuple(range(r, 0, -1))
        return tuple(range(r, 0, -1))

    def _to_amb(self, w):
        # gl weights go to A_{n-1} ambient coordinates unchanged (the Weyl
        # product only sees differences, so the trace part is harmless)
        return tuple(map(Fraction, w))

    def _amb_key(self, w):
        # the polynomial-module machinery lives on the integral lattice; a
        # half-integral (spin) label here would be a caller bug
        out = []
        for x in w:
            if fr(x).denominator != 1:
                raise ValueError(f"non-integral factor weight {w}")
            out.append(int(x))
        return tuple(out)

    def _from_amb(self, v):
        out = []
        for x in v:
            x = fr(x)
            if x.denominator != 1:
                raise ArithmeticError("left the integral weight lattice")
            out.append(int(x))
        return tuple(out)


def _unit(n, i):
    return tuple(1 if j == i else 0 for j in range(n))


def _neg_unit(n, i):
    return tuple(-1 if j == i else 0 for j in range(n))


@lru_cache(maxsize=None)
def _freudenthal_cached(kind, size, w):
    f = Factor(kind, size)
    rs = f._root_system()
    sys = _freudenthal(rs, tuple(map(Fraction, w)))
    return {tuple(x for x in k): m for k, m in sys.items()}


@dataclass(frozen=True)
class Construction:
    """How the group acts on the module: tag plus the factor indices used."""

    tag: str  # standard | sym2 | lambda2 | tensor | dsum
    args: tuple = ()
    parts: tuple = ()  # for dsum: sub-constructions


@dataclass(frozen=True)
class GroupDatum:
    """A table row instance: factors, module construction, and how strict the
    label-distinctness key is.

    torus_mode:
      'full'     every factor keeps its full character data;
      'su'       gl factors are read modulo determinant characters
                 (tuple of per-factor flags selects which);
      'det_one'  two gl factors with the product of determinants trivial
                 (simultaneous character shifts are quotiented out).
    """

    factors: tuple
    construction: Construction
    torus_mode: str = "full"
    su_flags: tuple = ()

    def module_weights(self):
        """Per-coordinate weight tuples of the module (one entry per factor)."""
        return _construction_weights(self.factors, self.construction)

    @property
    def module_dim(self) -> int:
        return len(self.module_weights())


def _construction_weights(factors, con: Construction):
    zero = [f.zero_weight() for f in factors]
    if con.tag == "dsum":
        out = []
        for part in con.parts:
            out.extend(_construction_weights(factors, part))
        return out
    if con.tag == "trivial":
        (dim,) = con.args
        return [tuple(zero)] * dim
    if con.tag == "standard":
        (i,) = con.args
        std = factors[i].standard_weights()
        coords = []
        for w in std:
            row = list(zero)
            row[i] = w
            coords.append(tuple(row))
    elif con.tag in ("sym2", "lambda2"):
        (i,) = con.args
        std = factors[i].standard_weights()
        pairs = (
            combinations_with_replacement(range(len(std)), 2)
            if con.tag == "sym2"
            else combinations(range(len(std)), 2)
        )
        coords = []
        for a, b in pairs:
            row = list(zero)
            row[i] = _wadd(std[a], std[b])
            coords.append(tuple(row))
    elif con.tag == "tensor":
        i, j = con.args
        coords = []
        for wa in factors[i].standard_weights():
            for wb in factors[j].standard_weights():
                row = list(zero)
                row[i] = wa
                row[j] = wb
                coords.append(tuple(row))
    else:
        raise ValueError(f"unsupported construction {con.tag!r}")
    # scalar circles act on every coordinate with weight one
    out = []
    for row in coords:
        row = list(row)
        for k, f in enumerate(factors):
            if f.kind == U1 and k not in con.args:
                row[k] = 1
        out.append(tuple(row))
    return out


def _wadd(a, b):
    if isinstance(a, int):
        return a + b
    return tuple(x + y for x, y in zip(a, b))


def _wneg(a):
    if isinstance(a, int):
        return -a
    return tuple(-x for x in a)


@dataclass(frozen=True)
class Decomposition:
    """List of (label, multiplicity) with the total dimension it must carry.

    A label is a tuple holding one dominant weight per factor.
    """

    factors: tuple
    entries: tuple
    dimension: int

    def multiplicity(self, label) -> int:
        for lab, m in self.entries:
            if lab == label:
                return m
        return 0


def _label_dim(factors, label) -> int:
    d = 1
    for f, w in zip(factors, label):
        d *= f.dim(w)
    return d


def _label_weight_system(factors, label):
    systems = [f.weight_multiplicities(w) for f, w in zip(factors, label)]
    combined = {}

    def rec(i, prefix, mult):
        if i == len(systems):
            key = tuple(prefix)
            combined[key] = combined.get(key, 0) + mult
            return
        for w, m in systems[i].items():
            rec(i + 1, prefix + [w], mult * m)

    rec(0, [], 1)
    return combined


def decompose_weight_multiset(factors, multiset) -> tuple:
    """Peel highest weights off a Weyl-invariant weight multiset.

    The maximizer of the strictly-dominant pairing over what remains is
    always a highest weight of some constituent; subtract its full weight
    system and repeat.
    """
    remaining = {k: v for k, v in multiset.items() if v}
    rhos = [f.rho_strict() for f in factors]
    entries = []
    while remaining:
        best = max(remaining, key=lambda lab: (_extract_score(lab, rhos), lab))
        for f, w in zip(factors, best):
            if not f.is_dominant(w):
                raise ArithmeticError(f"extraction found non-dominant maximizer {best}")
        mult = remaining[best]
        if mult < 0:
            raise ArithmeticError("negative multiplicity during extraction")
        entries.append((best, mult))
        for w, m in _label_weight_system(factors, best).items():
            newv = remaining.get(w, 0) - mult * m
            if newv:
                remaining[w] = newv
            else:
                remaining.pop(w, None)
    return tuple(entries)


def _extract_score(label, rhos):
    score = Fraction(0)
    for w, rho in zip(label, rhos):
        if rho is None:
            continue
        score += sum(a * b for a, b in zip(w, rho))
    return score


def sym_power_decompose(datum: GroupDatum, d: int) -> Decomposition:
    """Decompose degree-d polynomials on the module under the group.

    Polynomials transform by the d-th symmetric power of the dual module;
    the result is checked for exact dimension conservation.
    """
    if d < 0:
        raise ValueError("degree must be >= 0")
    coords = datum.module_weights()
    dual = [tuple(_wneg(w) for w in row) for row in coords]
    multiset: dict = {}
    for combo in combinations_with_replacement(range(len(coords)), d):
        acc = [f.zero_weight() for f in datum.factors]
        for idx in combo:
            acc = [_wadd(a, w) for a, w in zip(acc, dual[idx])]
        key = tuple(acc)
        multiset[key] = multiset.get(key, 0) + 1
    entries = decompose_weight_multiset(datum.factors, multiset)
    expected = comb(len(coords) + d - 1, d)
    total = sum(m * _label_dim(datum.factors, lab) for lab, m in entries)
    if total != expected:
        raise ArithmeticError(
            f"dimension conservation failed: {total} != {expected} at degree {d}"
        )
    return Decomposition(datum.factors, entries, expected)


# ---------------------------------------------------------------------------
# label canonicalization (torus normalizations) and multiplicity-freeness
# ---------------------------------------------------------------------------


def canonical_label(datum: GroupDatum, label):
    """Quotient the label by whatever characters the torus mode removes.

    'su' shifts each flagged gl weight so its last entry is zero; 'det_one'
    applies one simultaneous shift across the two gl factors.
    """
    if datum.torus_mode == "full":
        return label
    if datum.torus_mode == "su":
        out = []
        for flag, f, w in zip(datum.su_flags, datum.factors, label):
            if flag and f.kind == GL:
                out.append(tuple(x - w[-1] for x in w))
            else:
                out.append(w)
        return tuple(out)
    if datum.torus_mode == "det_one":
        gls = [i for i, f in enumerate(datum.factors) if f.kind == GL]
        if len(gls) != 2:
            raise ValueError("det_one mode expects exactly two gl factors")
        shift = label[gls[1]][-1]
        out = list(label)
        for i in gls:
            out[i] = tuple(x - shift for x in label[i])
        return tuple(out)
    raise ValueError(f"unknown torus mode {datum.torus_mode!r}")


def is_multiplicity_free_polynomial_action(datum: GroupDatum, degree_bound: int):
    """Joint multiplicity-freeness of degrees 0..D.

    Returns (flag, first_violation); the violation reports the degree at
    which a label repeated and the label itself.
    """
    if degree_bound < 1:
        raise ValueError("degree bound must be >= 1")
    seen: dict = {}
    for d in range(degree_bound + 1):
        dec = sym_power_decompose(datum, d)
        for label, mult in dec.entries:
            key = canonical_label(datum, label)
            if mult > 1 or key in seen:
                return False, {"degree": d, "label": key, "multiplicity": mult,
                               "first_degree": seen.get(key, d)}
            seen[key] = d
    return True, None


def invariant_dimension(datum: GroupDatum, kappa, decomposition: Decomposition) -> int:
    """Multiplicity of the dual of ``kappa`` in the decomposition, which is
    the dimension of the invariants in kappa (x) rho."""
    dual = tuple(f.dual(w) for f, w in zip(datum.factors, kappa))
    return decomposition.multiplicity(dual)


def highest_weight_set(datum: GroupDatum, d: int) -> frozenset:
    """Labels occurring in degree-d polynomials on the module."""
    return frozenset(canonical_label(datum, lab) for lab, _ in sym_power_decompose(datum, d).entries)


def _stabilize_factor_weight(factor: Factor, bigger: Factor, w):
    """Pad a weight into the bigger factor of the same kind.

    so/sp epsilon tuples gain zeros on the right; gl tuples gain zeros as a
    sorted multiset (the consistent enumeration for unitary direct systems
    runs from the opposite end of the diagram, so zero-padding happens at
    the top of the column weights).
    """
    if factor.kind != bigger.kind:
        raise ValueError("stabilization needs matching factor kinds")
    if factor.kind == U1:
        return w
    extra = bigger.eps_rank - factor.eps_rank
    if extra < 0:
        raise ValueError("target factor is smaller than the source")
    if factor.kind == GL:
        return tuple(sorted(list(w) + [0] * extra, reverse=True))
    return tuple(list(w) + [0] * extra)


def stabilize_label(small: GroupDatum, big: GroupDatum, label):
    return tuple(
        _stabilize_factor_weight(f, g, w)
        for f, g, w in zip(small.factors, big.factors, label)
    )


def check_stability(small: GroupDatum, big: GroupDatum, d: int):
    """Do the degree-d highest weights at the small rank survive, after
    stabilization, into the set at the big rank?

    Stabilization acts on the raw constituent labels (where zero-padding is
    the shared-highest-weight-vector map); any character quotient is applied
    only afterwards, since shifting and padding do not commute.

    Returns (flag, missing labels).
    """
    if len(small.factors) != len(big.factors) or any(
        f.kind != g.kind for f, g in zip(small.factors, big.factors)
    ):
        raise ValueError("rows have different factor shapes")
    x_big = highest_weight_set(big, d)
    missing = []
    for label, _ in sym_power_decompose(small, d).entries:
        target = canonical_label(big, stabilize_label(small, big, label))
        if target not in x_big:
            missing.append((canonical_label(small, label), target))
    return not missing, missing
