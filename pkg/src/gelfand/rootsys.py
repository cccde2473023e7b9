"""Classical root systems (families A-D) in exact rational arithmetic.

Roots and weights live in the usual orthonormal-coordinate realization
(ambient R^{l+1} for A_l, R^l otherwise); the invariant form is the Euclidean
dot product there, so coroot pairings and Weyl dimension products are exact
Fractions throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import dot, fr

FAMILIES = ("A", "B", "C", "D")


@dataclass(frozen=True)
class RootSystemData:
    family: str
    rank: int
    ambient_dim: int
    simple_roots: tuple
    positive_roots: tuple
    fundamental_weights: tuple

    def coroot(self, alpha):
        nn = dot(alpha, alpha)
        return tuple(2 * a / nn for a in alpha)

    @property
    def rho(self):
        amb = self.ambient_dim
        acc = [Fraction(0)] * amb
        for alpha in self.positive_roots:
            acc = [a + x / 2 for a, x in zip(acc, alpha)]
        return tuple(acc)


@dataclass(frozen=True)
class DominantWeight:
    family: str
    rank: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.rank:
            raise ValueError("coefficient count must equal the rank")
        if any((not isinstance(k, int)) or k < 0 for k in self.coeffs):
            raise ValueError("dominant weights need nonnegative integer coefficients")


def _eps(i, n):
    v = [Fraction(0)] * n
    v[i] = Fraction(1)
    return tuple(v)


def _vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _vec_scale(u, c):
    c = fr(c)
    return tuple(a * c for a in u)


def build_root_system(family: str, rank: int) -> RootSystemData:
    """Exact simple roots, positive roots and fundamental weights.

    D needs rank >= 2 (D_1 has no root data in this realization); A-C accept
    any rank >= 1.
    """
    if family not in FAMILIES:
        raise ValueError(f"unsupported family {family!r}")
    if rank < 1:
        raise ValueError("rank must be >= 1")
    if family == "D" and rank < 2:
        raise ValueError("family D needs rank >= 2")

    if family == "A":
        n = rank + 1
        simple = tuple(_vec_sub(_eps(i, n), _eps(i + 1, n)) for i in range(rank))
        positive = tuple(
            _vec_sub(_eps(i, n), _eps(j, n)) for i in range(n) for j in range(i + 1, n)
        )
        funds = []
        for k in range(1, rank + 1):
            v = [Fraction(1) if i < k else Fraction(0) for i in range(n)]
            shift = Fraction(k, n)
            funds.append(tuple(x - shift for x in v))
        return RootSystemData("A", rank, n, simple, positive, tuple(funds))

    n = rank
    chain = [_vec_sub(_eps(i, n), _eps(i + 1, n)) for i in range(rank - 1)]
    if family == "B":
        simple = tuple(chain + [_eps(rank - 1, n)])
        positive = [
            v
            for i in range(n)
            for j in range(i + 1, n)
            for v in (_vec_sub(_eps(i, n), _eps(j, n)), _vec_add(_eps(i, n), _eps(j, n)))
        ] + [_eps(i, n) for i in range(n)]
        funds = [tuple(Fraction(1) if i < k else Fraction(0) for i in range(n)) for k in range(1, rank)]
        funds.append(tuple(Fraction(1, 2) for _ in range(n)))
    elif family == "C":
        simple = tuple(chain + [_vec_scale(_eps(rank - 1, n), 2)])
        positive = [
            v
            for i in range(n)
            for j in range(i + 1, n)
            for v in (_vec_sub(_eps(i, n), _eps(j, n)), _vec_add(_eps(i, n), _eps(j, n)))
        ] + [_vec_scale(_eps(i, n), 2) for i in range(n)]
        funds = [tuple(Fraction(1) if i < k else Fraction(0) for i in range(n)) for k in range(1, rank + 1)]
    else:  # D
        simple = tuple(chain + [_vec_add(_eps(rank - 2, n), _eps(rank - 1, n))])
        positive = [
            v
            for i in range(n)
            for j in range(i + 1, n)
            for v in (_vec_sub(_eps(i, n), _eps(j, n)), _vec_add(_eps(i, n), _eps(j, n)))
        ]
        funds = [tuple(Fraction(1) if i < k else Fraction(0) for i in range(n)) for k in range(1, rank - 1)]
        half = Fraction(1, 2)
        funds.append(tuple([half] * (rank - 1) + [-half]))
        funds.append(tuple([half] * rank))
    return RootSystemData(family, rank, n, tuple(simple), tuple(positive), tuple(funds))


def is_dominant(rs: RootSystemData, coeffs) -> bool:
    return len(coeffs) == rs.rank and all(isinstance(k, int) and k >= 0 for k in coeffs)


def weight_to_eps(rs: RootSystemData, weight: DominantWeight):
    acc = [Fraction(0)] * rs.ambient_dim
    for k, xi in zip(weight.coeffs, rs.fundamental_weights):
        acc = [a + k * x for a, x in zip(acc, xi)]
    return tuple(acc)


def eps_to_coeffs(rs: RootSystemData, vec):
    """Coefficients of ``vec`` in the fundamental-weight basis: the pairings
    with the simple coroots."""
    return tuple(dot(vec, rs.coroot(psi)) for psi in rs.simple_roots)


def weyl_dimension_eps(rs: RootSystemData, lam_eps) -> int:
    rho = rs.rho
    num = Fraction(1)
    den = Fraction(1)
    lam_rho = _vec_add(tuple(map(fr, lam_eps)), rho)
    for alpha in rs.positive_roots:
        num *= dot(lam_rho, alpha)
        den *= dot(rho, alpha)
    val = num / den
    if val.denominator != 1 or val <= 0:
        raise ValueError(f"Weyl product is not a positive integer: {val}")
    return int(val)


def weyl_dimension(rs: RootSystemData, weight: DominantWeight) -> int:
    """Product over positive roots of <lam+rho, alpha>/<rho, alpha>."""
    if weight.family != rs.family or weight.rank != rs.rank:
        raise ValueError("weight does not belong to this root system")
    if not is_dominant(rs, weight.coeffs):
        raise ValueError("weight is not dominant")
    return weyl_dimension_eps(rs, weight_to_eps(rs, weight))


def stabilize_weight(weight: DominantWeight, target_rank: int) -> DominantWeight:
    """Copy the coefficients and pad with zeros up to ``target_rank``."""
    if target_rank < weight.rank:
        raise ValueError("target rank must be >= source rank")
    coeffs = weight.coeffs + (0,) * (target_rank - weight.rank)
    return DominantWeight(weight.family, target_rank, coeffs)


def positive_root_count(family: str, rank: int) -> int:
    return {
        "A": rank * (rank + 1) // 2,
        "B": rank * rank,
        "C": rank * rank,
        "D": rank * (rank - 1),
    }[family]
