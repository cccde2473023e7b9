"""Shared numerical substrate: Gaussian quadrature, sphere product rules,
Gaussian-plane integrals, matrix exponentials, and the tolerance knobs that
every verification suite cites.

Quadrature nodes and weights come from numpy/scipy's orthogonal-polynomial
routines; the exactness contract (degree <= 2*order - 1 polynomials against
closed-form moments) is asserted by the test suite rather than re-derived
here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numpy.polynomial.hermite import hermgauss
from numpy.polynomial.laguerre import laggauss
from numpy.polynomial.legendre import leggauss
from scipy.linalg import expm as _scipy_expm
from scipy.special import roots_jacobi


@dataclass(frozen=True)
class Tolerances:
    """Central tolerance configuration.

    quadrature_agreement: two successive quadrature orders must agree to this
        relative tolerance before a value is accepted.
    exact_identity: tolerance for identities that are exact in the underlying
        mathematics but evaluated through floating-point quadrature.
    truncated_operator: tolerance for operator identities limited by Fock
        cutoff truncation rather than by quadrature.
    """

    quadrature_agreement: float = 1e-8
    exact_identity: float = 1e-10
    truncated_operator: float = 1e-6


DEFAULT_TOLERANCES = Tolerances()


class QuadratureError(RuntimeError):
    """Raised when the node-doubling protocol fails to converge; carries the
    last residual estimate."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class QuadratureRule:
    kind: str
    nodes: tuple
    weights: tuple
    order: int

    def integrate(self, f):
        return sum(w * f(x) for x, w in zip(self.nodes, self.weights))


_RULE_CACHE: dict = {}


def _cached(kind, order, builder):
    key = (kind, order)
    rule = _RULE_CACHE.get(key)
    if rule is None:
        nodes, weights = builder(order)
        rule = QuadratureRule(kind, tuple(map(float, nodes)),
                              tuple(map(float, weights)), order)
        _RULE_CACHE[key] = rule
    return rule


def gauss_laguerre(order: int) -> QuadratureRule:
    """Nodes/weights for integral_0^inf f(x) e^{-x} dx."""
    return _cached("laguerre", order, laggauss)


def gauss_hermite(order: int) -> QuadratureRule:
    """Nodes/weights for integral_R f(x) e^{-x^2} dx."""
    return _cached("hermite", order, hermgauss)


def gauss_legendre(order: int) -> QuadratureRule:
    """Nodes/weights for integral_{-1}^1 f(x) dx."""
    return _cached("legendre", order, leggauss)


def gauss_jacobi(order: int, alpha: float, beta: float) -> QuadratureRule:
    """Nodes/weights for integral_{-1}^1 f(x) (1-x)^a (1+x)^b dx."""
    key = ("jacobi", order, alpha, beta)
    rule = _RULE_CACHE.get(key)
    if rule is None:
        nodes, weights = roots_jacobi(order, alpha, beta)
        rule = QuadratureRule("jacobi", tuple(map(float, nodes)),
                              tuple(map(float, weights)), order)
        _RULE_CACHE[key] = rule
    return rule


def _doubling(values_at_order, start=8, max_order=512, tolerances=None):
    """Run ``values_at_order`` at doubling orders until two successive results
    agree to the configured relative tolerance."""
    tol = (tolerances or DEFAULT_TOLERANCES).quadrature_agreement
    prev = None
    order = start
    while order <= max_order:
        cur = values_at_order(order)
        if prev is not None:
            scale = max(abs(prev), abs(cur), 1e-300)
            if abs(cur - prev) <= tol * scale:
                return cur
        prev = cur
        order *= 2
    raise QuadratureError(
        f"quadrature did not converge below rel. {tol} by order {max_order}",
        residual=abs(cur - prev) / max(abs(cur), 1e-300),
    )


def half_line_moment(k: int, tolerances: Tolerances | None = None):
    """integral_0^inf t^k e^{-2t} dt by Gauss-Laguerre, with exact companion
    k!/2^{k+1}."""
    if k < 0:
        raise ValueError("k must be a nonnegative integer")

    def at_order(order):
        rule = gauss_laguerre(order)
        # weight e^{-t} is built in; leftover integrand t^k e^{-t}
        return sum(w * (x ** k) * math.exp(-x) for x, w in zip(rule.nodes, rule.weights))

    exact = Fraction(math.factorial(k), 2 ** (k + 1))
    return _doubling(at_order, tolerances=tolerances), exact


def gamma_moment(k: int, tolerances: Tolerances | None = None):
    """Full-line weighted moment integral_R e^{-2|t|} |t|^k dt with exact
    companion k!/2^k."""
    quad, half = half_line_moment(k, tolerances)
    return 2.0 * quad, 2 * half


def gaussian_plane_integral(f, scale: float, tolerances: Tolerances | None = None):
    """integral_C f(w) e^{-scale*|w|^2} dw (Lebesgue on C ~ R^2).

    ``f`` must be polynomially bounded; the rule is a Gauss-Hermite product
    with nodes rescaled by 1/sqrt(scale), run through the doubling protocol.
    """
    if scale <= 0:
        raise ValueError("scale must be positive")
    s = math.sqrt(scale)

    def at_order(order):
        # substituting w = (u + iv)/sqrt(scale) folds the Gaussian weight
        # exactly into the Hermite rule
        rule = gauss_hermite(order)
        xs = rule.nodes
        ws = rule.weights
        total = 0.0
        mass = 0.0
        for xi, wi in zip(xs, ws):
            for yj, wj in zip(xs, ws):
                val = f(complex(xi / s, yj / s))
                total += wi * wj * val
                mass += wi * wj * abs(val)
        return total / scale, mass / scale

    # agreement is judged against the integrand's own absolute mass, so an
    # integral that cancels to zero still converges
    tol = (tolerances or DEFAULT_TOLERANCES).quadrature_agreement
    prev = None
    order = 8
    while order <= 256:
        cur, mass = at_order(order)
        if prev is not None:
            if abs(cur - prev) <= tol * max(abs(prev), abs(cur), mass, 1e-300):
                return cur
        prev = cur
        order *= 2
    raise QuadratureError("gaussian_plane_integral did not converge",
                          residual=abs(cur - prev))


def sphere_surface_area(n_ambient: int) -> float:
    return 2 * math.pi ** (n_ambient / 2) / math.gamma(n_ambient / 2)


def sphere_product_rule(n_ambient: int, order: int):
    """Product quadrature on S^{N-1} with the *normalized* measure.

    Returns (points, weights) as numpy arrays; points has shape (k, N).
    Spherical coordinates with Gauss-Jacobi rules in each polar angle and a
    trapezoid-free uniform rule in the final azimuthal angle (exact for
    trigonometric polynomials of degree < #nodes).
    """
    if n_ambient < 2:
        raise ValueError("need ambient dimension >= 2")
    if n_ambient == 2:
        k = max(4 * order, 8)
        ang = 2 * math.pi * np.arange(k) / k
        pts = np.stack([np.cos(ang), np.sin(ang)], axis=1)
        return pts, np.full(k, 1.0 / k)
    # x1 = cos(theta) with density (1-x1^2)^{(N-3)/2} on [-1, 1]
    a = (n_ambient - 3) / 2.0
    rule = gauss_jacobi(order, a, a)
    sub_pts, sub_wts = sphere_product_rule(n_ambient - 1, order)
    pts = []
    wts = []
    total = sum(rule.weights)
    for x, w in zip(rule.nodes, rule.weights):
        r = math.sqrt(max(0.0, 1 - x * x))
        block = np.concatenate([np.full((len(sub_pts), 1), x), r * sub_pts], axis=1)
        pts.append(block)
        wts.append((w / total) * sub_wts)
    return np.concatenate(pts, axis=0), np.concatenate(wts)


def integrate_sphere(f, n_ambient: int, order: int) -> float:
    """Integrate f over S^{N-1} against the normalized measure."""
    pts, wts = sphere_product_rule(n_ambient, order)
    return float(sum(w * f(p) for p, w in zip(pts, wts)))


def matrix_exp(a: np.ndarray) -> np.ndarray:
    """Matrix exponential; exp(0) = I exactly, otherwise scipy's expm."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix_exp needs a square matrix")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix_exp needs finite entries")
    if not a.any():
        return np.eye(a.shape[0], dtype=a.dtype if a.dtype.kind == "c" else float)
    return _scipy_expm(a)
