"""Lobachevsky function and the capacity functions of a spherical triangle.

The capacity ``theta`` is the potential on the space of spherical angle
triples whose gradient is ``ln tan(y_i / 2)``.  In closed form

    theta(x) = -sum_i L(x*_i) - L((pi + x1 + x2 + x3) / 2) + 4 L(pi/4)

with ``L`` the Lobachevsky function, normalized so theta vanishes at the
octant triangle ``(pi/2, pi/2, pi/2)``.  The closed form is continuous on
the closed tetrahedron, so values on degenerate triangles are well defined
even though the gradient blows up there.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import integrate

from .trig import (
    CLASSIFY_EPS,
    BoundaryType,
    DomainError,
    _require_interior,
    _triple,
    angles_to_lengths,
    classify,
    dual_angles,
    half_angle_tan2,
)

__all__ = [
    "LobachevskyEvaluator",
    "lobachevsky",
    "lobachevsky_quad",
    "capacity_theta",
    "capacity_theta_tilde",
    "capacity_W",
    "capacity_V",
    "grad_theta",
    "hessian_theta",
    "segment_derivative",
    "segment_derivative_forms",
    "octahedron_volume_check",
    "LOB_PI_4",
]

_N_TERMS = 40


@lru_cache(maxsize=None)
def _clausen_coeffs(n_terms: int = _N_TERMS) -> np.ndarray:
    """|B_2k| / (2k (2k+1)!) for k = 1..n_terms, from exact Bernoulli numbers."""
    m = 2 * n_terms
    B = [Fraction(1)]
    for n in range(1, m + 1):
        s = sum(Fraction(math.comb(n + 1, k)) * B[k] for k in range(n))
        B.append(-s / (n + 1))
    return np.array([float(abs(B[2 * k]) / (2 * k * math.factorial(2 * k + 1)))
                     for k in range(1, n_terms + 1)])


def _lob_reduced(t: np.ndarray) -> np.ndarray:
    # t in [0, pi/2]; L(t) = Cl2(2t) / 2 and
    # Cl2(u) = u - u ln u + sum_k |B_2k| u^(2k+1) / (2k (2k+1)!) for 0 <= u < 2 pi
    u = 2.0 * t
    coeffs = _clausen_coeffs()
    u2 = u * u
    # Horner in u^2 on the tail, highest order first
    tail = np.zeros_like(u)
    for c in coeffs[::-1]:
        tail = tail * u2 + c
    tail = tail * u2 * u
    with np.errstate(divide="ignore", invalid="ignore"):
        head = np.where(u > 0, u - u * np.log(u), 0.0)
    return 0.5 * (head + tail)


def _lob_series(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    r = np.mod(t, math.pi)  # [0, pi)
    flip = r > 0.5 * math.pi
    r = np.where(flip, math.pi - r, r)
    v = _lob_reduced(r)
    return np.where(flip, -v, v)


def lobachevsky_quad(t: float, epsabs: float = 1e-13) -> float:
    """``-int_0^t ln|2 sin u| du`` by adaptive quadrature (test oracle).

    The function vanishes at multiples of pi, so integration starts from
    the nearest one; the log singularity then sits at an endpoint of an
    interval no longer than pi/2.
    """
    t = float(t)
    k = round(t / math.pi)
    a = k * math.pi
    if t == a:
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(lambda u: math.log(abs(2.0 * math.sin(u))), a, t,
                                epsabs=epsabs, epsrel=1e-13, limit=200)
    return -val


@dataclass(frozen=True)
class LobachevskyEvaluator:
    """Evaluates the Lobachevsky function.

    ``method`` is ``"series"`` (Clausen series after range reduction to
    ``[0, pi/2]``) or ``"quadrature"`` (direct integration of the defining
    integral, scalar only and slow).
    """

    method: str = "series"
    target_abs_err: float = 1e-12

    def __post_init__(self):
        if self.method not in ("series", "quadrature"):
            raise ValueError(f"unknown method {self.method!r}")

    def __call__(self, t):
        if self.method == "series":
            v = _lob_series(t)
            return float(v) if np.ndim(v) == 0 else v
        if np.ndim(t) == 0:
            return lobachevsky_quad(float(t))
        return np.vectorize(lobachevsky_quad, otypes=[float])(t)


_SERIES = LobachevskyEvaluator()


def lobachevsky(t):
    """Lobachevsky function ``-int_0^t ln|2 sin u| du``; odd and pi-periodic."""
    return _SERIES(t)


LOB_PI_4 = lobachevsky(math.pi / 4)


def _in_hyperbolic_closure(x: np.ndarray, eps: float) -> bool:
    return bool(np.all(x >= -eps) and x.sum() <= math.pi + eps)


def capacity_W(x) -> float:
    """``-sum L(x*_i) - L((pi + sum x)/2)``, defined for every real triple."""
    x = _triple(x)
    d = dual_angles(x)
    return float(-np.sum(lobachevsky(d)) - lobachevsky(0.5 * (math.pi + x.sum())))


def capacity_theta(x, eps: float = CLASSIFY_EPS) -> float:
    """Capacity of a spherical triangle; continuous up to degenerate triangles."""
    x = _triple(x)
    if classify(x, eps) is BoundaryType.EXTERIOR:
        raise DomainError(f"{x.tolist()} is outside the closed tetrahedron of spherical triangles")
    return capacity_W(x) + 4.0 * LOB_PI_4


def capacity_theta_tilde(x, eps: float = CLASSIFY_EPS) -> float:
    """The un-normalized capacity; vanishes at ``(0, 0, 0)``.

    Accepted on the closed hyperbolic simplex ``{x_i >= 0, sum x <= pi}``
    and on the closed spherical tetrahedron.
    """
    x = _triple(x)
    if not (_in_hyperbolic_closure(x, eps) or classify(x, eps) is not BoundaryType.EXTERIOR):
        raise DomainError(f"{x.tolist()} is outside both triangle moduli closures")
    return capacity_W(x)


def capacity_V(x) -> float:
    """``sum (L(x_i) + L(x*_i)) - L((pi + sum x)/2)``."""
    x = _triple(x)
    d = dual_angles(x)
    return float(np.sum(lobachevsky(x)) + np.sum(lobachevsky(d))
                 - lobachevsky(0.5 * (math.pi + x.sum())))


def _S(u):
    return 0.5 * np.log(np.sin(u))


def _C(x: np.ndarray) -> float:
    return 0.5 * math.log(abs(math.cos(0.5 * x.sum())))


def grad_theta(x) -> np.ndarray:
    """Gradient of the capacity: ``ln tan(y_i / 2)``."""
    x = _triple(x)
    y = angles_to_lengths(x)
    g = np.log(np.tan(0.5 * y))
    d = dual_angles(x)
    s = _S(d)
    g_log = s - s[[1, 2, 0]] - s[[2, 0, 1]] + 0.5 * math.log(abs(math.sin(0.5 * (x.sum() + math.pi))))
    if np.max(np.abs(g - g_log)) > 1e-10 * max(1.0, np.max(np.abs(g))):
        raise ArithmeticError(f"gradient forms disagree at {x.tolist()}")
    return g


def hessian_theta(x) -> np.ndarray:
    """Hessian of the capacity, a positive multiple of the Gram matrix
    ``[[1, cos y3, cos y2], [cos y3, 1, cos y1], [cos y2, cos y1, 1]]``."""
    x = _triple(x)
    y = angles_to_lengths(x)
    sx, sy = np.sin(x), np.sin(y)
    A = sy * sx[[1, 2, 0]] * sx[[2, 0, 1]]
    c_all = sx / sy / A
    c = c_all[0]
    if np.max(np.abs(c_all - c)) > 1e-10 * abs(c):
        raise ArithmeticError(f"sine law check failed at {x.tolist()}")
    cy = np.cos(y)
    G = np.array([[1.0, cy[2], cy[1]],
                  [cy[2], 1.0, cy[0]],
                  [cy[1], cy[0], 1.0]])
    return c * G


def segment_derivative_forms(a, p, t: float) -> tuple[float, float]:
    """Both expansions of ``d/dt theta((1 - t) a + t p)``.

    Returns ``(direct, grouped)``: the gradient dotted with ``p - a``, and the
    regrouping ``2 sum S(x*_i)(p*_i - a*_i) + C(x)(sum p - sum a)`` with
    ``S(u) = ln(sin u)/2`` and ``C(x) = ln|cos(sum x / 2)|/2``.
    """
    a, p = _triple(a), _triple(p)
    if not 0.0 < t <= 1.0:
        raise ValueError("t must lie in (0, 1]")
    x = (1.0 - t) * a + t * p
    _require_interior(x)
    direct = float(np.dot(np.log(np.sqrt(half_angle_tan2(x))), p - a))
    grouped = float(2.0 * np.dot(_S(dual_angles(x)), dual_angles(p) - dual_angles(a))
                    + _C(x) * (p.sum() - a.sum()))
    return direct, grouped


def segment_derivative(a, p, t: float) -> float:
    """Derivative in ``t`` of the capacity along the segment from ``a`` to ``p``.

    ``a`` may sit on the boundary of the tetrahedron; ``p`` should be
    interior.  The grouped form is returned since it keeps the divergent
    log terms separate.
    """
    direct, grouped = segment_derivative_forms(a, p, t)
    if abs(direct - grouped) > 1e-9 * max(1.0, abs(grouped)):
        raise ArithmeticError(f"segment derivative forms disagree: {direct} vs {grouped}")
    return grouped


def octahedron_volume_check(x) -> dict[str, float]:
    """Compare two volume expressions attached to a spherical triangle.

    ``from_theta`` is ``16 L(pi/4) - 4 theta(x)``; ``from_tetrahedra`` sums
    ``V/2`` over the eight triangles cut out by the three great circles
    (antipodal pairs are congruent).  The two are reported side by side
    together with their ratio; they are not expected to coincide.
    """
    x = _triple(x)
    x1, x2, x3 = x
    pi = math.pi
    quads = [(x1, x2, x3), (x1, pi - x2, pi - x3), (pi - x1, x2, pi - x3), (pi - x1, pi - x2, x3)]
    from_tets = 2.0 * sum(capacity_V(q) for q in quads) / 2.0
    from_theta = 16.0 * LOB_PI_4 - 4.0 * capacity_theta(x)
    return {"from_theta": from_theta, "from_tetrahedra": from_tets,
            "ratio": from_theta / from_tets if from_tets != 0 else math.nan}
