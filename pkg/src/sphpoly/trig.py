"""Spherical triangle trigonometry parametrized by inner angles.

Angles ``x = (x1, x2, x3)`` and lengths ``y = (y1, y2, y3)`` with ``y_i``
the side opposite ``x_i``.  Curvature is fixed to +1 (unit sphere).

The space of realizable angle triples is the open tetrahedron

    0 < x_i < pi,  x*_i > 0,  x1 + x2 + x3 > pi

with dual angles ``x*_i = (pi + x_i - x_j - x_k) / 2``.  In the dual
coordinates it is the simplex ``{x* >= 0, sum(x*) <= pi}``, whose four
facets are ``x*_i = 0`` and ``sum(x) = pi``; :func:`classify` names the
boundary strata by which facets are active.
"""

from __future__ import annotations

import enum
import math

import numpy as np

__all__ = [
    "DomainError",
    "BoundaryType",
    "dual_angles",
    "interior_margin",
    "classify",
    "angles_to_lengths",
    "lengths_to_angles",
    "length_jacobian",
    "is_spherical_length_triple",
    "half_angle_tan2",
    "CLASSIFY_EPS",
    "INTERIOR_MARGIN",
]

#: default tolerance for boundary classification
CLASSIFY_EPS = 1e-9
#: points closer than this to the boundary are rejected by smooth evaluators
INTERIOR_MARGIN = 1e-12
# arccos route vs half-angle route for lengths
_CROSS_CHECK_TOL = 1e-10


class DomainError(ValueError):
    """Input lies outside the domain where a formula is defined."""


class BoundaryType(enum.Enum):
    INTERIOR = "Interior"
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    V = "V"
    VI = "VI"
    EXTERIOR = "Exterior"

    def __str__(self):
        return self.value


def _triple(x) -> np.ndarray:
    a = np.asarray(x, dtype=float)
    if a.shape != (3,):
        raise ValueError(f"expected a triple, got shape {a.shape}")
    return a


def dual_angles(x) -> np.ndarray:
    x = _triple(x)
    return 0.5 * (math.pi + x - (x.sum() - x))


def _facets(x: np.ndarray) -> np.ndarray:
    """Signed facet values (x*_1, x*_2, x*_3, (sum(x) - pi)/2); all > 0 inside."""
    d = dual_angles(x)
    return np.array([d[0], d[1], d[2], 0.5 * (x.sum() - math.pi)])


def interior_margin(x) -> float:
    """Smallest of x_i, pi - x_i, x*_i and sum(x) - pi.  Positive iff interior."""
    x = _triple(x)
    d = dual_angles(x)
    return float(min(x.min(), (math.pi - x).min(), d.min(), x.sum() - math.pi))


_STRATA = {
    (): BoundaryType.INTERIOR,
    (3,): BoundaryType.I,
    (0,): BoundaryType.II, (1,): BoundaryType.II, (2,): BoundaryType.II,
    (0, 3): BoundaryType.III, (1, 3): BoundaryType.III, (2, 3): BoundaryType.III,
    (0, 1): BoundaryType.IV, (0, 2): BoundaryType.IV, (1, 2): BoundaryType.IV,
    (0, 1, 2): BoundaryType.V,
    (0, 1, 3): BoundaryType.VI, (0, 2, 3): BoundaryType.VI, (1, 2, 3): BoundaryType.VI,
}


def classify(x, eps: float = CLASSIFY_EPS) -> BoundaryType:
    """Locate ``x`` in the closed tetrahedron or its complement.

    A facet equality counts as active when ``|value| <= eps``.  The
    active set determines the stratum:

    ======  ==========================================
    I       sum(x) = pi only (Euclidean triangles)
    II      one x*_i = 0
    III     one x*_i = 0 and sum(x) = pi
    IV      two x*_j = x*_k = 0 (then x_i = pi)
    V       all x*_i = 0, the point (pi, pi, pi)
    VI      two duals zero and sum(x) = pi, e.g. (pi, 0, 0)
    ======  ==========================================
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    x = _triple(x)
    if not np.all(np.isfinite(x)):
        return BoundaryType.EXTERIOR
    f = _facets(x)
    if np.any(f < -eps):
        return BoundaryType.EXTERIOR
    active = tuple(int(i) for i in np.flatnonzero(f <= eps))
    if not active:
        # facets strictly positive already force 0 < x_i < pi; keep the
        # explicit margin check so the eps contract reads literally
        if x.min() > eps and (math.pi - x).min() > eps:
            return BoundaryType.INTERIOR
        return BoundaryType.EXTERIOR
    # all four facets cannot vanish together (sum(x*) = 0 and = pi)
    return _STRATA.get(active, BoundaryType.EXTERIOR)


def _require_interior(x: np.ndarray, margin: float = INTERIOR_MARGIN) -> None:
    m = interior_margin(x)
    if not m > margin:
        raise DomainError(
            f"angles {tuple(float(v) for v in x)} are not a spherical triangle "
            f"(interior margin {m:.3g}, class {classify(x)})")


def half_angle_tan2(x) -> np.ndarray:
    """tan^2(y_i / 2) from the half-angle form of the cosine law.

    ``-sin(x*_i) cos(sum(x)/2) / (sin(x*_j) sin(x*_k))``; strictly positive
    in the interior because ``cos(sum(x)/2) < 0`` there.
    """
    x = _triple(x)
    d = dual_angles(x)
    s = np.sin(d)
    c = math.cos(0.5 * x.sum())
    return -s * c / (s[[1, 2, 0]] * s[[2, 0, 1]])


def angles_to_lengths(x) -> np.ndarray:
    """Side lengths of the spherical triangle with inner angles ``x``.

    Computed from the cosine law ``cos y_i = (cos x_i + cos x_j cos x_k) /
    (sin x_j sin x_k)`` and checked against the half-angle form, which is
    the value returned (it stays accurate for sides near 0 or pi).
    """
    x = _triple(x)
    _require_interior(x)
    cx, sx = np.cos(x), np.sin(x)
    j, k = [1, 2, 0], [2, 0, 1]
    ratio = (cx + cx[j] * cx[k]) / (sx[j] * sx[k])
    y_cos = np.arccos(np.clip(ratio, -1.0, 1.0))
    y = 2.0 * np.arctan(np.sqrt(half_angle_tan2(x)))
    # arccos loses accuracy like eps/sin(y); compare in cosine space there
    diff = np.abs(np.cos(y) - ratio)
    if np.any(diff > _CROSS_CHECK_TOL) or np.any(
            np.abs(y - y_cos) * np.sin(y) > _CROSS_CHECK_TOL):
        raise ArithmeticError(f"cosine-law forms disagree at {x.tolist()}")
    return y


def is_spherical_length_triple(y) -> bool:
    y = np.asarray(y, dtype=float)
    if y.shape != (3,) or not np.all(np.isfinite(y)):
        return False
    return bool(np.all(y > 0) and np.all(y < math.pi)
                and np.all(y < y.sum() - y) and y.sum() < 2 * math.pi)


def _length_triple_failure(y: np.ndarray) -> str | None:
    if not np.all(np.isfinite(y)):
        return "non-finite length"
    if not (np.all(y > 0) and np.all(y < math.pi)):
        return "length outside (0, pi)"
    if not np.all(y < y.sum() - y):
        return "triangle inequality fails"
    if not y.sum() < 2 * math.pi:
        return "perimeter not below 2*pi"
    return None


def lengths_to_angles(y) -> np.ndarray:
    """Inner angles of the spherical triangle with side lengths ``y``.

    Uses the half-angle formula with semi-perimeter ``s``:
    ``tan^2(x_i/2) = sin(s - y_j) sin(s - y_k) / (sin s sin(s - y_i))``.
    """
    y = _triple(y)
    why = _length_triple_failure(y)
    if why is not None:
        raise DomainError(f"lengths {y.tolist()}: {why}")
    s = 0.5 * y.sum()
    sd = np.sin(s - y)
    t2 = sd[[1, 2, 0]] * sd[[2, 0, 1]] / (math.sin(s) * sd)
    return 2.0 * np.arctan(np.sqrt(t2))


def length_jacobian(x) -> np.ndarray:
    """``J[i, j] = d y_i / d x_j``.

    Diagonal ``sin x_i / A_i`` with ``A_i = sin y_i sin x_j sin x_k``;
    off-diagonal ``J[i, j] = J[i, i] cos y_k`` for the remaining index k.
    """
    x = _triple(x)
    y = angles_to_lengths(x)
    sx = np.sin(x)
    j, k = [1, 2, 0], [2, 0, 1]
    A = np.sin(y) * sx[j] * sx[k]
    if np.max(np.abs(A - A[0])) > 1e-12 * max(1.0, abs(A[0])):
        raise ArithmeticError(f"sine law violated at {x.tolist()}")
    diag = sx / A
    cy = np.cos(y)
    J = np.empty((3, 3))
    for i in range(3):
        for jj in range(3):
            if i == jj:
                J[i, jj] = diag[i]
            else:
                kk = 3 - i - jj
                J[i, jj] = diag[i] * cy[kk]
    return J
