"""Spherical angle structures on a triangulated surface.

An angle structure is a flat vector with one angle per corner (corner
``3 * f + k`` faces edge ``faces[f][k]``).  This module computes the edge
and Delaunay invariants, the total capacity with its gradient, and decides
whether a prescribed edge invariant is realized by some spherical angle
structure.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .capacity import capacity_theta, grad_theta
from .mesh import EdgeFunction, Mesh
from .simplex import LPStatus, linprog
from .trig import DomainError

__all__ = [
    "FeasibilityStatus",
    "FeasibilityResult",
    "FeasibilityError",
    "constraint_rows",
    "edge_invariant",
    "delaunay_invariant",
    "total_capacity",
    "feasibility",
    "guo_condition_bruteforce",
    "face_margins",
    "in_angle_structure_space",
    "MARGINAL_SLACK",
    "GUO_MAX_FACES",
]

#: optimal slack at or below this is reported infeasible ("marginal")
MARGINAL_SLACK = 1e-11
GUO_MAX_FACES = 20


class FeasibilityStatus(enum.Enum):
    FEASIBLE = "Feasible"
    INFEASIBLE = "Infeasible"


class FeasibilityError(RuntimeError):
    """The LP solver failed (as opposed to proving infeasibility)."""


@dataclass
class FeasibilityResult:
    status: FeasibilityStatus
    witness: np.ndarray | None
    slack: float
    certificate: str | None = None
    marginal: bool = False

    @property
    def feasible(self) -> bool:
        return self.status is FeasibilityStatus.FEASIBLE


def constraint_rows(mesh: Mesh) -> np.ndarray:
    """``(|E|, 2)`` corner pairs; row ``e`` encodes ``x[c1] + x[c2] = D(e)``."""
    return mesh.edge_corners()


def edge_invariant(mesh: Mesh, x) -> EdgeFunction:
    x = np.asarray(x, dtype=float)
    pairs = mesh.edge_corners()
    return EdgeFunction.from_array(mesh, x[pairs].sum(axis=1))


def delaunay_invariant(mesh: Mesh, x) -> EdgeFunction:
    """Four side angles at each edge minus the two facing angles.

    For a self-glued edge the "side" angles are the slots of its face(s)
    other than the facing slot, counted per occurrence.
    """
    x = np.asarray(x, dtype=float)
    pairs = mesh.edge_corners()
    face_sum = x.reshape(-1, 3).sum(axis=1)
    vals = []
    for c1, c2 in pairs:
        side = (face_sum[c1 // 3] - x[c1]) + (face_sum[c2 // 3] - x[c2])
        vals.append(side - x[c1] - x[c2])
    return EdgeFunction.from_array(mesh, vals)


def face_margins(x) -> np.ndarray:
    """Per-face distance to the boundary of the spherical-triangle tetrahedron."""
    X = np.asarray(x, dtype=float).reshape(-1, 3)
    s = X.sum(axis=1, keepdims=True)
    d = 0.5 * (math.pi + X - (s - X))
    return np.min(np.hstack([X, math.pi - X, d, s - math.pi]), axis=1)


def in_angle_structure_space(x) -> bool:
    return bool(np.all(face_margins(x) > 0))


def total_capacity(mesh: Mesh, x, with_gradient: bool = True):
    """Sum of face capacities and (optionally) its gradient per corner.

    Faces are accumulated in index order so results are bit-reproducible.
    Returns ``value`` or ``(value, gradient)``.
    """
    X = np.asarray(x, dtype=float).reshape(-1, 3)
    if X.shape[0] != mesh.n_faces:
        raise ValueError("angle vector length does not match mesh corners")
    total = 0.0
    grad = np.empty(X.size) if with_gradient else None
    for f, tri in enumerate(X):
        try:
            total += capacity_theta(tri)
            if with_gradient:
                grad[3 * f:3 * f + 3] = grad_theta(tri)
        except DomainError as exc:
            raise DomainError(f"face {mesh.face_ids[f]}: {exc}") from exc
    return (total, grad) if with_gradient else total


def _lp_data(mesh: Mesh, D: np.ndarray):
    """Variables ``u = x + L`` (per corner) and ``sigma = s + L``; maximize sigma.

    ``L`` makes ``u, sigma >= 0`` harmless: at ``s = -L`` the point
    ``x = D/2`` on every corner satisfies all inequalities.
    """
    n = mesh.n_corners
    pi = math.pi
    L = 2.0 * pi + 2.0 * float(np.max(np.abs(D), initial=0.0))
    nv = n + 1
    S = n  # slack column
    rows, rhs = [], []

    def add(coefs: dict[int, float], bound: float, const_x: float):
        # sum coefs[i] * x_i + coefs[S] * s <= bound, with x = u - L, s = sigma - L
        r = np.zeros(nv)
        shift = 0.0
        for i, a in coefs.items():
            r[i] += a
            shift += a * L
        rows.append(r)
        rhs.append(bound + shift + const_x)

    for c in range(n):
        add({S: 1.0, c: -1.0}, 0.0, 0.0)        # s - x_c <= 0
        add({c: 1.0, S: 1.0}, pi, 0.0)          # x_c + s <= pi
    for f in range(mesh.n_faces):
        i0 = 3 * f
        for k in range(3):
            j, l = (k + 1) % 3, (k + 2) % 3
            coefs: dict[int, float] = {S: 2.0}
            for idx, a in ((i0 + k, -1.0), (i0 + j, 1.0), (i0 + l, 1.0)):
                coefs[idx] = coefs.get(idx, 0.0) + a
            add(coefs, pi, 0.0)                 # x_j + x_k - x_i + 2 s <= pi
        add({i0: -1.0, i0 + 1: -1.0, i0 + 2: -1.0, S: 1.0}, -pi, 0.0)  # sum >= pi + s

    pairs = mesh.edge_corners()
    A_eq = np.zeros((len(pairs), nv))
    b_eq = np.empty(len(pairs))
    for e, (c1, c2) in enumerate(pairs):
        A_eq[e, c1] += 1.0
        A_eq[e, c2] += 1.0
        b_eq[e] = D[e] + 2.0 * L
    # sigma <= L + pi/2 keeps the program bounded even for degenerate meshes
    bound_row = np.zeros(nv)
    bound_row[S] = 1.0
    rows.append(bound_row)
    rhs.append(L + pi / 2)
    c = np.zeros(nv)
    c[S] = -1.0
    return c, np.array(rows), np.array(rhs), A_eq, b_eq, L


def feasibility(mesh: Mesh, D: EdgeFunction, max_iter: int = 20000) -> FeasibilityResult:
    """Decide whether some spherical angle structure has edge invariant ``D``.

    Maximizes the smallest slack ``s`` over all strict inequalities
    (corner box, dual angles, angle sum); the equalities fix the edge sums.
    Feasible iff the optimum exceeds :data:`MARGINAL_SLACK`.  The witness is
    the maximizing angle vector.
    """
    Dv = D.as_array(mesh)
    if not np.all(np.isfinite(Dv)):
        raise ValueError("edge invariant must be finite")
    c, A_ub, b_ub, A_eq, b_eq, L = _lp_data(mesh, Dv)
    res = linprog(c, A_ub, b_ub, A_eq, b_eq, max_iter=max_iter)
    if res.status is not LPStatus.OPTIMAL:
        raise FeasibilityError(f"LP solver stopped: {res.status.value} after {res.iterations} pivots")
    x = res.x[:-1] - L
    s = float(res.x[-1] - L)
    if s > MARGINAL_SLACK:
        return FeasibilityResult(FeasibilityStatus.FEASIBLE, x, s)
    marginal = s >= 0.0
    cert = _guo_certificate(mesh, Dv)
    if marginal:
        cert = (cert + "; " if cert else "") + f"marginal: optimal slack {s:.3g}"
    return FeasibilityResult(FeasibilityStatus.INFEASIBLE, None, s, cert, marginal)


def _guo_violation(mesh: Mesh, Dv: np.ndarray) -> tuple[list[str], float, float] | None:
    """First face subset violating ``pi |X| < sum_{E(X)} D``, or None."""
    eidx = mesh.edge_index()
    face_edges = [{eidx[e] for e in f} for f in mesh.faces]
    nf = mesh.n_faces
    for size in range(1, nf + 1):
        for X in itertools.combinations(range(nf), size):
            edges = set().union(*(face_edges[f] for f in X))
            total = float(sum(Dv[e] for e in edges))
            if not math.pi * size < total:
                return [mesh.face_ids[f] for f in X], math.pi * size, total
    return None


def _guo_certificate(mesh: Mesh, Dv: np.ndarray) -> str | None:
    if mesh.n_faces > GUO_MAX_FACES:
        return None
    v = _guo_violation(mesh, Dv)
    if v is None:
        return None
    faces, lhs, rhs = v
    return f"face subset {{{', '.join(faces)}}}: pi*|X| = {lhs:.6g} >= sum D over E(X) = {rhs:.6g}"


def guo_condition_bruteforce(mesh: Mesh, D: EdgeFunction) -> bool:
    """True iff ``pi |X| < sum_{e in E(X)} D(e)`` for every nonempty face subset X.

    ``E(X)`` is the set of edges touched by X, each counted once.  All
    ``2^|F| - 1`` subsets are enumerated.
    """
    if mesh.n_faces > GUO_MAX_FACES:
        raise ValueError(f"subset enumeration limited to {GUO_MAX_FACES} faces")
    return _guo_violation(mesh, D.as_array(mesh)) is None
