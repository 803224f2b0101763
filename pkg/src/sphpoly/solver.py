"""Recover a spherical polyhedron metric from its edge invariant.

The total capacity is strictly convex on the space of spherical angle
structures, and its critical points on the affine slice with prescribed
edge invariant are exactly the angle structures of spherical polyhedron
metrics.  :func:`minimize_capacity` finds that point by Newton's method
restricted to the slice; :func:`extract_metric` reads the edge lengths off
the minimizer.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .angles import (
    FeasibilityStatus,
    edge_invariant,
    face_margins,
    feasibility,
    total_capacity,
)
from .capacity import hessian_theta
from .mesh import EdgeFunction, Mesh, validate_mesh
from .trig import DomainError, half_angle_tan2, is_spherical_length_triple, lengths_to_angles

__all__ = [
    "SolveOptions",
    "SolveStatus",
    "SolveReport",
    "RoundtripReport",
    "minimize_capacity",
    "extract_metric",
    "metric_to_structure",
    "roundtrip",
    "null_space_basis",
    "random_feasible_start",
    "RESIDUAL_TOL",
]

log = logging.getLogger(__name__)

#: largest per-edge length disagreement accepted for a converged solve
RESIDUAL_TOL = 1e-8
# objective increase tolerated by the line search (roundoff near the optimum)
_OBJ_SLACK = 1e-14


@dataclass(frozen=True)
class SolveOptions:
    grad_tol: float = 1e-10
    max_iters: int = 500
    ls_shrink: float = 0.5
    armijo_c: float = 1e-4
    boundary_fraction: float = 0.99

    def __post_init__(self):
        for name in ("grad_tol", "ls_shrink", "armijo_c", "boundary_fraction"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_iters < 0:
            raise ValueError("max_iters must be non-negative")
        if not self.boundary_fraction < 1 or not self.ls_shrink < 1:
            raise ValueError("boundary_fraction and ls_shrink must be below 1")


class SolveStatus(enum.Enum):
    CONVERGED = "Converged"
    INFEASIBLE = "Infeasible"
    ITERATION_LIMIT = "IterationLimit"


@dataclass
class SolveReport:
    status: SolveStatus
    x_final: np.ndarray | None
    lengths: EdgeFunction | None = None
    edge_residuals: EdgeFunction | None = None
    multipliers: EdgeFunction | None = None
    iterations: int = 0
    objective_trace: list[float] = field(default_factory=list)
    grad_norm: float = math.nan
    min_face_margin: float = math.nan
    message: str = ""

    @property
    def converged(self) -> bool:
        return self.status is SolveStatus.CONVERGED

    @property
    def max_residual(self) -> float:
        if self.edge_residuals is None:
            return math.nan
        return max(self.edge_residuals.values.values())


@dataclass
class RoundtripReport:
    max_length_error: float
    solve: SolveReport


def null_space_basis(mesh: Mesh) -> np.ndarray:
    """Orthonormal basis ``N`` (n x |E|) of ``{v : v[c1] + v[c2] = 0 per edge}``.

    Column ``e`` is ``(e_{c1} - e_{c2}) / sqrt(2)``; columns have disjoint
    supports, so they are orthonormal as built.
    """
    pairs = mesh.edge_corners()
    N = np.zeros((mesh.n_corners, len(pairs)))
    r = 1.0 / math.sqrt(2.0)
    for e, (c1, c2) in enumerate(pairs):
        N[c1, e] = r
        N[c2, e] = -r
    return N


def _assemble_hessian(x: np.ndarray) -> np.ndarray:
    n = x.size
    H = np.zeros((n, n))
    for f in range(n // 3):
        s = slice(3 * f, 3 * f + 3)
        H[s, s] = hessian_theta(x[s])
    return H


def _constraint_rates(x: np.ndarray, dx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Slacks of all strict affine inequalities at ``x`` and their rates along ``dx``."""
    X, dX = x.reshape(-1, 3), dx.reshape(-1, 3)
    sX, sd = X.sum(axis=1, keepdims=True), dX.sum(axis=1, keepdims=True)
    slack = np.hstack([X, math.pi - X, 0.5 * (math.pi + X - (sX - X)), sX - math.pi])
    rate = np.hstack([dX, -dX, 0.5 * (dX - (sd - dX)), sd])
    return slack.ravel(), rate.ravel()


def _max_step(x: np.ndarray, dx: np.ndarray) -> float:
    slack, rate = _constraint_rates(x, dx)
    dec = rate < 0
    if not dec.any():
        return math.inf
    return float(np.min(slack[dec] / -rate[dec]))


def random_feasible_start(mesh: Mesh, witness: np.ndarray, rng: np.random.Generator,
                          fraction: float = 0.5) -> np.ndarray:
    """A point of the slice: ``witness`` moved along a random null-space
    direction by ``fraction`` of the distance to the boundary."""
    N = null_space_basis(mesh)
    d = N @ rng.standard_normal(N.shape[1])
    d /= np.linalg.norm(d)
    return witness + fraction * _max_step(witness, d) * d


def extract_metric(mesh: Mesh, x) -> tuple[EdgeFunction, EdgeFunction]:
    """Edge lengths implied by an angle structure.

    Each corner determines the length of the edge it faces within its own
    face.  Returns ``(lengths, residuals)``: the mean of the two values per
    edge and their absolute difference.
    """
    x = np.asarray(x, dtype=float)
    y = np.empty_like(x)
    for f in range(mesh.n_faces):
        tri = x[3 * f:3 * f + 3]
        if not face_margins(tri)[0] > 0:
            raise DomainError(f"face {mesh.face_ids[f]} is not a spherical triangle: {tri.tolist()}")
        y[3 * f:3 * f + 3] = 2.0 * np.arctan(np.sqrt(half_angle_tan2(tri)))
    pairs = mesh.edge_corners()
    a, b = y[pairs[:, 0]], y[pairs[:, 1]]
    return (EdgeFunction.from_array(mesh, 0.5 * (a + b)),
            EdgeFunction.from_array(mesh, np.abs(a - b)))


def metric_to_structure(mesh: Mesh, lengths: EdgeFunction) -> np.ndarray:
    """Inner angles of the spherical polyhedron metric ``lengths``, per corner."""
    x = np.empty(mesh.n_corners)
    for f, (fid, edges) in enumerate(zip(mesh.face_ids, mesh.faces)):
        y = np.array([lengths[e] for e in edges])
        try:
            x[3 * f:3 * f + 3] = lengths_to_angles(y)
        except DomainError as exc:
            raise DomainError(f"face {fid}: {exc}") from exc
    return x


def _finish(mesh: Mesh, status: SolveStatus, x: np.ndarray, it: int, trace: list[float],
            gnorm: float, min_margin: float, message: str = "") -> SolveReport:
    lengths, resid = extract_metric(mesh, x)
    mult = EdgeFunction({e: math.log(math.tan(0.5 * v)) for e, v in lengths.items()})
    if status is SolveStatus.CONVERGED and max(resid.values.values()) > RESIDUAL_TOL:
        status = SolveStatus.ITERATION_LIMIT
        message = "reduced gradient small but edge lengths disagree"
    return SolveReport(status, x, lengths, resid, mult, it, trace, gnorm, min_margin, message)


def minimize_capacity(mesh: Mesh, D: EdgeFunction, opts: SolveOptions | None = None,
                      start: np.ndarray | None = None) -> SolveReport:
    """Minimize the total capacity over angle structures with edge invariant ``D``.

    The start defaults to the LP witness (the point of largest minimum
    slack).  Each iteration takes a Newton step in the null space of the
    edge constraints, capped at ``boundary_fraction`` of the distance to
    the nearest face constraint, then backtracks until the Armijo
    condition holds.
    """
    opts = opts or SolveOptions()
    report = validate_mesh(mesh)
    if not report.ok:
        raise ValueError(f"invalid mesh, edge occurrence counts: {report.violations}")
    if start is None:
        feas = feasibility(mesh, D)
        if feas.status is not FeasibilityStatus.FEASIBLE:
            return SolveReport(SolveStatus.INFEASIBLE, None, message=feas.certificate or "")
        x = feas.witness.copy()
    else:
        x = np.asarray(start, dtype=float).copy()
        if not np.allclose(edge_invariant(mesh, x).as_array(mesh), D.as_array(mesh), atol=1e-9):
            raise ValueError("start point does not have the prescribed edge invariant")
        if not np.all(face_margins(x) > 0):
            raise ValueError("start point is not a spherical angle structure")

    N = null_space_basis(mesh)
    f, g = total_capacity(mesh, x)
    trace = [f]
    min_margin = float(face_margins(x).min())
    it = 0
    while True:
        rg = N.T @ g
        gnorm = float(np.max(np.abs(rg)))
        if gnorm <= opts.grad_tol:
            return _finish(mesh, SolveStatus.CONVERGED, x, it, trace, gnorm, min_margin)
        if it >= opts.max_iters:
            msg = f"iteration limit; smallest face margin seen {min_margin:.3g}"
            return _finish(mesh, SolveStatus.ITERATION_LIMIT, x, it, trace, gnorm, min_margin, msg)

        Hr = N.T @ _assemble_hessian(x) @ N
        try:
            cho = linalg.cho_factor(Hr)
        except linalg.LinAlgError as exc:
            raise ArithmeticError(f"reduced Hessian not positive definite at iteration {it}") from exc
        dz = -linalg.cho_solve(cho, rg)
        dx = N @ dz
        slope = float(g @ dx)
        alpha = min(1.0, opts.boundary_fraction * _max_step(x, dx))
        while True:
            xt = x + alpha * dx
            ft, gt = total_capacity(mesh, xt)
            if ft <= f + opts.armijo_c * alpha * slope + _OBJ_SLACK * max(1.0, abs(f)):
                break
            alpha *= opts.ls_shrink
            if alpha < 1e-16:
                msg = f"line search failed at iteration {it}"
                return _finish(mesh, SolveStatus.ITERATION_LIMIT, x, it, trace, gnorm, min_margin, msg)
        x, f, g = xt, ft, gt
        it += 1
        trace.append(f)
        min_margin = min(min_margin, float(face_margins(x).min()))
        log.debug("iter %d  theta=%.15g  |rg|=%.3g  alpha=%.3g", it, f, gnorm, alpha)


def roundtrip(mesh: Mesh, lengths: EdgeFunction, opts: SolveOptions | None = None,
              start: np.ndarray | None = None) -> RoundtripReport:
    """Metric -> angles -> edge invariant -> solve; report the recovery error."""
    for fid, edges in zip(mesh.face_ids, mesh.faces):
        y = [lengths[e] for e in edges]
        if not is_spherical_length_triple(y):
            raise DomainError(f"face {fid}: lengths {y} are not a spherical triangle")
    x = metric_to_structure(mesh, lengths)
    D = edge_invariant(mesh, x)
    sol = minimize_capacity(mesh, D, opts, start=start)
    if sol.lengths is None:
        return RoundtripReport(math.inf, sol)
    err = max(abs(sol.lengths[e] - lengths[e]) for e in mesh.edges)
    return RoundtripReport(err, sol)
