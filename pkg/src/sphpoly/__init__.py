"""Spherical polyhedron metrics on triangulated surfaces from edge invariants.

A spherical polyhedron metric assigns each edge a length so every face is
a spherical triangle.  Its edge invariant sums the two inner angles facing
each edge.  The metric is recovered from the invariant by minimizing a
strictly convex capacity over angle structures (see :mod:`sphpoly.solver`).
"""

__version__ = "0.1.0"

from .angles import (
    FeasibilityResult,
    FeasibilityStatus,
    delaunay_invariant,
    edge_invariant,
    feasibility,
    guo_condition_bruteforce,
    total_capacity,
)
from .capacity import (
    capacity_theta,
    capacity_theta_tilde,
    capacity_V,
    capacity_W,
    grad_theta,
    hessian_theta,
    lobachevsky,
    segment_derivative,
)
from .mesh import (
    EdgeFunction,
    Mesh,
    find_pi_cycles,
    load_corpus,
    parse_mesh,
    read_mesh,
    render_mesh,
    validate_mesh,
)
from .solver import (
    SolveOptions,
    SolveReport,
    SolveStatus,
    extract_metric,
    metric_to_structure,
    minimize_capacity,
    roundtrip,
)
from .trig import (
    BoundaryType,
    DomainError,
    angles_to_lengths,
    classify,
    dual_angles,
    length_jacobian,
    lengths_to_angles,
)
