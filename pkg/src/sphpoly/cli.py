"""Command-line interface.

    sphpoly info FILE         mesh counts, validation, pi-cycle warnings
    sphpoly feas FILE         feasibility of the file's invariant table
    sphpoly solve FILE        recover the metric for the invariant table
    sphpoly roundtrip FILE    length table -> invariant -> solve -> compare
    sphpoly triangle --angles A B C
    sphpoly lob T

Exit codes: 0 success, 1 usage/parse/validation error, 2 infeasible,
3 solver did not converge.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Sequence, TextIO

import numpy as np

from . import __version__
from .angles import FeasibilityError, feasibility
from .capacity import (
    capacity_theta,
    capacity_theta_tilde,
    capacity_V,
    grad_theta,
    hessian_theta,
    lobachevsky,
)
from .mesh import MeshFormatError, cone_angles, find_pi_cycles, read_mesh, validate_mesh
from .solver import RESIDUAL_TOL, SolveOptions, SolveStatus, minimize_capacity, random_feasible_start, roundtrip
from .trig import BoundaryType, DomainError, angles_to_lengths, classify, dual_angles

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_NOCONV = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _fmt(v: float) -> str:
    return format(float(v), ".12g")


class _Out:
    """Writes results as human-readable lines or ``key=value`` lines."""

    def __init__(self, stream: TextIO, machine: bool):
        self.stream = stream
        self.machine = machine

    def kv(self, key: str, value, label: str | None = None):
        if isinstance(value, (float, np.floating)):
            value = _fmt(value)
        if self.machine:
            self.stream.write(f"{key}={value}\n")
        else:
            self.stream.write(f"{label or key}: {value}\n")

    def text(self, line: str):
        if not self.machine:
            self.stream.write(line + "\n")


def _positive_float(s: str) -> float:
    try:
        v = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}") from None
    if not (math.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError(f"must be a positive finite number: {s!r}")
    return v


def _finite_float(s: str) -> float:
    try:
        v = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be finite: {s!r}")
    return v


def _nonneg_int(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {s!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=_positive_float, default=None,
                        help="tolerance override (solver gradient, cycle/boundary eps)")
    common.add_argument("--max-iters", type=_nonneg_int, default=None)
    common.add_argument("--seed", type=int, default=None,
                        help="start the solver from a random interior point")
    common.add_argument("--machine", action="store_true", help="key=value output")

    p = _Parser(prog="sphpoly", description="Spherical polyhedron metrics from edge invariants.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, help_ in (("info", "mesh summary and validation"),
                        ("feas", "feasibility of the invariant table"),
                        ("solve", "recover the metric with the given edge invariant"),
                        ("roundtrip", "recover the file's length table from its invariant")):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("path")
    tri = sub.add_parser("triangle", parents=[common], help="single-triangle diagnostics")
    tri.add_argument("--angles", nargs=3, type=_finite_float, required=True, metavar=("A", "B", "C"))
    lob = sub.add_parser("lob", parents=[common], help="Lobachevsky function")
    lob.add_argument("t", type=_finite_float)
    return p


def _require_valid(mesh, err: TextIO) -> bool:
    rep = validate_mesh(mesh)
    if not rep.ok:
        for e, c in sorted(rep.violations.items()):
            err.write(f"error: edge {e} occurs {c} times (expected 2)\n")
    return rep.ok


def _solve_options(args) -> SolveOptions:
    kw = {}
    if args.tol is not None:
        kw["grad_tol"] = args.tol
    if args.max_iters is not None:
        kw["max_iters"] = args.max_iters
    return SolveOptions(**kw)


def _start(mesh, D, args):
    if args.seed is None:
        return None
    feas = feasibility(mesh, D)
    if not feas.feasible:
        return None
    return random_feasible_start(mesh, feas.witness, np.random.default_rng(args.seed))


def _cmd_info(args, out: _Out, err: TextIO) -> int:
    parsed = read_mesh(args.path)
    m = parsed.mesh
    out.kv("surface", m.name or "-")
    out.kv("faces", m.n_faces)
    out.kv("edges", m.n_edges)
    out.kv("corners", m.n_corners)
    rep = validate_mesh(m)
    out.kv("valid", int(rep.ok))
    for e, c in sorted(rep.violations.items()):
        out.kv(f"violation.{e}", c, label=f"edge {e} occurrences")
    if parsed.invariant is not None and rep.ok:
        eps = args.tol if args.tol is not None else 1e-9
        cycles = find_pi_cycles(m, parsed.invariant, eps)
        if cycles is None:
            out.kv("pi_cycles", "not_checked")
        else:
            out.kv("pi_cycles", len(cycles))
            for cyc in cycles:
                desc = " ".join(f"{e} {f}" for e, f in cyc)
                out.text(f"warning: {{0,0,pi}}-cycle candidate: {desc}")
            if cycles:
                err.write(f"warning: {len(cycles)} candidate {{0,0,pi}}-cycles; "
                          "existence is not guaranteed\n")
    return EXIT_OK if rep.ok else EXIT_USAGE


def _need_table(parsed, kind: str, err: TextIO):
    table = getattr(parsed, kind)
    if table is None:
        err.write(f"error: file has no '{kind}' lines\n")
        return None
    missing = [e for e in parsed.mesh.edges if e not in table.values]
    if missing:
        err.write(f"error: {kind} missing for edges {', '.join(missing)}\n")
        return None
    return table


def _cmd_feas(args, out: _Out, err: TextIO) -> int:
    parsed = read_mesh(args.path)
    if not _require_valid(parsed.mesh, err):
        return EXIT_USAGE
    D = _need_table(parsed, "invariant", err)
    if D is None:
        return EXIT_USAGE
    res = feasibility(parsed.mesh, D)
    if res.feasible:
        out.kv("status", "FEASIBLE")
        out.kv("slack", res.slack)
        return EXIT_OK
    out.kv("status", "INFEASIBLE")
    out.kv("slack", res.slack)
    if res.certificate:
        out.kv("certificate", res.certificate)
    return EXIT_INFEASIBLE


def _report_solution(mesh, sol, out: _Out):
    out.kv("status", sol.status.value)
    out.kv("iterations", sol.iterations)
    out.kv("grad_norm", sol.grad_norm)
    if sol.x_final is None:
        return
    for e in mesh.edges:
        out.kv(f"length.{e}", sol.lengths[e], label=f"length {e}")
    for c, v in enumerate(sol.x_final):
        out.kv(f"angle.{mesh.corner_label(c)}", v, label=f"angle {mesh.corner_label(c)}")
    for e in mesh.edges:
        out.kv(f"residual.{e}", sol.edge_residuals[e], label=f"residual {e}")
    out.kv("max_residual", sol.max_residual)
    if mesh.vertices:
        for v, a in cone_angles(mesh, sol.x_final).items():
            out.kv(f"cone_angle.{v}", a, label=f"cone angle {v}")


def _cmd_solve(args, out: _Out, err: TextIO) -> int:
    parsed = read_mesh(args.path)
    if not _require_valid(parsed.mesh, err):
        return EXIT_USAGE
    D = _need_table(parsed, "invariant", err)
    if D is None:
        return EXIT_USAGE
    m = parsed.mesh
    cycles = find_pi_cycles(m, D)
    if cycles:
        err.write(f"warning: {len(cycles)} candidate {{0,0,pi}}-cycles\n")
    sol = minimize_capacity(m, D, _solve_options(args), start=_start(m, D, args))
    if sol.status is SolveStatus.INFEASIBLE:
        out.kv("status", "INFEASIBLE")
        err.write(f"infeasible: {sol.message}\n")
        return EXIT_INFEASIBLE
    _report_solution(m, sol, out)
    if sol.status is not SolveStatus.CONVERGED:
        err.write(f"not converged: {sol.message}\n")
        return EXIT_NOCONV
    return EXIT_OK


def _cmd_roundtrip(args, out: _Out, err: TextIO) -> int:
    parsed = read_mesh(args.path)
    if not _require_valid(parsed.mesh, err):
        return EXIT_USAGE
    lengths = _need_table(parsed, "length", err)
    if lengths is None:
        return EXIT_USAGE
    try:
        rep = roundtrip(parsed.mesh, lengths, _solve_options(args))
    except DomainError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    out.kv("status", rep.solve.status.value)
    out.kv("iterations", rep.solve.iterations)
    out.kv("max_length_error", rep.max_length_error)
    if rep.solve.status is SolveStatus.INFEASIBLE:
        return EXIT_INFEASIBLE
    if not rep.solve.converged or not rep.max_length_error <= RESIDUAL_TOL:
        err.write(f"not recovered: {rep.solve.message}\n")
        return EXIT_NOCONV
    return EXIT_OK


def _triple_kv(out: _Out, key: str, v):
    for i, t in enumerate(v, start=1):
        out.kv(f"{key}.{i}", t, label=f"{key}{i}")


def _cmd_triangle(args, out: _Out, err: TextIO) -> int:
    x = np.array(args.angles)
    eps = args.tol if args.tol is not None else 1e-9
    cls = classify(x, eps)
    out.kv("class", cls.value)
    _triple_kv(out, "dual", dual_angles(x))
    if cls is BoundaryType.INTERIOR:
        try:
            y = angles_to_lengths(x)
        except DomainError as exc:
            # within eps of interior but closer than the smooth-evaluation margin
            err.write(f"note: {exc}\n")
            y = None
        if y is not None:
            _triple_kv(out, "length", y)
    if cls is not BoundaryType.EXTERIOR:
        out.kv("theta", capacity_theta(x, eps))
    try:
        out.kv("theta_tilde", capacity_theta_tilde(x, eps))
    except DomainError:
        pass
    out.kv("V", capacity_V(x))
    if cls is BoundaryType.INTERIOR and y is not None:
        _triple_kv(out, "grad", grad_theta(x))
        _triple_kv(out, "hessian_eig", np.linalg.eigvalsh(hessian_theta(x)))
    return EXIT_OK


def _cmd_lob(args, out: _Out, err: TextIO) -> int:
    out.kv("lob", lobachevsky(args.t), label=f"Lambda({_fmt(args.t)})")
    return EXIT_OK


_COMMANDS = {
    "info": _cmd_info,
    "feas": _cmd_feas,
    "solve": _cmd_solve,
    "roundtrip": _cmd_roundtrip,
    "triangle": _cmd_triangle,
    "lob": _cmd_lob,
}


def run(argv: Sequence[str] | None = None, stdout: TextIO | None = None,
        stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    out = _Out(stdout, args.machine)
    try:
        return _COMMANDS[args.command](args, out, stderr)
    except MeshFormatError as exc:
        stderr.write(f"{getattr(args, 'path', '')}: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except FeasibilityError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_NOCONV


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
