import math
from pathlib import Path

import numpy as np
import pytest

from sphpoly.mesh import CORPUS, load_corpus

DATA = Path(__file__).resolve().parents[1] / "src" / "sphpoly" / "data"
PI = math.pi


def random_interior(rng, size=None):
    """Uniform samples from the open tetrahedron of spherical triangles.

    Sampled uniformly in dual coordinates (the simplex x* >= 0,
    sum x* <= pi) and mapped back by x_i = pi - x*_j - x*_k.
    """
    d = rng.dirichlet(np.ones(4), size=size)[..., :3] * PI
    return PI - d[..., [1, 2, 0]] - d[..., [2, 0, 1]]


def sample_invariant(rng, mesh):
    """Edge invariant with values in (0, pi); roughly two thirds feasible on the corpus."""
    lo = rng.uniform(0.0, 0.9 * PI)
    return rng.uniform(lo, PI, mesh.n_edges)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def corpus():
    return {name: load_corpus(name).mesh for name in CORPUS}


@pytest.fixture(scope="session")
def double_triangle():
    return load_corpus("double_triangle").mesh


@pytest.fixture(scope="session")
def tetrahedron():
    return load_corpus("tetrahedron").mesh


@pytest.fixture(scope="session")
def octahedron():
    return load_corpus("octahedron").mesh


_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" in report.nodeid:
        if report.when == "call" or report.outcome != "passed":
            _acceptance[report.nodeid.split("::")[-1]] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        num, label = name[len("test_criterion_"):].split("_", 1)
        terminalreporter.write_line(f"criterion {int(num):2d} {label:<26} {_acceptance[name]}")
