import math

import numpy as np
import pytest

from conftest import PI, random_interior, sample_invariant
from sphpoly.angles import (
    GUO_MAX_FACES,
    MARGINAL_SLACK,
    FeasibilityStatus,
    constraint_rows,
    delaunay_invariant,
    edge_invariant,
    face_margins,
    feasibility,
    guo_condition_bruteforce,
    in_angle_structure_space,
    total_capacity,
)
from sphpoly.capacity import capacity_theta
from sphpoly.mesh import EdgeFunction, Mesh, load_corpus
from sphpoly.trig import DomainError


def euclidean_faces(rng, n_faces):
    return (PI * rng.dirichlet(np.ones(3), n_faces)).ravel()


def test_constraint_rows_cover_each_corner_once(corpus):
    for mesh in corpus.values():
        rows = constraint_rows(mesh)
        assert rows.shape == (mesh.n_edges, 2)
        assert sorted(rows.ravel()) == list(range(mesh.n_corners))


def test_edge_invariant_examples(double_triangle, octahedron):
    D = edge_invariant(double_triangle, [0.4 * PI] * 6)
    assert all(abs(v - 0.8 * PI) < 1e-15 for _, v in D.items())
    x = np.tile([1.0, 1.2, 1.4], 2)
    assert dict(edge_invariant(double_triangle, x).items()) == {"e1": 2.0, "e2": 2.4, "e3": 2.8}
    D = edge_invariant(octahedron, [PI / 2] * 24)
    assert all(abs(v - PI) < 1e-15 for _, v in D.items())


def test_delaunay_invariant_example(double_triangle):
    x = np.tile([1.0, 1.2, 1.4], 2)
    Dl = delaunay_invariant(double_triangle, x)
    # side angles 2 * (2.6) minus facing 2.0 for e1, and so on
    np.testing.assert_allclose(Dl.as_array(double_triangle), [5.2 - 2.0, 4.8 - 2.4, 4.4 - 2.8], atol=1e-14)


def test_euclidean_invariant_relation(rng, corpus):
    for mesh in corpus.values():
        for _ in range(100):
            x = euclidean_faces(rng, mesh.n_faces)
            D = edge_invariant(mesh, x).as_array(mesh)
            Dl = delaunay_invariant(mesh, x).as_array(mesh)
            np.testing.assert_allclose(2 * D + Dl, 2 * PI, atol=1e-12)


def test_face_margins():
    np.testing.assert_allclose(face_margins([PI / 2] * 3), [PI / 4])  # dual angles bind
    assert face_margins([PI / 3] * 3)[0] == 0.0
    assert in_angle_structure_space([0.4 * PI] * 6)
    assert not in_angle_structure_space([0.4 * PI] * 3 + [0.3 * PI] * 3)


def test_total_capacity_is_face_sum(rng, octahedron):
    x = random_interior(rng, 8).ravel()
    val, grad = total_capacity(octahedron, x)
    assert val == pytest.approx(sum(capacity_theta(t) for t in x.reshape(-1, 3)), abs=1e-13)
    assert total_capacity(octahedron, x, with_gradient=False) == val
    h = 1e-6
    fd = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        fd[i] = (total_capacity(octahedron, x + e, False) - total_capacity(octahedron, x - e, False)) / (2 * h)
    np.testing.assert_allclose(grad, fd, rtol=1e-5)


def test_total_capacity_examples(octahedron, double_triangle):
    assert abs(total_capacity(octahedron, [PI / 2] * 24, False)) < 1e-14
    assert total_capacity(double_triangle, [0.4 * PI] * 6, False) == pytest.approx(2 * 0.19282993400754533, abs=1e-12)


def test_total_capacity_names_bad_face(double_triangle):
    with pytest.raises(DomainError, match="f2"):
        total_capacity(double_triangle, [0.4 * PI] * 3 + [0.1] * 3)
    with pytest.raises(ValueError):
        total_capacity(double_triangle, [1.0] * 5)


def test_feasibility_examples():
    res = feasibility(*_load("double_triangle_08pi"))
    assert res.status is FeasibilityStatus.FEASIBLE and res.slack > 0
    res = feasibility(*_load("double_triangle_03pi"))
    assert res.status is FeasibilityStatus.INFEASIBLE
    assert res.witness is None and "face subset" in res.certificate
    res = feasibility(*_load("octahedron_pi"))
    assert res.feasible


def _load(name):
    p = load_corpus(name)
    return p.mesh, p.invariant


def test_witness_has_prescribed_invariant(rng, corpus):
    for mesh in corpus.values():
        for _ in range(30):
            D = EdgeFunction.from_array(mesh, sample_invariant(rng, mesh))
            res = feasibility(mesh, D)
            if res.feasible:
                np.testing.assert_allclose(edge_invariant(mesh, res.witness).as_array(mesh), D.as_array(mesh), atol=1e-9)
                assert face_margins(res.witness).min() >= res.slack - 1e-9


def test_marginal_boundary(double_triangle):
    # sum of D equal to 2 pi forces every face to be Euclidean
    D = EdgeFunction.from_array(double_triangle, [2 * PI / 3] * 3)
    res = feasibility(double_triangle, D)
    assert res.status is FeasibilityStatus.INFEASIBLE
    assert res.marginal and abs(res.slack) <= MARGINAL_SLACK
    assert "marginal" in res.certificate


def test_feasibility_rejects_nonfinite(double_triangle):
    with pytest.raises(ValueError):
        feasibility(double_triangle, EdgeFunction.from_array(double_triangle, [1.0, math.nan, 1.0]))


def test_guo_examples(double_triangle):
    ok = EdgeFunction.from_array(double_triangle, [0.8 * PI] * 3)
    bad = EdgeFunction.from_array(double_triangle, [0.3 * PI] * 3)
    assert guo_condition_bruteforce(double_triangle, ok)
    assert not guo_condition_bruteforce(double_triangle, bad)


def test_guo_face_limit():
    faces = tuple((f"a{i}", f"b{i}", f"c{i}") for i in range(GUO_MAX_FACES + 1))
    big = Mesh(faces, tuple(f"f{i}" for i in range(len(faces))))
    with pytest.raises(ValueError, match="limited"):
        guo_condition_bruteforce(big, EdgeFunction.constant(big, 1.0))


@pytest.mark.parametrize("name", ["double_triangle", "tetrahedron", "octahedron"])
def test_lp_agrees_with_guo(rng, corpus, name):
    mesh = corpus[name]
    seen = {True: 0, False: 0}
    for _ in range(100):
        D = EdgeFunction.from_array(mesh, sample_invariant(rng, mesh))
        res = feasibility(mesh, D)
        if res.marginal:
            continue
        guo = guo_condition_bruteforce(mesh, D)
        assert res.feasible == guo
        seen[guo] += 1
    assert seen[True] > 10 and seen[False] > 10


def test_guo_condition_not_sufficient_above_pi(double_triangle):
    # the subset condition holds, but the faces cannot close up: with
    # D(e1) small the other two face angles must exceed pi in total
    D = EdgeFunction.from_array(double_triangle, [0.1, 3.2, 3.2])
    assert guo_condition_bruteforce(double_triangle, D)
    assert not feasibility(double_triangle, D).feasible
