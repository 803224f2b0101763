import math

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from sphpoly.mesh import (
    EdgeFunction,
    Mesh,
    MeshFormatError,
    find_pi_cycles,
    load_corpus,
    parse_mesh,
    render_mesh,
    validate_mesh,
)

PI = math.pi

DOUBLE = """
surface double_triangle
face f1 e1 e2 e3
face f2 e1 e2 e3   # same three edges
"""


def test_double_triangle_counts():
    m = parse_mesh(DOUBLE).mesh
    assert (m.n_faces, m.n_edges, m.n_corners) == (2, 3, 6)
    assert m.name == "double_triangle"
    assert validate_mesh(m).ok


def test_self_glued_edge_accepted():
    # a sphere with a fold: f1 uses edge a twice
    m = parse_mesh("face f1 a a b\nface f2 b c c\n").mesh
    assert validate_mesh(m).ok
    assert m.edge_corners().tolist() == [[0, 1], [2, 3], [4, 5]]


def test_invariant_and_length_tables():
    p = parse_mesh(DOUBLE + "invariant e1 2.513274\nlength e2 1.1071487\n")
    assert p.invariant.values == {"e1": 2.513274}
    assert p.length.values == {"e2": 1.1071487}


@pytest.mark.parametrize("text, lineno, fragment", [
    ("face f1 e1 e2\n", 1, "three edge"),
    ("face f1 e1 e2 e3\nface f1 e1 e2 e3\n", 2, "duplicate face"),
    ("face f1 e1 e2 e3\ninvariant e1 abc\n", 2, "bad decimal"),
    ("face f1 e1 e2 e3\ninvariant e1 1e999\n", 2, "representable"),
    ("face f1 e1 e2 e3\ninvariant e1 nan\n", 2, "representable"),
    ("face f1 e1 e2 e3\ninvariant e9 1.0\n", 2, "unreferenced"),
    ("face f1 e1 e2 e3\nlength e1 1\nlength e1 2\n", 3, "duplicate length"),
    ("face f1 e1 e2 e-3\n", 1, "identifier"),
    ("# c\nwidget w\n", 2, "unknown keyword"),
    ("face f1 e1 e2 e3\nvertex v f9:0\n", 2, "unknown face"),
    ("face f1 e1 e2 e3\nvertex v f1:3\n", 2, "corner reference"),
])
def test_parse_errors_carry_line_numbers(text, lineno, fragment):
    with pytest.raises(MeshFormatError) as exc:
        parse_mesh(text)
    assert exc.value.lineno == lineno
    assert fragment in str(exc.value)


def test_validate_reports_counts():
    once = parse_mesh("face f1 e1 e2 e3\nface f2 e2 e3 e4\n").mesh
    rep = validate_mesh(once)
    assert not rep.ok and rep.violations == {"e1": 1, "e4": 1}
    thrice = parse_mesh("face f1 e1 e2 e3\nface f2 e1 e2 e3\nface f3 e1 e4 e4\n").mesh
    assert validate_mesh(thrice).violations == {"e1": 3}


def test_corpus_euler_relation(corpus):
    for m in corpus.values():
        assert validate_mesh(m).ok
        assert 2 * m.n_edges == 3 * m.n_faces


@pytest.mark.parametrize("name", ["double_triangle_metric", "octahedron_pi", "tetrahedron_generic"])
def test_render_roundtrip(name):
    p = load_corpus(name)
    text = render_mesh(p.mesh, p.invariant, p.length)
    q = parse_mesh(text)
    assert q.mesh == p.mesh
    assert q.invariant == p.invariant and q.length == p.length


ident = st.text(alphabet="abcxyz019_", min_size=1, max_size=4)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(ident, ident, ident), min_size=1, max_size=6))
def test_render_parse_property(edge_triples):
    m = Mesh(tuple(edge_triples), tuple(f"f{i}" for i in range(len(edge_triples))))
    assert parse_mesh(render_mesh(m)).mesh == m


def _oracle_cycle_count(mesh, D, eps=1e-9):
    """Simple cycles of the edge/face incidence graph restricted to pi-edges."""
    G = nx.Graph()
    loops = 0
    for fid, f in zip(mesh.face_ids, mesh.faces):
        pis = [e for e in f if abs(D[e] - PI) <= eps]
        for e in set(pis):
            G.add_edge(("e", e), ("f", fid))
            if pis.count(e) >= 2:
                loops += 1
    return loops + sum(1 for c in nx.simple_cycles(G) if len(c) >= 4)


def test_pi_cycles_octahedron_matches_oracle(octahedron):
    D = EdgeFunction.constant(octahedron, PI)
    cycles = find_pi_cycles(octahedron, D)
    assert len(cycles) == _oracle_cycle_count(octahedron, D) == 28
    # the four faces around a vertex form a cycle through its four edges
    around_pz = {"fppp", "fpnp", "fnpp", "fnnp"}
    assert any({f for _, f in c} == around_pz and len(c) == 4 for c in cycles)


def test_pi_cycles_double_triangle(double_triangle):
    assert find_pi_cycles(double_triangle, EdgeFunction.constant(double_triangle, 0.8 * PI)) == []
    D = EdgeFunction({"e1": PI, "e2": 0.8 * PI, "e3": 0.8 * PI})
    assert find_pi_cycles(double_triangle, D) == []
    D = EdgeFunction.constant(double_triangle, PI)
    assert len(find_pi_cycles(double_triangle, D)) == _oracle_cycle_count(double_triangle, D)


def test_pi_cycle_self_loop():
    m = parse_mesh("face f1 a a b\nface f2 b c c\n").mesh
    D = EdgeFunction({"a": PI, "b": 1.0, "c": 1.0})
    assert find_pi_cycles(m, D) == [(("a", "f1"),)]


def test_pi_cycles_independent_of_face_order(octahedron, rng):
    D = EdgeFunction({e: PI if rng.random() < 0.7 else 2.0 for e in octahedron.edges})
    perm = rng.permutation(octahedron.n_faces)
    shuffled = Mesh(tuple(octahedron.faces[i] for i in perm),
                    tuple(octahedron.face_ids[i] for i in perm))
    assert find_pi_cycles(shuffled, D) == find_pi_cycles(octahedron, D)


def test_pi_cycles_not_checked_on_large_mesh():
    faces = tuple((f"a{i}", f"b{i}", f"c{i}") for i in range(33)) * 2
    m = Mesh(faces, tuple(f"f{i}" for i in range(66)))
    assert find_pi_cycles(m, EdgeFunction.constant(m, PI)) is None
