"""Closed triangulated surfaces as pure edge-gluing combinatorics.

A surface is a list of faces, each face a triple of edge identifiers.
Slot ``k`` of a face holds the edge *facing* corner ``k``.  Corners are
numbered ``3 * face_index + slot`` (zero based), so an angle vector is a
flat array of length ``3 * |F|`` in face order.

The text format is line oriented::

    # comment
    surface octahedron
    face f1 e1 e2 e3
    invariant e1 2.513274
    length e1 1.1071487
    vertex v1 f1:0 f2:0

Vertices are optional; they only serve cone-angle reports.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, TextIO

import numpy as np

__all__ = [
    "Mesh",
    "EdgeFunction",
    "MeshFormatError",
    "ValidationReport",
    "ParsedMesh",
    "parse_mesh",
    "read_mesh",
    "render_mesh",
    "validate_mesh",
    "find_pi_cycles",
    "MAX_CYCLE_FACES",
    "cone_angles",
    "load_corpus",
    "CORPUS",
]

_IDENT = re.compile(r"^[A-Za-z0-9_]+$")

#: meshes larger than this are not searched for pi-cycles
MAX_CYCLE_FACES = 64


class MeshFormatError(ValueError):
    """Raised for malformed mesh text; carries the 1-based line number."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Mesh:
    faces: tuple[tuple[str, str, str], ...]
    face_ids: tuple[str, ...]
    name: str | None = None
    # vertex id -> tuple of (face_id, slot) corner incidences
    vertices: Mapping[str, tuple[tuple[str, int], ...]] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.faces) != len(self.face_ids):
            raise ValueError("faces and face_ids differ in length")
        if len(set(self.face_ids)) != len(self.face_ids):
            raise ValueError("duplicate face identifier")
        for f in self.faces:
            if len(f) != 3:
                raise ValueError(f"face record {f!r} is not a triple")

    @property
    def edges(self) -> tuple[str, ...]:
        """Edge identifiers in order of first appearance."""
        seen = dict.fromkeys(e for f in self.faces for e in f)
        return tuple(seen)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_corners(self) -> int:
        return 3 * len(self.faces)

    @property
    def corners(self) -> list[tuple[str, int]]:
        return [(fid, k) for fid in self.face_ids for k in range(3)]

    def edge_index(self) -> dict[str, int]:
        return {e: i for i, e in enumerate(self.edges)}

    def face_index(self) -> dict[str, int]:
        return {f: i for i, f in enumerate(self.face_ids)}

    def corner_edges(self) -> np.ndarray:
        """Edge index faced by each corner, shape ``(n,)``."""
        idx = self.edge_index()
        return np.array([idx[e] for f in self.faces for e in f], dtype=int)

    def edge_corners(self) -> np.ndarray:
        """The two corners facing each edge, shape ``(|E|, 2)``.

        Only meaningful for a valid mesh (every edge used exactly twice).
        """
        pairs: list[list[int]] = [[] for _ in self.edges]
        for c, e in enumerate(self.corner_edges()):
            pairs[e].append(c)
        bad = [self.edges[i] for i, p in enumerate(pairs) if len(p) != 2]
        if bad:
            raise ValueError(f"edges not used exactly twice: {', '.join(bad)}")
        return np.array(pairs, dtype=int)

    def corner_label(self, c: int) -> str:
        return f"{self.face_ids[c // 3]}:{c % 3}"


@dataclass(frozen=True)
class EdgeFunction:
    """A real value per edge (an edge invariant or a metric)."""

    values: Mapping[str, float]

    def __post_init__(self):
        for e, v in self.values.items():
            if not math.isfinite(v):
                raise ValueError(f"non-finite value on edge {e}")

    def __getitem__(self, edge: str) -> float:
        return self.values[edge]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def items(self):
        return self.values.items()

    def as_array(self, mesh: Mesh) -> np.ndarray:
        missing = [e for e in mesh.edges if e not in self.values]
        if missing:
            raise ValueError(f"edge function undefined on {', '.join(missing)}")
        return np.array([self.values[e] for e in mesh.edges], dtype=float)

    @classmethod
    def from_array(cls, mesh: Mesh, values: Iterable[float]) -> "EdgeFunction":
        vals = [float(v) for v in values]
        if len(vals) != mesh.n_edges:
            raise ValueError("need one value per edge")
        return cls(dict(zip(mesh.edges, vals)))

    @classmethod
    def constant(cls, mesh: Mesh, value: float) -> "EdgeFunction":
        return cls({e: float(value) for e in mesh.edges})


@dataclass(frozen=True)
class ParsedMesh:
    mesh: Mesh
    invariant: EdgeFunction | None = None
    length: EdgeFunction | None = None


@dataclass
class ValidationReport:
    ok: bool
    violations: dict[str, int]

    def __bool__(self) -> bool:
        return self.ok


def _ident(tok: str, what: str, lineno: int) -> str:
    if not _IDENT.match(tok):
        raise MeshFormatError(f"bad {what} identifier {tok!r}", lineno)
    return tok


def _decimal(tok: str, lineno: int) -> float:
    try:
        v = float(tok)
    except ValueError:
        raise MeshFormatError(f"bad decimal {tok!r}", lineno) from None
    if not math.isfinite(v) or tok.strip().lower() in ("inf", "nan"):
        raise MeshFormatError(f"value {tok!r} outside representable range", lineno)
    return v


def parse_mesh(text: str | TextIO) -> ParsedMesh:
    """Parse mesh text into a :class:`ParsedMesh`.

    ``invariant`` and ``length`` lines must name edges used by some face,
    and ``vertex`` corner references must name existing faces.
    """
    if not isinstance(text, str):
        text = text.read()
    name = None
    face_ids: list[str] = []
    faces: list[tuple[str, str, str]] = []
    tables: dict[str, dict[str, tuple[float, int]]] = {"invariant": {}, "length": {}}
    vertex_lines: list[tuple[str, list[str], int]] = []
    seen_vertices: set[str] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kw, *args = line.split()
        if kw == "surface":
            if len(args) != 1:
                raise MeshFormatError("'surface' takes one name", lineno)
            if name is not None:
                raise MeshFormatError("duplicate 'surface' header", lineno)
            name = _ident(args[0], "surface", lineno)
        elif kw == "face":
            if len(args) != 4:
                raise MeshFormatError("'face' needs an id and three edge ids", lineno)
            fid = _ident(args[0], "face", lineno)
            if fid in face_ids:
                raise MeshFormatError(f"duplicate face identifier {fid!r}", lineno)
            face_ids.append(fid)
            faces.append(tuple(_ident(e, "edge", lineno) for e in args[1:]))
        elif kw in tables:
            if len(args) != 2:
                raise MeshFormatError(f"'{kw}' needs an edge id and a value", lineno)
            e = _ident(args[0], "edge", lineno)
            if e in tables[kw]:
                raise MeshFormatError(f"duplicate {kw} for edge {e!r}", lineno)
            tables[kw][e] = (_decimal(args[1], lineno), lineno)
        elif kw == "vertex":
            if len(args) < 2:
                raise MeshFormatError("'vertex' needs an id and corner references", lineno)
            vid = _ident(args[0], "vertex", lineno)
            if vid in seen_vertices:
                raise MeshFormatError(f"duplicate vertex identifier {vid!r}", lineno)
            seen_vertices.add(vid)
            vertex_lines.append((vid, args[1:], lineno))
        else:
            raise MeshFormatError(f"unknown keyword {kw!r}", lineno)

    if not faces:
        raise MeshFormatError("no faces")
    edge_set = {e for f in faces for e in f}
    fid_set = set(face_ids)
    vertices: dict[str, tuple[tuple[str, int], ...]] = {}
    for vid, refs, lineno in vertex_lines:
        corners = []
        for ref in refs:
            fid, sep, slot = ref.partition(":")
            if not sep or slot not in ("0", "1", "2"):
                raise MeshFormatError(f"bad corner reference {ref!r}", lineno)
            if fid not in fid_set:
                raise MeshFormatError(f"vertex {vid!r} references unknown face {fid!r}", lineno)
            corners.append((fid, int(slot)))
        vertices[vid] = tuple(corners)

    out = {}
    for kw, table in tables.items():
        for e, (_, lineno) in table.items():
            if e not in edge_set:
                raise MeshFormatError(f"{kw} for unreferenced edge {e!r}", lineno)
        out[kw] = EdgeFunction({e: v for e, (v, _) in table.items()}) if table else None

    mesh = Mesh(tuple(faces), tuple(face_ids), name=name, vertices=vertices)
    return ParsedMesh(mesh, out["invariant"], out["length"])


def read_mesh(path) -> ParsedMesh:
    with open(path, encoding="utf-8") as fh:
        return parse_mesh(fh.read())


def render_mesh(mesh: Mesh, invariant: EdgeFunction | None = None,
                length: EdgeFunction | None = None) -> str:
    """Canonical text form; ``parse_mesh(render_mesh(m)).mesh == m``."""
    lines = []
    if mesh.name is not None:
        lines.append(f"surface {mesh.name}")
    for fid, f in zip(mesh.face_ids, mesh.faces):
        lines.append(f"face {fid} {' '.join(f)}")
    for kw, table in (("invariant", invariant), ("length", length)):
        if table is None:
            continue
        for e in mesh.edges:
            if e in table.values:
                lines.append(f"{kw} {e} {table[e]!r}")
    for vid, corners in mesh.vertices.items():
        refs = " ".join(f"{f}:{k}" for f, k in corners)
        lines.append(f"vertex {vid} {refs}")
    return "\n".join(lines) + "\n"


def validate_mesh(mesh: Mesh) -> ValidationReport:
    counts = Counter(e for f in mesh.faces for e in f)
    bad = {e: c for e, c in counts.items() if c != 2}
    return ValidationReport(ok=not bad, violations=bad)


def _canonical_cycle(pairs: list[tuple[str, str]]) -> tuple[tuple[str, str], ...]:
    n = len(pairs)
    # reversed traversal: e1, f_n, e_n, f_{n-1}, ..., e_2, f_1
    rev = [(pairs[0][0], pairs[-1][1])]
    for i in range(n - 1, 0, -1):
        rev.append((pairs[i][0], pairs[i - 1][1]))
    candidates = []
    for seq in (pairs, rev):
        for r in range(n):
            candidates.append(tuple(seq[r:] + seq[:r]))
    return min(candidates)


def find_pi_cycles(mesh: Mesh, D: EdgeFunction, eps: float = 1e-9
                   ) -> list[tuple[tuple[str, str], ...]] | None:
    """Simple edge/face cycles along which ``D`` equals pi.

    Each cycle is returned as ``((e1, f1), (e2, f2), ..., (en, fn))`` where
    ``f_i`` contains ``e_i`` and ``e_{i+1}`` (and ``f_n`` closes back to
    ``e1``); edges and faces are pairwise distinct within a cycle.  The
    result is sorted and uses a canonical rotation/orientation, so it does
    not depend on face order in the input.

    This is a purely combinatorial over-approximation of the degenerate
    cycles that can obstruct existence.  Returns ``None`` ("not checked")
    for meshes with more than ``MAX_CYCLE_FACES`` faces.
    """
    if mesh.n_faces > MAX_CYCLE_FACES:
        return None
    pi_edges = sorted(e for e in mesh.edges if abs(D[e] - math.pi) <= eps)
    if not pi_edges:
        return []
    pi_set = set(pi_edges)
    # adjacency: edge -> list of (face, neighbour edge); self-glued slots give loops
    adj: dict[str, list[tuple[str, str]]] = {e: [] for e in pi_edges}
    for fid, f in zip(mesh.face_ids, mesh.faces):
        for a in range(3):
            for b in range(a + 1, 3):
                ea, eb = f[a], f[b]
                if ea in pi_set and eb in pi_set:
                    adj[ea].append((fid, eb))
                    if ea != eb:
                        adj[eb].append((fid, ea))
    for e in adj:
        adj[e] = sorted(set(adj[e]))

    max_len = mesh.n_edges
    found: set[tuple[tuple[str, str], ...]] = set()
    rank = {e: i for i, e in enumerate(pi_edges)}

    for start in pi_edges:
        # only cycles whose smallest edge is `start`
        stack = [(start, [start], [], {start}, set())]
        while stack:
            cur, edges, faces, used_e, used_f = stack.pop()
            for fid, nxt in adj[cur]:
                if fid in used_f:
                    continue
                if nxt == start:
                    pairs = list(zip(edges, faces + [fid]))
                    found.add(_canonical_cycle(pairs))
                    continue
                if nxt in used_e or rank[nxt] < rank[start] or len(edges) >= max_len:
                    continue
                stack.append((nxt, edges + [nxt], faces + [fid],
                              used_e | {nxt}, used_f | {fid}))
    return sorted(found)


def cone_angles(mesh: Mesh, x: np.ndarray) -> dict[str, float]:
    """Sum of corner angles around each declared vertex."""
    fidx = mesh.face_index()
    return {v: float(sum(x[3 * fidx[f] + k] for f, k in corners))
            for v, corners in mesh.vertices.items()}


CORPUS = ("double_triangle", "tetrahedron", "octahedron")


def load_corpus(name: str) -> ParsedMesh:
    """Load one of the bundled fixture meshes, e.g. ``"octahedron"``."""
    from importlib import resources

    text = resources.files("sphpoly").joinpath(f"data/{name}.mesh").read_text(encoding="utf-8")
    return parse_mesh(text)
