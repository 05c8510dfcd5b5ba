"""Unit-distance graphs: canonical vertex order, exact edges, bitset adjacency."""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .field import ONE, FieldElem
from .geometry import Point, dist2, format_point, parse_point


class Graph:
    """Plain graph on vertices 0..n-1 with adjacency stored as int bitsets."""

    def __init__(self, n: int, adj: Sequence[int]):
        self.n = n
        self.adj = tuple(adj)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        adj = [0] * n
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-loop at {i}")
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return cls(n, adj)

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for i in range(self.n):
            row = self.adj[i] >> (i + 1)
            j = i + 1
            while row:
                if row & 1:
                    out.append((i, j))
                row >>= 1
                j += 1
        return out

    def num_edges(self) -> int:
        return sum(a.bit_count() for a in self.adj) // 2

    def degree(self, i: int) -> int:
        return self.adj[i].bit_count()

    def neighbors(self, i: int) -> list[int]:
        return bits(self.adj[i])

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adj[i] >> j & 1)

    def induced_subgraph(self, keep: Iterable[int]) -> Graph:
        idx = sorted(set(keep))
        pos = {v: k for k, v in enumerate(idx)}
        edges = [(pos[i], pos[j]) for i, j in self.edges() if i in pos and j in pos]
        return Graph.from_edges(len(idx), edges)

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, m={self.num_edges()})"


def bits(mask: int) -> list[int]:
    """Indices of set bits in increasing order."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def is_independent(g: Graph, s: Iterable[int]) -> bool:
    m = mask_of(s)
    return all(not (g.adj[v] & m) for v in bits(m))


class UDGraph(Graph):
    """Unit-distance graph on a deduplicated, canonically ordered point set."""

    def __init__(self, vertices: Sequence[Point], adj: Sequence[int]):
        super().__init__(len(vertices), adj)
        self.vertices = tuple(vertices)
        self._index = None

    def index(self, p: Point) -> int:
        if self._index is None:
            self._index = {q: i for i, q in enumerate(self.vertices)}
        return self._index[p]

    def __contains__(self, p):
        try:
            self.index(p)
        except KeyError:
            return False
        return True

    def induced_subgraph(self, keep: Iterable[int]) -> UDGraph:
        idx = sorted(set(keep))
        pos = {v: k for k, v in enumerate(idx)}
        adj = []
        for v in idx:
            row = 0
            for u in bits(self.adj[v]):
                if u in pos:
                    row |= 1 << pos[u]
            adj.append(row)
        return UDGraph([self.vertices[v] for v in idx], adj)

    def point_set(self) -> frozenset[Point]:
        return frozenset(self.vertices)

    def float_coords(self) -> np.ndarray:
        return np.array([p.to_float() for p in self.vertices], dtype=float).reshape(-1, 2)

    def content_hash(self) -> str:
        h = hashlib.sha256()
        for p in self.vertices:
            h.update(format_point(p).encode())
            h.update(b"\n")
        return h.hexdigest()

    def __eq__(self, other):
        return (isinstance(other, UDGraph) and self.vertices == other.vertices
                and self.adj == other.adj)

    def __hash__(self):
        return hash(self.vertices)


# coordinates beyond this magnitude skip the float prefilter
_PREFILTER_MAX_COORD = 1e4


def unit_pairs(points: Sequence[Point]) -> list[tuple[int, int]]:
    """All index pairs at distance exactly one.

    A float prefilter discards pairs whose squared distance is far from 1
    (error is below 1e-10 for the admitted coordinate range, the window is
    1e-6); survivors are decided exactly.
    """
    n = len(points)
    if n < 2:
        return []
    xy = np.array([p.to_float() for p in points], dtype=float)
    out = []
    if np.all(np.abs(xy) < _PREFILTER_MAX_COORD):
        for i in range(n - 1):
            d = xy[i + 1:] - xy[i]
            d2 = d[:, 0] ** 2 + d[:, 1] ** 2
            for k in np.nonzero(np.abs(d2 - 1.0) < 1e-6)[0]:
                j = i + 1 + int(k)
                if dist2(points[i], points[j]) == ONE:
                    out.append((i, j))
    else:
        for i in range(n - 1):
            for j in range(i + 1, n):
                if dist2(points[i], points[j]) == ONE:
                    out.append((i, j))
    return out


def build(points: Iterable[Point]) -> UDGraph:
    """Deduplicate, sort canonically and compute the exact unit-distance edges."""
    pts = sorted(set(points), key=Point.sort_key)
    adj = [0] * len(pts)
    for i, j in unit_pairs(pts):
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    return UDGraph(pts, adj)


def induced_subgraph(g: Graph, keep: Iterable[int]) -> Graph:
    return g.induced_subgraph(keep)


# ---------------------------------------------------------------- file formats

def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def point_to_json(p: Point) -> list[list[str]]:
    return [[_fmt_q(v) for v in p.x.coeffs()], [_fmt_q(v) for v in p.y.coeffs()]]


def point_from_json(obj) -> Point:
    x, y = obj
    return Point(FieldElem(*(Fraction(str(v)) for v in x)),
                 FieldElem(*(Fraction(str(v)) for v in y)))


def to_json(g: UDGraph) -> dict:
    return {
        "format": "unit-distance-graph",
        "version": 1,
        "hash": g.content_hash(),
        "vertices": [point_to_json(p) for p in g.vertices],
        "edges": [list(e) for e in g.edges()],
    }


def from_json(obj: dict) -> UDGraph:
    pts = [point_from_json(v) for v in obj["vertices"]]
    g = build(pts)
    if g.n != len(pts):
        raise ValueError("graph file contains duplicate vertices")
    if list(g.vertices) != pts:
        raise ValueError("graph file vertices are not in canonical order")
    if "edges" in obj:
        listed = sorted(tuple(sorted(e)) for e in obj["edges"])
        if listed != g.edges():
            raise ValueError("graph file edge list disagrees with exact recomputation")
    return g


def save_json(g: UDGraph, path, extra: dict | None = None) -> None:
    obj = to_json(g)
    if extra:
        obj.update(extra)
    Path(path).write_text(json.dumps(obj, indent=1))


def load_json(path) -> UDGraph:
    return from_json(json.loads(Path(path).read_text()))


def to_dimacs(g: Graph) -> str:
    lines = [f"c unit-distance graph, {g.n} vertices"]
    if isinstance(g, UDGraph):
        for i, p in enumerate(g.vertices):
            lines.append(f"c v {i + 1} {format_point(p)}")
    edges = g.edges()
    lines.append(f"p edge {g.n} {len(edges)}")
    lines += [f"e {i + 1} {j + 1}" for i, j in edges]
    return "\n".join(lines) + "\n"


def from_dimacs(text: str) -> Graph:
    """Parse DIMACS edge format; coordinates in 'c v' comments give a UDGraph."""
    n = None
    edges = []
    coords = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "c":
            if len(parts) > 2 and parts[1] == "v":
                coords[int(parts[2]) - 1] = parse_point(line.split(None, 3)[3])
            continue
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise ValueError(f"line {lineno}: bad problem line")
            n = int(parts[2])
        elif parts[0] == "e":
            if n is None:
                raise ValueError(f"line {lineno}: edge before problem line")
            i, j = int(parts[1]) - 1, int(parts[2]) - 1
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"line {lineno}: vertex out of range")
            edges.append((i, j))
        else:
            raise ValueError(f"line {lineno}: unknown record {parts[0]!r}")
    if n is None:
        raise ValueError("missing problem line")
    if coords and len(coords) == n:
        g = build(coords[i] for i in range(n))
        pos = [g.index(coords[i]) for i in range(n)]
        listed = sorted(tuple(sorted((pos[i], pos[j]))) for i, j in edges)
        if sorted(set(listed)) != g.edges():
            raise ValueError("DIMACS edges disagree with exact recomputation")
        return g
    return Graph.from_edges(n, edges)
