"""Vertex orbits under graph symmetries.

``geometric_orbits`` uses the plane isometries generated by rotation by pi/3
about the origin and reflection in the x-axis, keeping those that map the
point set onto itself.  ``automorphism_orbits`` searches the full abstract
automorphism group by colour refinement and individualisation.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Sequence

from .geometry import ORIGIN, conj, rot_k_pi_3, rotate
from .graph import Graph, UDGraph, bits

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class OrbitPartition:
    orbit_of: tuple[int, ...]
    sizes: tuple[int, ...]
    # permutations witnessing the orbit relations (vertex -> image)
    generators: tuple[tuple[int, ...], ...] = field(default=(), compare=False)
    method: str = field(default="", compare=False)

    @property
    def num_orbits(self) -> int:
        return len(self.sizes)

    def members(self) -> list[list[int]]:
        out = [[] for _ in self.sizes]
        for v, o in enumerate(self.orbit_of):
            out[o].append(v)
        return out

    def refines(self, other: OrbitPartition) -> bool:
        """True if every orbit of self lies inside one orbit of other."""
        img = {}
        for a, b in zip(self.orbit_of, other.orbit_of):
            if img.setdefault(a, b) != b:
                return False
        return True

    def to_json(self) -> dict:
        return {"orbit_of": list(self.orbit_of), "sizes": list(self.sizes),
                "method": self.method}

    @classmethod
    def from_json(cls, obj) -> OrbitPartition:
        return from_labels(obj["orbit_of"], method=obj.get("method", ""))


def from_labels(labels: Sequence, generators=(), method="") -> OrbitPartition:
    """Renumber arbitrary labels so orbits are indexed by first appearance."""
    remap: dict = {}
    orbit_of = []
    for lab in labels:
        orbit_of.append(remap.setdefault(lab, len(remap)))
    sizes = [0] * len(remap)
    for o in orbit_of:
        sizes[o] += 1
    return OrbitPartition(tuple(orbit_of), tuple(sizes), tuple(generators), method)


def singleton_orbits(n: int) -> OrbitPartition:
    return OrbitPartition(tuple(range(n)), (1,) * n, (), "none")


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                ra, rb = rb, ra
            self.parent[ra] = rb
            return True
        return False


def orbits_from_permutations(n: int, perms, method="") -> OrbitPartition:
    uf = _UnionFind(n)
    for perm in perms:
        for v, fv in enumerate(perm):
            uf.union(v, fv)
    return from_labels([uf.find(v) for v in range(n)], perms, method)


def is_automorphism(g: Graph, perm: Sequence[int]) -> bool:
    if sorted(perm) != list(range(g.n)):
        return False
    for v in range(g.n):
        img = 0
        for u in bits(g.adj[v]):
            img |= 1 << perm[u]
        if img != g.adj[perm[v]]:
            return False
    return True


def geometric_automorphisms(g: UDGraph) -> list[tuple[int, ...]]:
    """Elements of the order-12 dihedral group about the origin that preserve V(g)."""
    found = []
    for k in range(6):
        rot = rot_k_pi_3(k)
        for reflect in (False, True):
            perm = []
            for p in g.vertices:
                q = rotate(conj(p) if reflect else p, ORIGIN, rot)
                if q not in g:
                    break
                perm.append(g.index(q))
            else:
                found.append(tuple(perm))
    return found


def geometric_orbits(g: UDGraph) -> OrbitPartition:
    return orbits_from_permutations(g.n, geometric_automorphisms(g), "geometric")


# ---------------------------------------------------------------- full group

class BudgetExceeded(RuntimeError):
    pass


def _refine_pair(adj, c1: list[int], c2: list[int]):
    """Jointly refine two colourings to equitable ones with shared labels.

    Returns None if the two colourings become inconsistent.
    """
    n = len(c1)
    ncol = len(set(c1))
    while True:
        s1 = [(c1[v], tuple(sorted(c1[u] for u in bits(adj[v])))) for v in range(n)]
        s2 = [(c2[v], tuple(sorted(c2[u] for u in bits(adj[v])))) for v in range(n)]
        if sorted(s1) != sorted(s2):
            return None
        rank = {s: i for i, s in enumerate(sorted(set(s1)))}
        c1 = [rank[s] for s in s1]
        c2 = [rank[s] for s in s2]
        if len(rank) == ncol:
            return c1, c2
        ncol = len(rank)


def _extend(adj, c1, c2, deadline):
    """Find an automorphism consistent with the colour correspondence c1 -> c2."""
    if time.monotonic() > deadline:
        raise BudgetExceeded
    res = _refine_pair(adj, c1, c2)
    if res is None:
        return None
    c1, c2 = res
    n = len(c1)
    cells1: dict[int, list[int]] = {}
    cells2: dict[int, list[int]] = {}
    for v in range(n):
        cells1.setdefault(c1[v], []).append(v)
        cells2.setdefault(c2[v], []).append(v)
    target = None
    for col in sorted(cells1):
        if len(cells1[col]) > 1:
            target = col
            break
    if target is None:
        perm = [0] * n
        for col, (v,) in cells1.items():
            perm[v] = cells2[col][0]
        return perm
    fresh = max(c1) + 1
    v = cells1[target][0]
    for w in cells2[target]:
        d1 = list(c1)
        d2 = list(c2)
        d1[v] = fresh
        d2[w] = fresh
        perm = _extend(adj, d1, d2, deadline)
        if perm is not None:
            return perm
    return None


def automorphism_orbits(g: Graph, time_budget: float = 60.0) -> OrbitPartition:
    """Orbits of the full automorphism group.

    Falls back to geometric orbits (or singletons for abstract graphs) with a
    warning when the search exceeds ``time_budget`` seconds.
    """
    deadline = time.monotonic() + time_budget
    n = g.n
    seeds = geometric_automorphisms(g) if isinstance(g, UDGraph) else []
    perms = [p for p in seeds if any(i != x for i, x in enumerate(p))]
    uf = _UnionFind(n)
    for perm in perms:
        for a, b in enumerate(perm):
            uf.union(a, b)
    try:
        base = _refine_pair(g.adj, [0] * n, [0] * n)
        colors = base[0] if base else [0] * n
        for v in range(n):
            if uf.find(v) != v:
                continue
            # try to map v onto each later, not-yet-merged vertex of its colour
            for w in range(v + 1, n):
                if colors[w] != colors[v] or uf.find(w) == uf.find(v):
                    continue
                c1 = list(colors)
                c2 = list(colors)
                fresh = max(colors) + 1
                c1[v] = fresh
                c2[w] = fresh
                perm = _extend(g.adj, c1, c2, deadline)
                if perm is not None:
                    assert is_automorphism(g, perm)
                    perms.append(tuple(perm))
                    for a, b in enumerate(perm):
                        uf.union(a, b)
    except BudgetExceeded:
        log.warning("automorphism search exceeded %.1fs; falling back", time_budget)
        if isinstance(g, UDGraph):
            return geometric_orbits(g)
        return singleton_orbits(n)
    return from_labels([uf.find(v) for v in range(n)], perms, "full")


def orbits_for(g: Graph, mode: str = "geometric", time_budget: float = 60.0) -> OrbitPartition:
    if mode == "geometric":
        return geometric_orbits(g) if isinstance(g, UDGraph) else singleton_orbits(g.n)
    if mode == "full":
        return automorphism_orbits(g, time_budget)
    if mode == "none":
        return singleton_orbits(g.n)
    raise ValueError(f"unknown orbit mode {mode!r}")
