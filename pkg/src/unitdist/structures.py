"""Maximal cliques, induced Moser spindles, and a brute-force MWIS oracle."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .graph import Graph, bits

BRUTE_LIMIT = 30


def maximal_cliques(g: Graph) -> list[tuple[int, ...]]:
    """All maximal cliques (Bron-Kerbosch with Tomita pivoting), sorted."""
    adj = g.adj
    out = []

    def expand(r, p, x):
        if not p and not x:
            out.append(tuple(sorted(r)))
            return
        # pivot maximising |P & N(u)|
        px = p | x
        best, best_cnt = -1, -1
        for u in bits(px):
            cnt = (p & adj[u]).bit_count()
            if cnt > best_cnt:
                best, best_cnt = u, cnt
        for v in bits(p & ~adj[best]):
            expand(r + [v], p & adj[v], x & adj[v])
            p &= ~(1 << v)
            x |= 1 << v

    if g.n:
        expand([], (1 << g.n) - 1, 0)
    out.sort()
    return out


def triangles(g: Graph) -> list[tuple[int, int, int]]:
    out = []
    adj = g.adj
    for i in range(g.n):
        higher = adj[i] >> (i + 1) << (i + 1)
        for j in bits(higher):
            for k in bits(higher & adj[j] >> (j + 1) << (j + 1)):
                out.append((i, j, k))
    return out


def moser_spindles(g: Graph) -> list[tuple[int, ...]]:
    """All vertex sets inducing a Moser spindle (7 vertices, 11 edges).

    Each spindle is two unit rhombi hinged at a common vertex u whose far
    tips are adjacent.  A rhombus at u is a triangle (u, a, b) glued along
    ab to a second triangle (a, b, t); t is its tip.
    """
    adj = g.adj
    found = set()
    for u in range(g.n):
        rhombi = []  # (a, b, tip)
        nu = adj[u]
        for a in bits(nu):
            for b in bits(nu & adj[a] & ~((1 << (a + 1)) - 1)):
                for t in bits(adj[a] & adj[b] & ~(1 << u)):
                    if not adj[u] >> t & 1:
                        rhombi.append((a, b, t))
        for i in range(len(rhombi)):
            a1, b1, t1 = rhombi[i]
            for j in range(i + 1, len(rhombi)):
                a2, b2, t2 = rhombi[j]
                if not adj[t1] >> t2 & 1:
                    continue
                vs = {u, a1, b1, t1, a2, b2, t2}
                if len(vs) != 7:
                    continue
                m = 0
                for v in vs:
                    m |= 1 << v
                if sum((adj[v] & m).bit_count() for v in vs) == 22:
                    found.add(tuple(sorted(vs)))
    return sorted(found)


def alpha_brute(g: Graph, w: Sequence, limit: int = BRUTE_LIMIT):
    """Exact maximum independent-set weight by exhaustive search.

    Returns (weight, vertex tuple).  Only for small graphs; this is the
    reference the real solver is checked against.
    """
    if g.n > limit:
        raise ValueError(f"alpha_brute is limited to {limit} vertices (got {g.n})")
    adj = g.adj
    memo: dict[int, tuple] = {}

    def best(cand: int):
        if not cand:
            return (Fraction(0), 0)
        hit = memo.get(cand)
        if hit is not None:
            return hit
        v = (cand & -cand).bit_length() - 1
        rest = cand & ~(1 << v)
        w_out, s_out = best(rest)
        w_in, s_in = best(rest & ~adj[v])
        w_in = w_in + w[v]
        res = (w_in, s_in | 1 << v) if w_in > w_out else (w_out, s_out)
        memo[cand] = res
        return res

    weight, mask = best((1 << g.n) - 1 if g.n else 0)
    return weight, tuple(bits(mask))
