import itertools
import random
from fractions import Fraction

import _graphs as G
from unitdist.graph import is_independent
from unitdist.structures import alpha_brute, maximal_cliques, moser_spindles, triangles


def exhaustive_maximal_cliques(g):
    cliques = [c for k in range(1, g.n + 1) for c in itertools.combinations(range(g.n), k)
               if all(g.has_edge(a, b) for a, b in itertools.combinations(c, 2))]
    sets = [frozenset(c) for c in cliques]
    return sorted(tuple(sorted(c)) for c in sets if not any(c < d for d in sets))


def exhaustive_alpha(g, w):
    best = Fraction(0)
    for k in range(g.n + 1):
        for s in itertools.combinations(range(g.n), k):
            if is_independent(g, s):
                best = max(best, sum((w[v] for v in s), Fraction(0)))
    return best


def test_clique_examples():
    from unitdist.graph import build

    assert maximal_cliques(build([])) == []
    assert maximal_cliques(G.triangle()) == [(0, 1, 2)]
    s = G.moser_spindle()
    assert maximal_cliques(s) == exhaustive_maximal_cliques(s)
    assert sum(len(c) == 3 for c in maximal_cliques(s)) == 4
    assert len(triangles(s)) == 4


def test_cliques_agree_with_exhaustive_search():
    rng = random.Random(11)
    for _ in range(30):
        g = G.random_graph(rng, 16)
        assert sorted(maximal_cliques(g)) == exhaustive_maximal_cliques(g)


def test_spindle_examples():
    s = G.moser_spindle()
    assert moser_spindles(s) == [tuple(range(7))]
    assert moser_spindles(G.hexagon()) == []
    assert moser_spindles(G.rhombus()) == []


def test_spindles_are_induced_moser_spindles():
    g = G.ring_sum()
    found = moser_spindles(g)
    assert found and found == moser_spindles(g)
    assert len(set(found)) == len(found)
    for s in found[:200]:
        sub = g.induced_subgraph(s)
        assert (sub.n, sub.num_edges()) == (7, 11)
        assert alpha_brute(sub, [1] * 7)[0] == 2


def test_alpha_brute_examples():
    assert alpha_brute(G.p3(), [1, 1, 1])[0] == 2
    assert alpha_brute(G.moser_spindle(), [1] * 7)[0] == 2
    c5 = G.pentagon()
    assert alpha_brute(c5, [1] * 5)[0] == 2
    assert exhaustive_alpha(c5, [1] * 5) == 2


def test_alpha_brute_matches_exhaustive():
    rng = random.Random(2)
    for _ in range(25):
        g = G.random_graph(rng, 12)
        w = G.random_weights(rng, g.n)
        val, s = alpha_brute(g, w)
        assert val == exhaustive_alpha(g, w)
        assert is_independent(g, s) and sum((w[v] for v in s), Fraction(0)) == val
