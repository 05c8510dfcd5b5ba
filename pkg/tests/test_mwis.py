import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import _graphs as G
from unitdist import mwis
from unitdist.graph import is_independent, mask_of
from unitdist.structures import alpha_brute
from unitdist.symmetry import geometric_automorphisms


def brute_forced(g, w, fin=(), fout=()):
    """alpha_brute with forcing, by zeroing out/adding back."""
    keep = [v for v in range(g.n) if v not in fout and v not in fin
            and not any(g.has_edge(v, u) for u in fin)]
    sub = g.induced_subgraph(keep)
    val, _ = alpha_brute(sub, [w[v] for v in keep]) if keep else (Fraction(0), ())
    return val + sum((w[v] for v in fin), Fraction(0))


def test_examples():
    r = mwis.solve(G.p3(), [Fraction(1, 4), Fraction(1, 2), Fraction(1, 4)])
    assert r.weight == Fraction(1, 2)
    assert mwis.solve(G.moser_spindle(), [1] * 7).weight == 2
    g = G.moser_spindle()
    r = mwis.solve(g, [1] * 7, forced_out=range(7))
    assert r.weight == 0 and r.set == ()


def test_exclude_include_examples():
    r = mwis.solve_excluding_including(G.p3(), [1, 1, 1], exclude=1, include=0)
    assert r.set == (0, 2) and r.weight == 2
    r = mwis.solve_excluding_including(G.p3(), [1, 1, 1], exclude=0, include=1)
    assert r.set == (1,)
    s = G.moser_spindle()
    hub = max(range(7), key=lambda v: (s.degree(v), -v))
    anti = next(v for v in range(7) if v != hub and not s.has_edge(v, hub))
    r = mwis.solve_excluding_including(s, [1] * 7, exclude=hub, include=anti)
    assert r.weight == 2 == brute_forced(s, [1] * 7, (anti,), (hub,))
    with pytest.raises(mwis.InfeasibleForcing):
        mwis.solve_excluding_including(s, [1] * 7, exclude=3, include=3)


def test_infeasible_forcing():
    g = G.p3()
    with pytest.raises(mwis.InfeasibleForcing):
        mwis.solve(g, [1, 1, 1], forced_in=[0, 1])
    with pytest.raises(mwis.InfeasibleForcing):
        mwis.solve(g, [1, 1, 1], forced_in=[0], forced_out=[0])
    with pytest.raises(ValueError):
        mwis.solve(g, [1, -1, 1])


@pytest.mark.parametrize("bound", ["greedy", "lp"])
def test_random_graphs_match_brute_force(bound):
    rng = random.Random(2024)
    for _ in range(200):
        g = G.random_graph(rng, 25)
        w = G.random_weights(rng, g.n)
        r = mwis.solve(g, w, bound=bound)
        assert r.weight == alpha_brute(g, w)[0]
        assert is_independent(g, r.set)
        assert r.weight == sum((w[v] for v in r.set), Fraction(0))


def test_forcing_matches_brute_force():
    rng = random.Random(77)
    for _ in range(60):
        g = G.random_graph(rng, 18, min_n=3)
        w = G.random_weights(rng, g.n)
        v = rng.randrange(g.n)
        fout = set(rng.sample(range(g.n), rng.randint(0, 3)))
        fin = () if v in fout else (v,)
        r = mwis.solve(g, w, forced_in=fin, forced_out=fout)
        assert r.weight == brute_forced(g, w, fin, fout)
        assert set(fin) <= set(r.set) and not fout & set(r.set)


def test_orbital_branching_agrees():
    rng = random.Random(31)
    for _ in range(20):
        g = G.random_symmetric_graph(rng, 25)
        group = geometric_automorphisms(g)
        w = [Fraction(1)] * g.n
        plain = mwis.solve(g, w)
        sym = mwis.solve(g, w, group=group)
        assert plain.weight == sym.weight == alpha_brute(g, w)[0]


def test_group_must_preserve_weights():
    g = G.hexagon()
    group = geometric_automorphisms(g)
    with pytest.raises(ValueError):
        mwis.solve(g, [1, 2, 1, 1, 1, 1], group=group)


def test_monotone_in_forced_out():
    rng = random.Random(5)
    g = G.random_graph(rng, 20, min_n=15)
    w = G.random_weights(rng, g.n)
    out, last = [], mwis.solve(g, w).weight
    for v in rng.sample(range(g.n), 8):
        out.append(v)
        cur = mwis.solve(g, w, forced_out=out).weight
        assert cur <= last
        last = cur


def test_deterministic():
    rng = random.Random(6)
    g = G.random_graph(rng, 25, min_n=25)
    w = [Fraction(1)] * g.n
    assert mwis.solve(g, w).set == mwis.solve(g, w).set


def test_larger_graph_lp_bound():
    g = G.ring_sum()
    w = [Fraction(1)] * g.n
    r = mwis.solve(g, w, bound="lp", group=geometric_automorphisms(g))
    assert r.weight == mwis.solve(g, w, bound="lp").weight
    assert is_independent(g, r.set)


def test_incumbent_and_limits():
    g = G.ring_sum()
    w = [Fraction(1)] * g.n
    best = mwis.solve(g, w)
    again = mwis.solve(g, w, incumbent=best.set)
    assert again.weight == best.weight
    rng = random.Random(1)
    wr = G.random_weights(rng, g.n, zero_ok=False)
    with pytest.raises(mwis.SearchLimitExceeded) as info:
        mwis.solve(g, wr, node_limit=0, bound="greedy")
    assert info.value.weight is not None and is_independent(g, list(_bits(info.value.incumbent)))


@pytest.mark.parametrize("bound", ["greedy", "lp"])
@pytest.mark.parametrize("limit", [0, 3, 20])
def test_cut_short_search_keeps_a_proven_bound(bound, limit):
    rng = random.Random(limit)
    for _ in range(15):
        g = G.random_graph(rng, 24, min_n=12)
        w = G.random_weights(rng, g.n, zero_ok=False)
        opt = alpha_brute(g, w)[0]
        try:
            mwis.solve(g, w, node_limit=limit, bound=bound)
        except mwis.SearchLimitExceeded as exc:
            assert exc.weight <= opt <= exc.upper_bound
    # deep enough that several subtrees are still open when it stops
    g = G.ring_sum()
    w = G.random_weights(random.Random(3), g.n, zero_ok=False)
    opt = mwis.solve(g, w, bound="lp").weight
    with pytest.raises(mwis.SearchLimitExceeded) as info:
        mwis.solve(g, w, node_limit=limit + 5, bound=bound)
    assert info.value.weight <= opt <= info.value.upper_bound


def _bits(mask):
    from unitdist.graph import bits

    return bits(mask)


def test_weight_grain():
    assert mwis.weight_grain([Fraction(1, 2), Fraction(1, 3)]) == Fraction(1, 6)
    assert mwis.weight_grain([Fraction(4), Fraction(6), Fraction(0)]) == 2
    assert mwis.weight_grain([0, 0]) == 0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_heuristics_return_independent_sets(seed):
    rng = random.Random(seed)
    g = G.random_graph(rng, 40, min_n=5)
    w = G.random_weights(rng, g.n)
    for m in (mwis.greedy_independent(g, w),
              mwis.iterated_local_search(g, w, rounds=5, seed=seed)):
        s = _bits(m)
        assert is_independent(g, s)
        assert sum((w[v] for v in s), Fraction(0)) <= mwis.solve(g, w).weight


def test_cut_families():
    cuts = mwis.CutFamilies(G.moser_spindle())
    assert len(cuts.spindles) == 1
    assert all(len(c) >= 2 for c in cuts.cliques)
    assert mask_of(range(7)) in cuts.row_masks
