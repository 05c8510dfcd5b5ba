import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

import _graphs as G
from unitdist.graph import is_independent
from unitdist.lp import P1Model, WeightDist, check_p1, solve_p1, solve_p1_vertexwise
from unitdist.symmetry import automorphism_orbits, from_labels, singleton_orbits


def maximal_independent_sets(g):
    out = []
    for k in range(g.n, -1, -1):
        for s in itertools.combinations(range(g.n), k):
            if is_independent(g, s) and not any(set(s) < set(t) for t in out):
                out.append(s)
    return out


def float_p1(sets, orbits):
    """Reference: min M s.t. counts @ w <= M, sizes . w = 1, w >= 0 (HiGHS, floats)."""
    p = orbits.num_orbits
    counts = np.zeros((len(sets), p))
    for i, s in enumerate(sets):
        for v in s:
            counts[i, orbits.orbit_of[v]] += 1
    a_ub = np.hstack([counts, -np.ones((len(sets), 1))])
    a_eq = np.hstack([np.array(orbits.sizes, float)[None, :], [[0.0]]])
    res = linprog(np.r_[np.zeros(p), 1.0], A_ub=a_ub, b_ub=np.zeros(len(sets)),
                  A_eq=a_eq, b_eq=[1.0], bounds=[(0, None)] * (p + 1), method="highs")
    assert res.status == 0
    return res.fun


def test_p3_weights():
    orbits = from_labels([0, 1, 0])
    sol = solve_p1([(0, 2), (1,)], orbits)
    assert sol.M == Fraction(1, 2)
    assert sol.weights.vertex_weights() == [Fraction(1, 4), Fraction(1, 2), Fraction(1, 4)]


def test_single_orbit():
    orbits = from_labels([0] * 6)
    sol = solve_p1([(0, 2, 4)], orbits)
    assert sol.weights.orbit_weights == (Fraction(1, 6),)
    assert sol.M == Fraction(1, 2)


def test_moser_spindle_full_family():
    s = G.moser_spindle()
    sets = maximal_independent_sets(s)
    assert solve_p1_vertexwise(sets, 7).M == Fraction(2, 7)
    assert solve_p1(sets, automorphism_orbits(s)).M == Fraction(2, 7)


def test_pentagon_full_family():
    c5 = G.pentagon()
    assert solve_p1_vertexwise(maximal_independent_sets(c5), 5).M == Fraction(2, 5)


def test_empty_family():
    sol = solve_p1([], from_labels([0, 1, 1]))
    assert sol.M == 0
    assert sol.weights == WeightDist.uniform(from_labels([0, 1, 1]))
    assert sol.weights.total() == 1


def test_random_families_match_float_oracle():
    rng = random.Random(7)
    for _ in range(40):
        g = G.random_graph(rng, 14, min_n=2)
        mis = maximal_independent_sets(g)
        sets = rng.sample(mis, rng.randint(1, len(mis)))
        orbits = singleton_orbits(g.n) if rng.random() < 0.5 else automorphism_orbits(g)
        sol = solve_p1(sets, orbits)
        counts = []
        for s in sets:
            c = [sum(1 for v in s if orbits.orbit_of[v] == j) for j in range(orbits.num_orbits)]
            if c not in counts:
                counts.append(c)
        check_p1(sol, counts, orbits)
        assert abs(float(sol.M) - float_p1(sets, orbits)) < 1e-9


def test_adding_sets_never_lowers_m():
    rng = random.Random(8)
    g = G.random_graph(rng, 14, min_n=10)
    mis = maximal_independent_sets(g)
    rng.shuffle(mis)
    model = P1Model(singleton_orbits(g.n))
    last = Fraction(-1)
    for s in mis:
        model.add_set(s)
        m = model.solve().M
        assert m >= last
        last = m


def test_normalisation_and_feasibility():
    s = G.moser_spindle()
    sets = maximal_independent_sets(s)[:5]
    sol = solve_p1_vertexwise(sets, 7)
    w = sol.weights
    assert w.total() == 1 and all(x >= 0 for x in w.orbit_weights)
    assert max(w.set_weight(t) for t in sets) == sol.M


def test_weightdist_validation():
    with pytest.raises(ValueError):
        WeightDist((Fraction(1), Fraction(-1)), from_labels([0, 1]))
