from fractions import Fraction

import pytest

import _graphs as G
from unitdist import ops
from unitdist.field import ONE, SQRT11, FieldElem
from unitdist.geometry import ORIGIN, dist2, norm2, point
from unitdist.graph import build


def test_minkowski_identity():
    g = G.moser_spindle()
    assert ops.minkowski_sum(g, build([point(3, 1)])) == g


def test_minkowski_rhombus_has_five_edges():
    r = G.rhombus()
    assert (r.n, r.num_edges()) == (4, 5)


def test_minkowski_size_bound():
    g, h = G.triangle(), G.p3()
    s = ops.minkowski_sum(g, h)
    assert s.n <= g.n * h.n
    assert ops.minkowski_sum(build([ORIGIN, point(1, 0)]), build([ORIGIN, point(1, 0)])).n == 3


def test_iterated_self_sum():
    seg = build([ORIGIN, point(1, 0)])
    assert ops.iterated_self_sum(seg, 0) == seg
    assert ops.iterated_self_sum(seg, 3).n == 5


def test_spindle_rhombus_gives_moser_spindle():
    g = G.rhombus()
    u, v = G.rhombus_far_pair(g)
    assert dist2(g.vertices[u], g.vertices[v]) == FieldElem(3)
    rot = ops.spindle_rotation(FieldElem(3))
    assert rot.cos == FieldElem(Fraction(5, 6)) and rot.sin == SQRT11 / 6
    s = ops.spindle(g, u, v)
    assert (s.n, s.num_edges()) == (7, 11)
    # the original graph survives as an induced subgraph
    keep = [s.index(p) for p in g.vertices]
    assert s.induced_subgraph(keep) == g


def test_spindle_quarter_turn():
    rot = ops.spindle_rotation(FieldElem(Fraction(1, 2)))
    assert rot.cos == FieldElem(0) and rot.sin == ONE


def test_spindle_field_closure_error():
    with pytest.raises(ops.FieldClosureError):
        ops.spindle_rotation(FieldElem(2))
    g = build([ORIGIN, point(1, 1)])
    with pytest.raises(ops.FieldClosureError):
        ops.spindle(g, 0, 1)


def test_spindle_degenerate_pairs():
    with pytest.raises(ops.DegeneratePairError):
        ops.spindle_rotation(FieldElem(Fraction(1, 5)))
    with pytest.raises(ops.DegeneratePairError):
        ops.spindle(G.p3(), 1, 1)
    # d = 1/2 is the boundary: a half-turn
    rot = ops.spindle_rotation(FieldElem(Fraction(1, 4)))
    assert rot.cos == FieldElem(-1)


def test_trim():
    p3 = G.p3()
    assert ops.trim(p3, 0).n == 1
    assert ops.trim(p3, 10**6) == p3
    kept = ops.trim(p3, 1)
    assert list(kept.vertices) == [point(0, 0), point(1, 0)]
    g = G.ring_sum()
    for p in ops.trim(g, 3).vertices:
        assert norm2(p) <= FieldElem(3)


def test_circle():
    assert ops.circle(build([ORIGIN])).n == 1
    h = G.hexagon()
    assert (h.n, h.num_edges()) == (6, 6)
    g = G.moser_spindle()
    once = ops.circle(g)
    assert ops.circle(once) == once
    assert all(p in once for p in g.vertices)


def test_outputs_have_exact_edges():
    from test_graph import brute_edges

    g = ops.spindle(G.rhombus(), *G.rhombus_far_pair(G.rhombus()))
    for h in (g, ops.circle(g), ops.trim(ops.circle(g), 2), ops.minkowski_sum(g, G.triangle())):
        assert h.edges() == brute_edges(h.vertices)
