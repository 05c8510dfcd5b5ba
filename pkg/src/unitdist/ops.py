"""Graph operations: Minkowski sum, spindling, trimming, circling.

Every operation produces a new point set and rebuilds the graph, so edges
are always the exact unit-distance pairs of the result.
"""

from __future__ import annotations

from fractions import Fraction

from .field import ONE, FieldElem, NotASquare, sign, sqrt
from .geometry import ORIGIN, Point, RotationSpec, dist2, norm2, rot_k_pi_3, rotate
from .graph import UDGraph, build


class FieldClosureError(ArithmeticError):
    """The requested rotation would leave Q(sqrt3, sqrt11)."""


class DegeneratePairError(ValueError):
    """The two vertices are closer than 1/2, so no unit chord exists."""


def _vertex(g: UDGraph, v) -> Point:
    if isinstance(v, int):
        return g.vertices[v]
    if v not in g:
        raise KeyError(f"{v} is not a vertex of the graph")
    return v


def minkowski_sum(g: UDGraph, h: UDGraph, center=None) -> UDGraph:
    """Union of copies of V(g) translated by v - center for every v in V(h).

    ``center`` is a vertex index or point of h; it defaults to the origin if
    h contains it, else to h's first vertex.
    """
    if center is None:
        c = ORIGIN if ORIGIN in h else h.vertices[0]
    else:
        c = _vertex(h, center)
    shifts = [v - c for v in h.vertices]
    return build(p + s for s in shifts for p in g.vertices)


def iterated_self_sum(g: UDGraph, times: int, center=None) -> UDGraph:
    out = g
    for _ in range(times):
        out = minkowski_sum(out, g, center)
    return out


def spindle_rotation(d2: FieldElem) -> RotationSpec:
    """Rotation about u that moves a point at squared distance d2 by exactly 1."""
    if sign(d2 - Fraction(1, 4)) < 0:
        raise DegeneratePairError(f"squared distance {d2} < 1/4: no unit chord")
    # chord identity |v' - v|^2 = 2 d^2 (1 - cos)
    cos = ONE - ONE / (d2 * 2)
    try:
        sin = sqrt(ONE - cos * cos)
    except NotASquare:
        raise FieldClosureError(
            f"sin^2 = {ONE - cos * cos} has no root in Q(sqrt3, sqrt11)") from None
    return RotationSpec(cos, sin)


def spindle(g: UDGraph, u, v) -> UDGraph:
    """Add the image of V(g) under the rotation about u that puts v at distance 1
    from its image (positive-sine direction)."""
    pu, pv = _vertex(g, u), _vertex(g, v)
    if pu == pv:
        raise DegeneratePairError("spindling needs two distinct vertices")
    rot = spindle_rotation(dist2(pu, pv))
    image = [rotate(p, pu, rot) for p in g.vertices]
    pv_img = rotate(pv, pu, rot)
    assert dist2(pv, pv_img) == ONE
    return build(list(g.vertices) + image)


def trim(g: UDGraph, r2) -> UDGraph:
    """Drop vertices whose squared norm exceeds r2; the boundary is kept."""
    r2 = r2 if isinstance(r2, FieldElem) else FieldElem(r2)
    if sign(r2) < 0:
        raise ValueError("trim radius must be nonnegative")
    keep = [i for i, p in enumerate(g.vertices) if sign(norm2(p) - r2) <= 0]
    return g.induced_subgraph(keep)


def circle(g: UDGraph) -> UDGraph:
    """Union of the six rotations of V(g) by k*pi/3 about the origin."""
    rots = [rot_k_pi_3(k) for k in range(6)]
    return build(rotate(p, ORIGIN, r) for r in rots for p in g.vertices)
