"""The 102-vertex sector list of the final graph and the point-list text format.

The list is stored exactly as published: one ``((a, b, c, d), (a, b, c, d))``
entry per vertex, entries separated by commas, the last one ending with a
period.  The same format is accepted from user files.
"""

from __future__ import annotations

import functools
from importlib import resources

from .field import SQRT3, sign
from .geometry import ORIGIN, Point, parse_point, rot_k_pi_3, rotate
from .graph import UDGraph, build
from .ops import circle

EXPECTED_SECTOR_SIZE = 102
EXPECTED_CIRCLED_SIZE = 607


class PointListError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def parse_points(text: str) -> list[Point]:
    """Parse a list of quadruple pairs; '#' starts a comment."""
    points = []
    depth = 0
    start = None
    start_line = 0
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0]
        for col, ch in enumerate(line):
            if ch == "(":
                if depth == 0:
                    start = []
                    start_line = lineno
                depth += 1
            if depth > 0:
                start.append(ch)
            if ch == ")":
                depth -= 1
                if depth < 0:
                    raise PointListError(lineno, "unbalanced ')'")
                if depth == 0:
                    try:
                        points.append(parse_point("".join(start)))
                    except (ValueError, ZeroDivisionError) as exc:
                        raise PointListError(start_line, str(exc)) from None
            elif depth == 0 and ch not in " \t,.;\r":
                raise PointListError(lineno, f"unexpected character {ch!r} at column {col + 1}")
        if depth > 0:
            start.append(" ")
    if depth != 0:
        raise PointListError(start_line, "unterminated entry")
    return points


def load_points(path) -> list[Point]:
    with open(path) as fh:
        return parse_points(fh.read())


def final_102_text() -> str:
    return resources.files("unitdist.data").joinpath("final_102.txt").read_text()


def final_102() -> list[Point]:
    pts = parse_points(final_102_text())
    if len(pts) != EXPECTED_SECTOR_SIZE:
        raise RuntimeError(f"embedded vertex list has {len(pts)} entries, expected 102")
    return pts


def polar_angle_offenders(points) -> list[Point]:
    """Non-origin points whose polar angle is outside [0, pi/3)."""
    bad = []
    for p in points:
        if p.is_origin():
            continue
        # angle in [0, pi/3)  <=>  y >= 0, and sqrt3*x - y > 0
        # (the second also excludes the negative x-axis since y >= 0 there)
        if sign(p.y) < 0 or sign(SQRT3 * p.x - p.y) <= 0:
            bad.append(p)
    return bad


def polar_angle_check(points) -> bool:
    return not polar_angle_offenders(points)


def distinct_rotation_orbits(points) -> bool:
    """True if no two listed points are related by a rotation of k*pi/3."""
    seen = set()
    for p in points:
        orbit = {rotate(p, ORIGIN, rot_k_pi_3(k)) for k in range(6)}
        if seen & orbit:
            return False
        seen |= orbit
    return True


@functools.lru_cache(maxsize=1)
def final_graph() -> UDGraph:
    """The circled 607-vertex graph generated from the sector list (built once; read-only)."""
    sector = final_102()
    g = circle(build(sector))
    if g.n != EXPECTED_CIRCLED_SIZE:
        raise RuntimeError(
            f"circled graph has {g.n} vertices, expected {EXPECTED_CIRCLED_SIZE} "
            f"(sector {len(sector)}, non-origin {sum(not p.is_origin() for p in sector)})")
    return g
