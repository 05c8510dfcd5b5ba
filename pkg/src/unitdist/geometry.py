"""Exact plane geometry over Q(sqrt3, sqrt11)."""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from .field import ONE, ZERO, FieldElem, format_elem, parse_elem, sign


class Point(NamedTuple):
    """A plane point, also read as the complex number x + iy."""

    x: FieldElem
    y: FieldElem

    def __add__(self, other):
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return Point(self.x - other.x, self.y - other.y)

    def __neg__(self):
        return Point(-self.x, -self.y)

    def cmul(self, other: Point) -> Point:
        """Complex product."""
        return Point(self.x * other.x - self.y * other.y,
                     self.x * other.y + self.y * other.x)

    def sort_key(self):
        return self.x.sort_key() + self.y.sort_key()

    def to_float(self) -> tuple[float, float]:
        return (float(self.x), float(self.y))

    def is_origin(self) -> bool:
        return not self.x and not self.y

    def __str__(self):
        return format_point(self)


ORIGIN = Point(ZERO, ZERO)


def point(x, y) -> Point:
    """Build a point from field elements, ints, Fractions or coefficient tuples."""
    return Point(_as_elem(x), _as_elem(y))


def _as_elem(v) -> FieldElem:
    if isinstance(v, FieldElem):
        return v
    if isinstance(v, (tuple, list)):
        return FieldElem(*v)
    return FieldElem(v)


class RotationSpec(NamedTuple):
    cos: FieldElem
    sin: FieldElem

    def check(self):
        if self.cos * self.cos + self.sin * self.sin != ONE:
            raise ValueError(f"cos^2 + sin^2 != 1 for {self}")
        return self

    def as_point(self) -> Point:
        return Point(self.cos, self.sin)


def dist2(p: Point, q: Point) -> FieldElem:
    dx = p.x - q.x
    dy = p.y - q.y
    return dx * dx + dy * dy


def norm2(p: Point) -> FieldElem:
    return p.x * p.x + p.y * p.y


def is_unit(p: Point, q: Point) -> bool:
    return dist2(p, q) == ONE


def rotate(p: Point, center: Point, r: RotationSpec) -> Point:
    return center + (p - center).cmul(r.as_point())


_HALF = Fraction(1, 2)


def rot_pi_3() -> RotationSpec:
    return RotationSpec(FieldElem(_HALF), FieldElem(0, _HALF))


def rot_k_pi_3(k: int) -> RotationSpec:
    k %= 6
    r = RotationSpec(ONE, ZERO)
    step = rot_pi_3().as_point()
    z = r.as_point()
    for _ in range(k):
        z = z.cmul(step)
    return RotationSpec(z.x, z.y)


def conj(p: Point) -> Point:
    """Reflection across the x-axis."""
    return Point(p.x, -p.y)


def cross_sign(p: Point, q: Point) -> int:
    """Sign of the 2D cross product p x q."""
    return sign(p.x * q.y - p.y * q.x)


def format_point(p: Point) -> str:
    return f"({format_elem(p.x)}, {format_elem(p.y)})"


def parse_point(text: str) -> Point:
    s = text.strip().rstrip(",.").strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise ValueError(f"not a point: {text!r}")
    inner = s[1:-1]
    depth = 0
    for i, ch in enumerate(inner):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            return Point(parse_elem(inner[:i]), parse_elem(inner[i + 1:]))
    raise ValueError(f"not a point: {text!r}")
