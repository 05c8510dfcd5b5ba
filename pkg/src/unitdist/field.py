"""Exact arithmetic in Q(sqrt3, sqrt11).

An element is stored as four rationals (a, b, c, d) standing for
a + b*sqrt(3) + c*sqrt(11) + d*sqrt(33).  Everything the geometry needs
(equality, sign, square roots) is decided exactly.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

Rational = Fraction

_S3 = math.sqrt(3.0)
_S11 = math.sqrt(11.0)
_S33 = math.sqrt(33.0)


class NotASquare(ArithmeticError):
    """The element has no square root inside Q(sqrt3, sqrt11)."""


def _q(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        return Fraction(v.strip())
    if isinstance(v, float):
        raise TypeError("floats are not accepted as exact field coordinates")
    return Fraction(v)


class FieldElem:
    __slots__ = ("a", "b", "c", "d", "_hash")

    def __init__(self, a=0, b=0, c=0, d=0):
        self.a = _q(a)
        self.b = _q(b)
        self.c = _q(c)
        self.d = _q(d)
        self._hash = None

    @classmethod
    def _raw(cls, a, b, c, d):
        obj = cls.__new__(cls)
        obj.a, obj.b, obj.c, obj.d = a, b, c, d
        obj._hash = None
        return obj

    def coeffs(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def __repr__(self):
        return f"FieldElem({format_elem(self)})"

    def __str__(self):
        return format_elem(self)

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return (self.a == other.a and self.b == other.b
                    and self.c == other.c and self.d == other.d)
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.c == 0 and self.d == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.a, self.b, self.c, self.d))
        return self._hash

    def __bool__(self):
        return bool(self.a or self.b or self.c or self.d)

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return FieldElem._raw(self.a + other.a, self.b + other.b,
                              self.c + other.c, self.d + other.d)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem._raw(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return FieldElem._raw(self.a - other.a, self.b - other.b,
                              self.c - other.c, self.d - other.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElem._raw(self.a * other, self.b * other,
                                  self.c * other, self.d * other)
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = other.a, other.b, other.c, other.d
        # sqrt3*sqrt11 = sqrt33, sqrt3*sqrt33 = 3 sqrt11, sqrt11*sqrt33 = 11 sqrt3
        a = a1 * a2 + 3 * b1 * b2 + 11 * c1 * c2 + 33 * d1 * d2
        b = a1 * b2 + b1 * a2 + 11 * (c1 * d2 + d1 * c2)
        c = a1 * c2 + c1 * a2 + 3 * (b1 * d2 + d1 * b2)
        d = a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2
        return FieldElem._raw(a, b, c, d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(sqrt3, sqrt11)")
            return self * (Fraction(1) / other)
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self * inverse(other)

    def __rtruediv__(self, other):
        return inverse(self) * other

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return inverse(self) ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __float__(self):
        return (float(self.a) + float(self.b) * _S3
                + float(self.c) * _S11 + float(self.d) * _S33)

    def __lt__(self, other):
        return sign(self - _coerce(other)) < 0

    def __le__(self, other):
        return sign(self - _coerce(other)) <= 0

    def __gt__(self, other):
        return sign(self - _coerce(other)) > 0

    def __ge__(self, other):
        return sign(self - _coerce(other)) >= 0

    def sort_key(self):
        return (self.a, self.b, self.c, self.d)

    def conj3(self) -> FieldElem:
        """Image under sqrt3 -> -sqrt3."""
        return FieldElem._raw(self.a, -self.b, self.c, -self.d)

    def conj11(self) -> FieldElem:
        """Image under sqrt11 -> -sqrt11."""
        return FieldElem._raw(self.a, self.b, -self.c, -self.d)

    def is_rational(self) -> bool:
        return self.b == 0 and self.c == 0 and self.d == 0


def _coerce(v) -> FieldElem | None:
    if isinstance(v, FieldElem):
        return v
    if isinstance(v, (int, Fraction)):
        return FieldElem._raw(Fraction(v), Fraction(0), Fraction(0), Fraction(0))
    return None


def elem(a=0, b=0, c=0, d=0) -> FieldElem:
    return FieldElem(a, b, c, d)


ZERO = FieldElem()
ONE = FieldElem(1)
SQRT3 = FieldElem(0, 1)
SQRT11 = FieldElem(0, 0, 1)
SQRT33 = FieldElem(0, 0, 0, 1)


def inverse(x: FieldElem) -> FieldElem:
    """Multiplicative inverse, rationalising through both conjugations."""
    if not x:
        raise ZeroDivisionError("inverse of zero in Q(sqrt3, sqrt11)")
    # x * conj11(x) lies in Q(sqrt3); times its sqrt3-conjugate it is rational.
    y = x * x.conj11()
    z = y * y.conj3()
    assert z.is_rational()
    return x.conj11() * y.conj3() * (Fraction(1) / z.a)


# ---------------------------------------------------------------- sign

def _sign_q3(r: Fraction, s: Fraction) -> int:
    """Sign of r + s*sqrt3."""
    sr = (r > 0) - (r < 0)
    ss = (s > 0) - (s < 0)
    if sr == 0:
        return ss
    if ss == 0 or sr == ss:
        return sr
    # opposite signs: compare r^2 with 3 s^2
    diff = r * r - 3 * s * s
    return sr if diff > 0 else -sr


def _exact_sign(x: FieldElem) -> int:
    # x = P + Q sqrt11 with P = a + b sqrt3, Q = c + d sqrt3
    sp = _sign_q3(x.a, x.b)
    sq = _sign_q3(x.c, x.d)
    if sq == 0:
        return sp
    if sp == 0 or sp == sq:
        return sp or sq
    # P^2 - 11 Q^2, an element of Q(sqrt3)
    p2r = x.a * x.a + 3 * x.b * x.b
    p2s = 2 * x.a * x.b
    q2r = x.c * x.c + 3 * x.d * x.d
    q2s = 2 * x.c * x.d
    return sp * _sign_q3(p2r - 11 * q2r, p2s - 11 * q2s)


def sign(x: FieldElem) -> int:
    """Exact sign of the real number x (-1, 0 or +1)."""
    if not x:
        return 0
    try:
        terms = (float(x.a), float(x.b) * _S3, float(x.c) * _S11, float(x.d) * _S33)
    except OverflowError:
        return _exact_sign(x)
    approx = sum(terms)
    # each term carries relative error below 4 ulp; 1e-12 is far outside that
    guard = 1e-12 * sum(abs(t) for t in terms)
    if approx > guard:
        return 1
    if approx < -guard:
        return -1
    return _exact_sign(x)


# ---------------------------------------------------------------- sqrt

def _sqrt_rational(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _mul_q3(x, y):
    return (x[0] * y[0] + 3 * x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _sqrt_q3(r: Fraction, s: Fraction):
    """All square roots of r + s*sqrt3 inside Q(sqrt3), as (u, v) or None."""
    if s == 0:
        u = _sqrt_rational(r)
        if u is not None:
            return (u, Fraction(0))
        v = _sqrt_rational(r / 3)
        if v is not None:
            return (Fraction(0), v)
        return None
    # (u + v sqrt3)^2 = u^2 + 3v^2 + 2uv sqrt3
    t = _sqrt_rational(r * r - 3 * s * s)
    if t is None:
        return None
    for cand in ((r + t) / 2, (r - t) / 2):
        u = _sqrt_rational(cand)
        if u:
            v = s / (2 * u)
            if _mul_q3((u, v), (u, v)) == (r, s):
                return (u, v)
    return None


def sqrt(x: FieldElem) -> FieldElem:
    """Nonnegative square root of x inside the field.

    Raises NotASquare when no root exists in Q(sqrt3, sqrt11) and
    ValueError for negative input.
    """
    s = sign(x)
    if s < 0:
        raise ValueError(f"square root of negative element {x}")
    if s == 0:
        return ZERO
    # x = P + Q sqrt11 over K = Q(sqrt3); look for (R + S sqrt11)^2 = x
    P = (x.a, x.b)
    Q = (x.c, x.d)
    candidates = []
    if Q == (0, 0):
        R = _sqrt_q3(*P)
        if R is not None:
            candidates.append((R, (Fraction(0), Fraction(0))))
        S = _sqrt_q3(P[0] / 11, P[1] / 11)
        if S is not None:
            candidates.append(((Fraction(0), Fraction(0)), S))
    else:
        p2 = _mul_q3(P, P)
        q2 = _mul_q3(Q, Q)
        n = _sqrt_q3(p2[0] - 11 * q2[0], p2[1] - 11 * q2[1])
        if n is not None:
            for sgn in (1, -1):
                half = ((P[0] + sgn * n[0]) / 2, (P[1] + sgn * n[1]) / 2)
                R = _sqrt_q3(*half)
                if R is None or R == (0, 0):
                    continue
                # S = Q / (2R)
                inv_r = FieldElem(R[0], R[1]) * 2
                s_elem = FieldElem(Q[0], Q[1]) * inverse(inv_r)
                candidates.append((R, (s_elem.a, s_elem.b)))
    for R, S in candidates:
        y = FieldElem(R[0], R[1], S[0], S[1])
        if y * y == x:
            return y if sign(y) >= 0 else -y
    raise NotASquare(f"{x} is not a square in Q(sqrt3, sqrt11)")


def is_square(x: FieldElem) -> bool:
    try:
        sqrt(x)
    except (NotASquare, ValueError):
        return False
    return True


# ---------------------------------------------------------------- text form

def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_elem(x: FieldElem) -> str:
    return "(" + ", ".join(_fmt_q(v) for v in x.coeffs()) + ")"


_QUAD = re.compile(r"\(\s*([^(),]+),\s*([^(),]+),\s*([^(),]+),\s*([^(),]+)\)")


def parse_elem(text: str) -> FieldElem:
    m = _QUAD.fullmatch(text.strip())
    if m is None:
        raise ValueError(f"not a field quadruple: {text!r}")
    return FieldElem(*(Fraction(g.strip()) for g in m.groups()))
