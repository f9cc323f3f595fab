"""Double-word (hi + lo) arithmetic built on error-free transformations.

The represented value of an :class:`ExtendedValue` is the unevaluated sum
``hi + lo`` with ``|lo| <= ulp(hi)/2``, giving roughly 106 bits of
significand.  Products use Dekker splitting because this interpreter's
``math`` module has no fused multiply-add.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

_SPLITTER = 134217729.0  # 2**27 + 1
_SPLIT_LIMIT = 2.0**996

Number = Union[int, float, Fraction, "ExtendedValue"]


def _check_finite(*xs: float) -> None:
    for x in xs:
        if not math.isfinite(x):
            raise OverflowError("double-word operation produced a non-finite value")


def two_sum(a: float, b: float) -> tuple[float, float]:
    """Knuth's branch-free two-sum: ``s + e == a + b`` exactly."""
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def quick_two_sum(a: float, b: float) -> tuple[float, float]:
    """Two-sum assuming ``|a| >= |b|``."""
    s = a + b
    return s, b - (s - a)


def split(a: float) -> tuple[float, float]:
    if abs(a) > _SPLIT_LIMIT:
        raise OverflowError("operand too large for Dekker splitting")
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a: float, b: float) -> tuple[float, float]:
    """Dekker's product: ``p + e == a * b`` exactly (barring under/overflow)."""
    p = a * b
    _check_finite(p)
    ah, al = split(a)
    bh, bl = split(b)
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


class ExtendedValue:
    """An unevaluated double-word scalar ``hi + lo``."""

    __slots__ = ("hi", "lo")

    def __init__(self, hi: float = 0.0, lo: float = 0.0) -> None:
        s, e = two_sum(float(hi), float(lo))
        _check_finite(s, e)
        self.hi = s
        self.lo = e

    @classmethod
    def _raw(cls, hi: float, lo: float) -> "ExtendedValue":
        obj = cls.__new__(cls)
        _check_finite(hi, lo)
        obj.hi = hi
        obj.lo = lo
        return obj

    @classmethod
    def from_value(cls, x: Number) -> "ExtendedValue":
        if isinstance(x, ExtendedValue):
            return x
        if isinstance(x, float):
            return cls._raw(x, 0.0)
        fr = Fraction(x)
        hi = float(fr)
        lo = float(fr - Fraction(hi))
        return cls(hi, lo)

    def __float__(self) -> float:
        return self.hi + self.lo

    def __repr__(self) -> str:
        return f"ExtendedValue(hi={self.hi!r}, lo={self.lo!r})"

    def to_fraction(self) -> Fraction:
        return Fraction(self.hi) + Fraction(self.lo)

    # arithmetic ---------------------------------------------------------

    def __neg__(self) -> "ExtendedValue":
        return ExtendedValue._raw(-self.hi, -self.lo)

    def __abs__(self) -> "ExtendedValue":
        return -self if self.hi < 0 or (self.hi == 0 and self.lo < 0) else self

    def __add__(self, other: Number) -> "ExtendedValue":
        b = _coerce(other)
        if b is None:
            return NotImplemented
        s, e = two_sum(self.hi, b.hi)
        t, f = two_sum(self.lo, b.lo)
        e += t
        s, e = quick_two_sum(s, e)
        e += f
        s, e = quick_two_sum(s, e)
        return ExtendedValue._raw(s, e)

    __radd__ = __add__

    def __sub__(self, other: Number) -> "ExtendedValue":
        b = _coerce(other)
        if b is None:
            return NotImplemented
        return self + (-b)

    def __rsub__(self, other: Number) -> "ExtendedValue":
        return (-self) + other

    def __mul__(self, other: Number) -> "ExtendedValue":
        b = _coerce(other)
        if b is None:
            return NotImplemented
        p, e = two_prod(self.hi, b.hi)
        e += self.hi * b.lo + self.lo * b.hi
        p, e = quick_two_sum(p, e)
        return ExtendedValue._raw(p, e)

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "ExtendedValue":
        b = _coerce(other)
        if b is None:
            return NotImplemented
        if b.hi == 0.0:
            raise ZeroDivisionError("double-word division by zero")
        q1 = self.hi / b.hi
        r = self - b * q1
        q2 = r.hi / b.hi
        r = r - b * q2
        q3 = r.hi / b.hi
        s, e = quick_two_sum(q1, q2)
        return ExtendedValue._raw(s, e) + q3

    def __rtruediv__(self, other: Number) -> "ExtendedValue":
        return ExtendedValue.from_value(other) / self

    def __pow__(self, n: int) -> "ExtendedValue":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return ONE / (self ** (-n))
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def ldexp(self, k: int) -> "ExtendedValue":
        return ExtendedValue._raw(math.ldexp(self.hi, k), math.ldexp(self.lo, k))

    # comparisons ----------------------------------------------------------

    def _cmp_key(self) -> tuple[float, float]:
        return (self.hi, self.lo)

    def __eq__(self, other: object) -> bool:
        b = _coerce(other)  # type: ignore[arg-type]
        if b is None:
            return NotImplemented
        return self._cmp_key() == b._cmp_key()

    def __lt__(self, other: Number) -> bool:
        b = _coerce(other)
        return self._cmp_key() < b._cmp_key()

    def __le__(self, other: Number) -> bool:
        b = _coerce(other)
        return self._cmp_key() <= b._cmp_key()

    def __gt__(self, other: Number) -> bool:
        b = _coerce(other)
        return self._cmp_key() > b._cmp_key()

    def __ge__(self, other: Number) -> bool:
        b = _coerce(other)
        return self._cmp_key() >= b._cmp_key()

    def __hash__(self) -> int:
        return hash(self._cmp_key())


def _coerce(x: Number) -> ExtendedValue | None:
    if isinstance(x, ExtendedValue):
        return x
    if isinstance(x, (int, float, Fraction)):
        return ExtendedValue.from_value(x)
    return None


ZERO = ExtendedValue._raw(0.0, 0.0)
ONE = ExtendedValue._raw(1.0, 0.0)

# ln 2 and pi to double-word precision
LN2 = ExtendedValue._raw(0.6931471805599453094, 2.319046813846299558e-17)
PI = ExtendedValue._raw(3.141592653589793116, 1.224646799147353207e-16)


def extended_sum(a: Number, b: Number) -> ExtendedValue:
    return ExtendedValue.from_value(a) + b


def extended_product(a: Number, b: Number) -> ExtendedValue:
    return ExtendedValue.from_value(a) * b


def dw_sqrt(x: Number) -> ExtendedValue:
    x = ExtendedValue.from_value(x)
    if x.hi < 0:
        raise ValueError("square root of a negative double-word value")
    if x.hi == 0:
        return ZERO
    y = ExtendedValue(math.sqrt(x.hi))
    return y + (x - y * y) / (y * 2)


def dw_exp(x: Number) -> ExtendedValue:
    """Exponential to double-word accuracy (argument reduction + Taylor)."""
    x = ExtendedValue.from_value(x)
    if x.hi > 709.0:
        raise OverflowError("exp argument too large")
    if x.hi < -745.0:
        return ZERO
    k = int(round(x.hi / LN2.hi))
    r = (x - LN2 * k).ldexp(-10)
    # expm1(r) by Taylor; |r| < 2**-10 so 12 terms reach 2**-120
    term = r
    s = r
    for j in range(2, 14):
        term = term * r / j
        s = s + term
        if abs(term.hi) < 1e-36:
            break
    for _ in range(10):
        s = s * (s + 2)
    return (s + 1).ldexp(k)


def dw_log(x: Number) -> ExtendedValue:
    """Natural logarithm by Newton refinement of the binary64 log."""
    x = ExtendedValue.from_value(x)
    if x.hi <= 0:
        raise ValueError("logarithm of a non-positive double-word value")
    y = ExtendedValue(math.log(x.hi))
    for _ in range(2):
        y = y + x * dw_exp(-y) - 1
    return y


def accumulate(values) -> ExtendedValue:
    """Sum an iterable of floats / double-words in double-word arithmetic."""
    acc = ZERO
    for v in values:
        acc = acc + v
    return acc
