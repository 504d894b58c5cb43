"""Exact arithmetic in the Gaussian rationals Q(i).

A :class:`Scalar` stores ``(a + b*i) / d`` with integers ``a, b`` and a positive
common denominator ``d``, reduced so that ``gcd(a, b, d) == 1``.  The serialized
form keeps the real and imaginary parts separately in lowest terms::

    >>> str(Scalar.parse("i"))
    '0/1+1/1*i'
    >>> str(Scalar(1, 2) / 2)
    '1/2+1/1*i'
"""

from __future__ import annotations

import re as _re
from fractions import Fraction
from math import gcd
from numbers import Rational

__all__ = ["Scalar", "ZERO", "ONE", "I", "as_scalar"]


class Scalar:
    __slots__ = ("_a", "_b", "_d")

    def __init__(self, re=0, im=0):
        re = Fraction(re)
        im = Fraction(im)
        d = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        self._set(re.numerator * (d // re.denominator), im.numerator * (d // im.denominator), d)

    def _set(self, a: int, b: int, d: int) -> None:
        g = gcd(gcd(a, b), d)
        if g != 1:
            a //= g
            b //= g
            d //= g
        self._a, self._b, self._d = a, b, d

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> Scalar:
        obj = object.__new__(cls)
        if d < 0:
            a, b, d = -a, -b, -d
        obj._set(a, b, d)
        return obj

    # -- accessors -----------------------------------------------------

    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    def is_zero(self) -> bool:
        return self._a == 0 and self._b == 0

    def is_real(self) -> bool:
        return self._b == 0

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if other._a == 0 and other._b == 0:
            return self
        if self._a == 0 and self._b == 0:
            return other
        d1, d2 = self._d, other._d
        if d1 == d2:
            return Scalar._raw(self._a + other._a, self._b + other._b, d1)
        return Scalar._raw(self._a * d2 + other._a * d1, self._b * d2 + other._b * d1, d1 * d2)

    __radd__ = __add__

    def __neg__(self) -> Scalar:
        obj = object.__new__(Scalar)
        obj._a, obj._b, obj._d = -self._a, -self._b, self._d
        return obj

    def __pos__(self) -> Scalar:
        return self

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b, c, e = self._a, self._b, other._a, other._b
        if (a == 0 and b == 0) or (c == 0 and e == 0):
            return ZERO
        if b == 0 and e == 0:
            return Scalar._raw(a * c, 0, self._d * other._d)
        return Scalar._raw(a * c - b * e, a * e + b * c, self._d * other._d)

    __rmul__ = __mul__

    def inverse(self) -> Scalar:
        """Multiplicative inverse; raises ``ZeroDivisionError`` on zero."""
        a, b, d = self._a, self._b, self._d
        norm = a * a + b * b
        if norm == 0:
            raise ZeroDivisionError("Scalar division by zero")
        # d/(a+bi) = d(a-bi)/(a^2+b^2)
        return Scalar._raw(d * a, -d * b, norm)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int) -> Scalar:
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> Scalar:
        return Scalar._raw(self._a, -self._b, self._d)

    def norm(self) -> Fraction:
        """The field norm ``|x|^2``."""
        return Fraction(self._a * self._a + self._b * self._b, self._d * self._d)

    # -- comparison / hashing ------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self._a == other._a and self._b == other._b and self._d == other._d

    def __hash__(self):
        if self._b == 0:
            return hash(Fraction(self._a, self._d))
        return hash((self._a, self._b, self._d))

    def __bool__(self):
        return not (self._a == 0 and self._b == 0)

    def sort_key(self) -> tuple:
        return (self.re, self.im)

    # -- text ----------------------------------------------------------

    def __str__(self) -> str:
        re_, im_ = self.re, self.im
        sign = "-" if im_ < 0 else "+"
        return f"{re_.numerator}/{re_.denominator}{sign}{abs(im_.numerator)}/{im_.denominator}*i"

    def __repr__(self) -> str:
        return f"Scalar('{self}')"

    def pretty(self) -> str:
        """Short human-readable rendering, e.g. ``-1/2+2i``."""
        re_, im_ = self.re, self.im
        if im_ == 0:
            return str(re_)
        if im_ == 1:
            ims = "i"
        elif im_ == -1:
            ims = "-i"
        else:
            ims = f"{im_}i"
        if re_ == 0:
            return ims
        return f"{re_}{'' if ims.startswith('-') else '+'}{ims}"

    _TERM = _re.compile(r"([+-]?)\s*(\d+(?:/\d+)?)?\s*(\*?\s*i)?")

    @classmethod
    def parse(cls, text) -> Scalar:
        """Parse ``"p/q+r/s*i"`` and shorthands such as ``"3"``, ``"-i"``, ``"1-2*i"``."""
        if isinstance(text, (int, Fraction, Scalar)):
            return as_scalar(text)
        s = str(text).replace(" ", "")
        if not s:
            raise ValueError("empty scalar string")
        re_part = Fraction(0)
        im_part = Fraction(0)
        pos = 0
        while pos < len(s):
            m = cls._TERM.match(s, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse scalar {text!r}")
            sign, num, imag = m.groups()
            if num is None and imag is None:
                raise ValueError(f"cannot parse scalar {text!r}")
            if pos > 0 and not sign:
                raise ValueError(f"cannot parse scalar {text!r}")
            value = Fraction(num) if num is not None else Fraction(1)
            if sign == "-":
                value = -value
            if imag:
                im_part += value
            else:
                re_part += value
            pos = m.end()
        return cls(re_part, im_part)


def _coerce(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, int):
        return Scalar._raw(x, 0, 1)
    if isinstance(x, Rational):
        return Scalar._raw(x.numerator, 0, x.denominator)
    return None


def as_scalar(x) -> Scalar:
    """Convert ints, Fractions and scalar strings to :class:`Scalar`."""
    if isinstance(x, str):
        return Scalar.parse(x)
    s = _coerce(x)
    if s is None:
        raise TypeError(f"cannot convert {type(x).__name__} to Scalar")
    return s


ZERO = Scalar._raw(0, 0, 1)
ONE = Scalar._raw(1, 0, 1)
I = Scalar._raw(0, 1, 1)
