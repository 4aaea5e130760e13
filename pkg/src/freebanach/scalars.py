"""Exact scalars: rationals (``Fraction``) and Gaussian rationals.

Rationals are serialized as bare integers when integral and as ``"num/den"``
strings otherwise.  Gaussian rationals serialize as ``{"re": r, "im": r}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union


class FieldError(ValueError):
    """A complex coefficient reached an operation defined only over the rationals."""


@dataclass(frozen=True)
class Gaussian:
    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def _lift(other) -> "Gaussian | None":
        if isinstance(other, Gaussian):
            return other
        if isinstance(other, (int, Rational)):
            return Gaussian(Fraction(other))
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Gaussian(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Gaussian(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Gaussian(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("Gaussian division by zero")
        num = self * o.conjugate()
        return Gaussian(num.re / den, num.im / den)

    def conjugate(self) -> "Gaussian":
        return Gaussian(self.re, -self.im)

    def abs2(self) -> Fraction:
        """Squared modulus (the modulus itself is generally irrational)."""
        return self.re * self.re + self.im * self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"Gaussian({self.re}, {self.im})"


Scalar = Union[Fraction, Gaussian]


def to_scalar(value) -> Scalar:
    """Normalize to ``Fraction``, or ``Gaussian`` when the imaginary part is nonzero."""
    if isinstance(value, Gaussian):
        return value.re if value.im == 0 else value
    if isinstance(value, complex):
        raise TypeError("floating-point complex numbers are not exact; use Gaussian")
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass a Fraction, int or 'num/den' string")
    if isinstance(value, str):
        return parse_rational(value)
    return Fraction(value)


def is_real(value: Scalar) -> bool:
    return not isinstance(value, Gaussian) or value.im == 0


def real_part(value: Scalar) -> Fraction:
    return value.re if isinstance(value, Gaussian) else Fraction(value)


def imag_part(value: Scalar) -> Fraction:
    return value.im if isinstance(value, Gaussian) else Fraction(0)


def require_rational(value: Scalar) -> Fraction:
    if isinstance(value, Gaussian):
        if value.im != 0:
            raise FieldError(f"coefficient {value!r} is not rational")
        return value.re
    return Fraction(value)


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, a decimal-free integer string, or an ``int``."""
    if isinstance(text, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if not isinstance(text, str):
        raise ValueError(f"expected an integer or 'num/den' string, got {text!r}")
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        n = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None
    if d == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(n, d)


def format_rational(q: Fraction):
    q = Fraction(q)
    if q.denominator == 1:
        return q.numerator
    return f"{q.numerator}/{q.denominator}"


def parse_scalar(obj) -> Scalar:
    if isinstance(obj, dict):
        if set(obj) - {"re", "im"}:
            raise ValueError(f"unexpected keys in complex scalar {sorted(obj)}")
        return to_scalar(Gaussian(parse_rational(obj.get("re", 0)), parse_rational(obj.get("im", 0))))
    return parse_rational(obj)


def format_scalar(value: Scalar):
    value = to_scalar(value)
    if isinstance(value, Gaussian):
        return {"re": format_rational(value.re), "im": format_rational(value.im)}
    return format_rational(value)
