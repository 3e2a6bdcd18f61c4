"""Exact arithmetic in the quadratic field Q(sqrt 2)."""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

__all__ = ["Scalar", "SQRT2", "as_fraction", "parse_scalar", "format_scalar"]


def as_fraction(x) -> Fraction:
    """Coerce an int, Fraction or decimal/ratio string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class Scalar:
    """An element ``rational + root2 * sqrt(2)`` with both parts exact rationals.

    Instances are immutable and interoperate with ``int`` and ``Fraction``
    operands, so rational-only computations may keep using plain Fractions.
    """

    __slots__ = ("rational", "root2")

    def __init__(self, rational=0, root2=0):
        object.__setattr__(self, "rational", as_fraction(rational))
        object.__setattr__(self, "root2", as_fraction(root2))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    @staticmethod
    def lift(x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        return Scalar(x, 0)

    def is_rational(self) -> bool:
        return self.root2 == 0

    def to_fraction(self) -> Fraction:
        if self.root2:
            raise ValueError(f"{self} is not rational")
        return self.rational

    def conjugate(self) -> "Scalar":
        return Scalar(self.rational, -self.root2)

    def norm(self) -> Fraction:
        return self.rational * self.rational - 2 * self.root2 * self.root2

    def __add__(self, other):
        if isinstance(other, Scalar):
            return Scalar(self.rational + other.rational, self.root2 + other.root2)
        if isinstance(other, (int, Fraction)):
            return Scalar(self.rational + other, self.root2)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.rational, -self.root2)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Scalar):
            a, b, c, d = self.rational, self.root2, other.rational, other.root2
            return Scalar(a * c + 2 * b * d, a * d + b * c)
        if isinstance(other, (int, Fraction)):
            return Scalar(self.rational * other, self.root2 * other)
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt2)")
        return Scalar(self.rational / n, -self.root2 / n)

    def __truediv__(self, other):
        if isinstance(other, Scalar):
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(sqrt2)")
            return Scalar(self.rational / other, self.root2 / other)
        return NotImplemented

    def __rtruediv__(self, other):
        return Scalar.lift(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.rational == other.rational and self.root2 == other.root2
        if isinstance(other, (int, Fraction)):
            return self.root2 == 0 and self.rational == other
        return NotImplemented

    def __hash__(self):
        if self.root2 == 0:
            return hash(self.rational)
        return hash((self.rational, self.root2))

    def __bool__(self):
        return bool(self.rational) or bool(self.root2)

    def __repr__(self):
        return f"Scalar({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


SQRT2 = Scalar(0, 1)

_SCALAR_RE = re.compile(
    r"^\s*(?P<rat>[+-]?\d+(?:/\d+)?)?\s*(?:(?P<sign>[+-])?\s*(?P<r2>\d+(?:/\d+)?)?\s*\*\s*sqrt2)?\s*$"
)


def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def format_scalar(x) -> str:
    """Serialize as ``"p/q"`` or ``"p/q+r/s*sqrt2"`` (always with explicit denominators)."""
    s = Scalar.lift(x)
    head = _frac_str(s.rational)
    if s.root2 == 0:
        return head
    r2 = s.root2
    sign = "-" if r2 < 0 else "+"
    return f"{head}{sign}{_frac_str(abs(r2))}*sqrt2"


def parse_scalar(text: str):
    """Inverse of :func:`format_scalar`; rational values come back as Fractions."""
    m = _SCALAR_RE.match(text)
    if not m or (m.group("rat") is None and "sqrt2" not in text):
        raise ValueError(f"malformed scalar {text!r}")
    rat = Fraction(m.group("rat")) if m.group("rat") else Fraction(0)
    if "sqrt2" not in text:
        return rat
    r2 = Fraction(m.group("r2")) if m.group("r2") else Fraction(1)
    if m.group("sign") == "-":
        r2 = -r2
    return Scalar(rat, r2)
