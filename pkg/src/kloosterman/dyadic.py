"""Dyadic rationals p / 2^k, used as field exponents.

Any element of GF(2^m) has a unique square root, so a dyadic exponent is
realizable on every nonzero element: take k square roots, then an integer
power. Exponents with an odd denominator > 1 are not supported.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class DyadicRational:
    """An exponent num / 2^log2_den, kept in reduced form.

    Reduced means num is odd or zero, and zero is stored as (0, 0), so
    structural equality of instances is value equality.
    """

    num: int
    log2_den: int = 0

    def __post_init__(self) -> None:
        num, k = self.num, self.log2_den
        if k < 0:
            raise ValueError("log2_den must be nonnegative")
        if num == 0:
            k = 0
        else:
            while num % 2 == 0 and k > 0:
                num //= 2
                k -= 1
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "log2_den", k)

    @classmethod
    def from_fraction(cls, fr: Fraction) -> "DyadicRational":
        den = fr.denominator
        if den & (den - 1):
            raise ValueError(f"denominator of {fr} is not a power of two")
        return cls(fr.numerator, den.bit_length() - 1)

    @classmethod
    def from_string(cls, text: str) -> "DyadicRational":
        """Parse "3", "-2" or "num/den" with den a power of two."""
        return cls.from_fraction(Fraction(text.strip()))

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.log2_den)

    @property
    def denominator(self) -> int:
        return 1 << self.log2_den

    @property
    def is_integer(self) -> bool:
        return self.log2_den == 0

    def __add__(self, other: "DyadicRational | int") -> "DyadicRational":
        return DyadicRational.from_fraction(self.as_fraction() + _coerce(other))

    __radd__ = __add__

    def __mul__(self, other: "DyadicRational | int") -> "DyadicRational":
        return DyadicRational.from_fraction(self.as_fraction() * _coerce(other))

    __rmul__ = __mul__

    def __neg__(self) -> "DyadicRational":
        return DyadicRational(-self.num, self.log2_den)

    def __str__(self) -> str:
        if self.log2_den == 0:
            return str(self.num)
        return f"{self.num}/{1 << self.log2_den}"


def _coerce(value: "DyadicRational | int") -> Fraction:
    if isinstance(value, DyadicRational):
        return value.as_fraction()
    return Fraction(value)


def as_dyadic(value: "DyadicRational | int | str | Fraction") -> DyadicRational:
    """Coerce common exponent spellings to a DyadicRational."""
    if isinstance(value, DyadicRational):
        return value
    if isinstance(value, int):
        return DyadicRational(value)
    if isinstance(value, str):
        return DyadicRational.from_string(value)
    return DyadicRational.from_fraction(value)
