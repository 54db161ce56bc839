from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Any

from padicwave.core.types import Rational


@total_ordering
@dataclass(frozen=True, slots=True, eq=False)
class AbsValue:
    """An absolute value p^{-exponent}; ``exponent is None`` is the absolute value of zero.

    Ordering follows the real number p^{-exponent}: a smaller exponent is a
    larger absolute value. ``exact`` is False when the value is only an upper
    bound (a quantity that vanished at working precision).
    """

    exponent: Fraction | None
    exact: bool = True

    @classmethod
    def of(cls, exponent: Rational | None, exact: bool = True) -> AbsValue:
        return cls(None if exponent is None else Fraction(exponent), exact)

    @classmethod
    def zero(cls) -> AbsValue:
        return cls(None, True)

    @classmethod
    def one(cls) -> AbsValue:
        return cls(Fraction(0), True)

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AbsValue):
            return NotImplemented
        return self.exponent == other.exponent

    def __hash__(self) -> int:
        return hash(self.exponent)

    def __lt__(self, other: AbsValue) -> bool:
        if self.exponent is None:
            return other.exponent is not None
        if other.exponent is None:
            return False
        return self.exponent > other.exponent

    def __mul__(self, other: AbsValue) -> AbsValue:
        if self.exponent is None or other.exponent is None:
            return AbsValue.zero()
        return AbsValue(self.exponent + other.exponent, self.exact and other.exact)

    def __truediv__(self, other: AbsValue) -> AbsValue:
        if other.exponent is None:
            raise ZeroDivisionError("division by the absolute value of zero")
        if self.exponent is None:
            return AbsValue.zero()
        return AbsValue(self.exponent - other.exponent, self.exact and other.exact)

    def scaled(self, shift: Rational) -> AbsValue:
        """Multiply by p^{shift}."""
        if self.exponent is None:
            return self
        return AbsValue(self.exponent - Fraction(shift), self.exact)

    def to_json(self) -> dict[str, int] | None:
        if self.exponent is None:
            return None
        return {"num": self.exponent.numerator, "den": self.exponent.denominator}

    @classmethod
    def from_json(cls, data: Any) -> AbsValue:
        if data is None:
            return cls.zero()
        return cls(Fraction(int(data["num"]), int(data["den"])))

    def __str__(self) -> str:
        if self.exponent is None:
            return "0"
        marker = "" if self.exact else "<="
        return f"{marker}p^({-self.exponent})"


def max_abs(*values: AbsValue) -> AbsValue:
    best = AbsValue.zero()
    for v in values:
        if v > best:
            best = v
    return best


def exponent_min(a: Fraction | None, b: Fraction | None) -> Fraction | None:
    """Exponent of the larger of two absolute values."""
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)
