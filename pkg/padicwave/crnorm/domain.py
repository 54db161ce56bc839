from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from padicwave.arith.absvalue import AbsValue
from padicwave.arith.scalar import PadicScalar


@dataclass(frozen=True, slots=True)
class SupInterval:
    """A certified enclosure lower <= sup <= upper; ``witness`` attains ``lower``."""

    lower: AbsValue
    upper: AbsValue
    witness: tuple[PadicScalar, ...] | None = None

    @property
    def tight(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self) -> AbsValue:
        """The certified value; only meaningful when tight."""
        return self.upper

    def scaled(self, shift: Fraction) -> SupInterval:
        return SupInterval(self.lower.scaled(shift), self.upper.scaled(shift), self.witness)

    def to_json(self) -> dict[str, Any]:
        return {
            "lower": self.lower.to_json(),
            "upper": self.upper.to_json(),
            "tight": self.tight,
            "witness": None if self.witness is None else [w.to_string() for w in self.witness],
        }


def interval_max(*parts: SupInterval) -> SupInterval:
    lower = AbsValue.zero()
    upper = AbsValue.zero()
    witness: tuple[PadicScalar, ...] | None = None
    for part in parts:
        if part.lower > lower or (witness is None and part.witness is not None and part.lower == lower):
            lower = part.lower
            witness = part.witness
        if part.upper > upper:
            upper = part.upper
    return SupInterval(lower, upper, witness)


@dataclass(frozen=True, slots=True)
class RatioInterval:
    """Enclosure of a quotient of two suprema; ``upper is None`` means unbounded."""

    lower: AbsValue
    upper: AbsValue | None

    @classmethod
    def of(cls, num: SupInterval, den: SupInterval) -> RatioInterval:
        lower = AbsValue.zero() if den.upper.is_zero else num.lower / den.upper
        upper = None if den.lower.is_zero else num.upper / den.lower
        return cls(lower, upper)

    @classmethod
    def exact(cls, num: AbsValue, den: SupInterval) -> RatioInterval:
        return cls.of(SupInterval(num, num), den)

    def to_json(self) -> dict[str, Any]:
        return {"lower": self.lower.to_json(), "upper": None if self.upper is None else self.upper.to_json()}


@dataclass(frozen=True, slots=True)
class CrNormReport:
    """Certified C^r norm of a locally polynomial function.

    ``taylor_part`` encloses sup_i sup_x |D_i f(x) / i!| over |i| <= [r];
    ``remainder_part`` encloses sup |ε_{f,[r]}(x, y)| / |y|^r.
    """

    r: Fraction
    depth: int
    taylor_part: SupInterval
    remainder_part: SupInterval
    profile: dict[int, SupInterval] = field(default_factory=dict)

    @property
    def value(self) -> SupInterval:
        return interval_max(self.taylor_part, self.remainder_part)

    @property
    def tight(self) -> bool:
        return self.value.tight

    def to_json(self) -> dict[str, Any]:
        return {
            "r": {"num": self.r.numerator, "den": self.r.denominator},
            "depth": self.depth,
            "taylor_part": self.taylor_part.to_json(),
            "remainder_part": self.remainder_part.to_json(),
            "value": self.value.to_json(),
            "profile": {str(h): part.to_json() for h, part in sorted(self.profile.items())},
        }
