from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Any

from padicwave.arith.scalar import PadicScalar
from padicwave.core.exceptions import InvalidParametersError
from padicwave.fields.descriptor import FieldDescriptor


@dataclass(frozen=True, slots=True, order=True)
class CosetRep:
    """A representative a = Σ_{m<level} [t_m] ϖ^m of a coset a + ϖ^level O_F.

    ``digits`` are residue indices in [0, q); ``level`` is the number of
    digits. Padding with trailing zeros moves a representative of A_h into
    A_{h+1} without changing the point it denotes.
    """

    digits: tuple[int, ...]

    @property
    def level(self) -> int:
        return len(self.digits)

    def canonical(self) -> CosetRep:
        """The same point with trailing zero digits stripped, so that level == l(a)."""
        return CosetRep(self.digits[: l_of(self)])

    def truncate(self, h: int) -> CosetRep:
        if h > self.level:
            raise InvalidParametersError(f"cannot truncate level {self.level} coset to level {h}")
        return CosetRep(self.digits[:h])

    def pad(self, h: int) -> CosetRep:
        if h < self.level:
            if any(self.digits[h:]):
                raise InvalidParametersError(f"{self.digits} does not lie in A_{h}")
            return CosetRep(self.digits[:h])
        return CosetRep(self.digits + (0,) * (h - self.level))

    def child(self, t: int) -> CosetRep:
        return CosetRep((*self.digits, t))

    def contains(self, other: CosetRep) -> bool:
        """True when other's coset lies inside this one."""
        return other.level >= self.level and other.digits[: self.level] == self.digits

    def point(self, field: FieldDescriptor) -> PadicScalar:
        return coset_point(field, self.digits)

    def to_json(self) -> dict[str, Any]:
        return {"digits": list(self.digits), "level": self.level}

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> CosetRep:
        digits = tuple(int(t) for t in data["digits"])
        level = int(data.get("level", len(digits)))
        if level != len(digits):
            raise InvalidParametersError(f"coset level {level} does not match {len(digits)} digits")
        return cls(digits)

    def __str__(self) -> str:
        return "".join(str(t) for t in self.digits) or "0"


@lru_cache(maxsize=65536)
def coset_point(field: FieldDescriptor, digits: tuple[int, ...]) -> PadicScalar:
    return PadicScalar.from_expansion(field, digits)


def l_of(a: CosetRep) -> int:
    """1 + position of the last nonzero digit; 0 for the representative 0."""
    for m in range(a.level - 1, -1, -1):
        if a.digits[m]:
            return m + 1
    return 0


def residue_system(fd: FieldDescriptor, h: int) -> list[CosetRep]:
    """A_h: all q^h digit strings, enumerated by k in range(q^h) with base-q digits least significant first."""
    if h < 0:
        raise InvalidParametersError(f"level must be non-negative, got {h}")
    q = fd.q
    return [CosetRep(tuple((k // q**m) % q for m in range(h))) for k in range(q**h)]


def descendants(fd: FieldDescriptor, a: CosetRep, h: int) -> list[CosetRep]:
    """Level-h cosets contained in a + ϖ^level(a) O_F."""
    extra = h - a.level
    if extra < 0:
        raise InvalidParametersError(f"level {h} below coset level {a.level}")
    return [CosetRep(a.digits + tail.digits) for tail in residue_system(fd, extra)]


def coset_of(z: PadicScalar, h: int) -> CosetRep:
    """The level-h coset containing an integral point z."""
    return CosetRep(tuple(z.teichmuller_digits(h)))
