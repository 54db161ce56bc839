from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from padicwave.arith.absvalue import AbsValue
from padicwave.arith.scalar import PadicScalar
from padicwave.core.exceptions import DegreeTooHighError, FieldMismatchError, IndexTooLargeError
from padicwave.core.types import Caps, Rational
from padicwave.fields.cosets import CosetRep
from padicwave.fields.descriptor import FieldDescriptor
from padicwave.locpoly.function import integer_part
from padicwave.multiindex.index import MultiIndex

type CoeffKey = tuple[CosetRep, MultiIndex]


def _key_order(key: CoeffKey) -> tuple[int, tuple[int, ...], tuple[int, tuple[int, ...]]]:
    a, i = key
    return (a.level, a.digits, i.sort_key())


@dataclass(frozen=True, slots=True, eq=False)
class WaveletCoeffs:
    """A finite family (b_{a,i}) of coefficients on the basis e_{a,i,r}.

    Keys carry canonical representatives, so ``a.level`` is l(a). When
    ``caps`` is set every index must lie in the capped set Y'.
    """

    field: FieldDescriptor
    r: Fraction
    entries: Mapping[CoeffKey, PadicScalar]
    caps: Caps | None = None

    @classmethod
    def build(
        cls,
        fd: FieldDescriptor,
        r: Rational,
        entries: Mapping[tuple[CosetRep, MultiIndex | tuple[int, ...]], PadicScalar | Rational],
        caps: Caps | None = None,
    ) -> WaveletCoeffs:
        rr = Fraction(r)
        big_r = integer_part(rr)
        clean: dict[CoeffKey, PadicScalar] = {}
        for (a, raw), value in entries.items():
            i = MultiIndex(raw)
            if i.total > big_r:
                raise IndexTooLargeError(f"|{tuple(i)}| = {i.total} exceeds [r] = {big_r}")
            if caps is not None and not i.within(caps):
                raise DegreeTooHighError(f"index {tuple(i)} outside caps {caps}")
            b = value if isinstance(value, PadicScalar) else PadicScalar.from_fraction(fd, value)
            if b.field != fd:
                raise FieldMismatchError(f"coefficient over {b.field.label()} for a family over {fd.label()}")
            key = (a.canonical(), i)
            prev = clean.get(key)
            clean[key] = b if prev is None else prev + b
        kept = {k: clean[k] for k in sorted(clean, key=_key_order) if not clean[k].is_zero}
        return cls(fd, rr, kept, caps)

    @classmethod
    def unit(cls, fd: FieldDescriptor, r: Rational, a: CosetRep, i: MultiIndex | tuple[int, ...]) -> WaveletCoeffs:
        return cls.build(fd, r, {(a, MultiIndex(i)): 1})

    @property
    def is_zero(self) -> bool:
        return not self.entries

    @property
    def max_level(self) -> int:
        return max((a.level for a, _ in self.entries), default=0)

    def support(self) -> list[CoeffKey]:
        return list(self.entries)

    def sup_abs(self) -> AbsValue:
        """sup |b_{a,i}|."""
        best = AbsValue.zero()
        for b in self.entries.values():
            value = b.abs()
            if value > best:
                best = value
        return best

    def restricted(self, caps: Caps) -> WaveletCoeffs:
        """The sub-family on indices within ``caps``."""
        kept = {key: b for key, b in self.entries.items() if key[1].within(caps)}
        return WaveletCoeffs.build(self.field, self.r, kept, caps)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WaveletCoeffs):
            return NotImplemented
        if other.field != self.field or other.r != self.r or other.entries.keys() != self.entries.keys():
            return False
        return all(self.entries[k] == other.entries[k] for k in self.entries)

    __hash__ = None  # type: ignore[assignment]

    def to_json(self) -> dict[str, Any]:
        return {
            "field": self.field.model_dump(),
            "r": {"num": self.r.numerator, "den": self.r.denominator},
            "entries": [
                {"a": a.to_json(), "i": list(i), "b": b.to_string()} for (a, i), b in self.entries.items()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any], fd: FieldDescriptor | None = None) -> WaveletCoeffs:
        field = fd if fd is not None else FieldDescriptor.model_validate(data["field"])
        r = Fraction(int(data["r"]["num"]), int(data["r"]["den"]))
        entries: dict[tuple[CosetRep, MultiIndex], PadicScalar] = {}
        for entry in data["entries"]:
            key = (CosetRep.from_json(entry["a"]), MultiIndex(int(x) for x in entry["i"]))
            entries[key] = PadicScalar.parse(field, entry["b"])
        return cls.build(field, r, entries)

    def __repr__(self) -> str:
        return f"WaveletCoeffs({self.field.label()}, r={self.r}, terms={len(self.entries)})"
