from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from typing import Any

from padicwave.arith.absvalue import AbsValue
from padicwave.arith.scalar import PadicScalar
from padicwave.core.exceptions import FieldMismatchError, InvalidParametersError
from padicwave.core.types import Rational
from padicwave.fields.cosets import CosetRep
from padicwave.fields.descriptor import FieldDescriptor
from padicwave.fields.embeddings import embedded_images
from padicwave.locpoly.function import LocPolyFun
from padicwave.multiindex.index import MultiIndex, monomial_from_images

type PolyTable = dict[MultiIndex, PadicScalar]


@dataclass(frozen=True, slots=True, eq=False)
class GlobalPoly:
    """P(z) = Σ_m c_m z^m on all of O_F, with z^m = Π_σ σ(z)^{m_σ}."""

    field: FieldDescriptor
    coeffs: Mapping[MultiIndex, PadicScalar]

    @classmethod
    def build(
        cls, fd: FieldDescriptor, coeffs: Mapping[MultiIndex | tuple[int, ...], PadicScalar | Rational]
    ) -> GlobalPoly:
        clean: PolyTable = {}
        for raw, value in coeffs.items():
            m = MultiIndex(raw)
            if m.dim != fd.d:
                raise InvalidParametersError(f"index {tuple(m)} has dimension {m.dim}, expected {fd.d}")
            c = value if isinstance(value, PadicScalar) else PadicScalar.from_fraction(fd, value)
            if c.field != fd:
                raise FieldMismatchError(f"coefficient over {c.field.label()} for a polynomial over {fd.label()}")
            prev = clean.get(m)
            clean[m] = c if prev is None else prev + c
        return cls(fd, {m: c for m, c in sorted(clean.items(), key=lambda kv: kv[0].sort_key()) if not c.is_zero})

    @classmethod
    def from_divided_powers(
        cls, fd: FieldDescriptor, coeffs: Mapping[MultiIndex | tuple[int, ...], PadicScalar | Rational]
    ) -> GlobalPoly:
        """P(z) = Σ_i a_i z^i / i!."""
        table: dict[MultiIndex, PadicScalar] = {}
        for raw, value in coeffs.items():
            m = MultiIndex(raw)
            a = value if isinstance(value, PadicScalar) else PadicScalar.from_fraction(fd, value)
            table[m] = a / m.factorial
        return cls.build(fd, table)

    @classmethod
    def from_locpoly(cls, f: LocPolyFun) -> GlobalPoly:
        if f.level != 0:
            raise InvalidParametersError(f"a global polynomial has level 0, got {f.level}")
        return cls.build(f.field, f.coefficients(CosetRep(())))

    def divided_powers(self) -> PolyTable:
        """The a_i with P = Σ a_i z^i / i!."""
        return {m: c * m.factorial for m, c in self.coeffs.items()}

    @property
    def dim(self) -> int:
        return self.field.d

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """N_2, the largest total degree present; 0 for the zero polynomial."""
        return max((m.total for m in self.coeffs), default=0)

    @property
    def low_degree(self) -> int:
        """N_1, the smallest total degree present."""
        return min((m.total for m in self.coeffs), default=0)

    def evaluate(self, z: PadicScalar) -> PadicScalar:
        images = embedded_images(z)
        total = PadicScalar.exact_zero(self.field)
        for m, c in self.coeffs.items():
            total = total + c * monomial_from_images(images, m)
        return total

    def __call__(self, z: PadicScalar) -> PadicScalar:
        return self.evaluate(z)

    def to_locpoly(self) -> LocPolyFun:
        return LocPolyFun.build(self.field, 0, {CosetRep(()): dict(self.coeffs)} if self.coeffs else {})

    def gauss_norm(self, h: int = 0) -> AbsValue:
        """max_m |c_m| q^{-h|m|}."""
        best = AbsValue.zero()
        for m, c in self.coeffs.items():
            value = c.abs().scaled(-self.field.f * h * m.total)
            if value > best:
                best = value
        return best

    def _check_field(self, other: GlobalPoly) -> None:
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field.label()} vs {other.field.label()}")

    def __add__(self, other: GlobalPoly) -> GlobalPoly:
        self._check_field(other)
        merged: dict[MultiIndex, PadicScalar] = dict(self.coeffs)
        for m, c in other.coeffs.items():
            merged[m] = c if m not in merged else merged[m] + c
        return GlobalPoly.build(self.field, merged)

    def __neg__(self) -> GlobalPoly:
        return self.scale(-1)

    def __sub__(self, other: GlobalPoly) -> GlobalPoly:
        return self + (-other)

    def scale(self, value: PadicScalar | Rational) -> GlobalPoly:
        return GlobalPoly.build(self.field, {m: c * value for m, c in self.coeffs.items()})

    def __rmul__(self, value: PadicScalar | Rational) -> GlobalPoly:
        return self.scale(value)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GlobalPoly):
            return NotImplemented
        return other.field == self.field and (self - other).is_zero

    __hash__ = None  # type: ignore[assignment]

    def to_json(self) -> dict[str, Any]:
        return {
            "field": self.field.model_dump(),
            "coeffs": [{"idx": list(m), "val": c.to_string()} for m, c in self.coeffs.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> GlobalPoly:
        fd = FieldDescriptor.model_validate(data["field"])
        return cls.build(fd, {tuple(e["idx"]): PadicScalar.parse(fd, e["val"]) for e in data["coeffs"]})

    def __repr__(self) -> str:
        return f"GlobalPoly({self.field.label()}, terms={len(self.coeffs)}, degree={self.degree})"
