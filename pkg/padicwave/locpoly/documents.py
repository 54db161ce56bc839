from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field

from padicwave.arith.scalar import PadicScalar
from padicwave.fields.cosets import CosetRep
from padicwave.fields.descriptor import FieldDescriptor
from padicwave.locpoly.function import CoeffTable, LocPolyFun
from padicwave.multiindex.index import MultiIndex


class CosetDocument(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    digits: list[int] = Field(..., description="Teichmüller digit indices, least significant first")
    level: int = Field(..., ge=0)

    def to_rep(self) -> CosetRep:
        return CosetRep.from_json(self.model_dump())

    @classmethod
    def of(cls, a: CosetRep) -> CosetDocument:
        return cls(digits=list(a.digits), level=a.level)


class CoefficientEntry(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    idx: list[int] = Field(..., description="Multi-index in embedding order")
    val: str = Field(..., description="Scalar in the p^(a/b) * [digits] format")


class CosetEntry(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    rep: CosetDocument
    coeffs: list[CoefficientEntry]


class LocPolyDocument(BaseModel):
    """JSON form of a locally polynomial function."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    field: FieldDescriptor
    level: int = Field(..., ge=0)
    caps: list[int | None] | None = Field(default=None, description="Per-embedding degree caps")
    cosets: list[CosetEntry] = Field(default_factory=list)

    @classmethod
    def from_function(cls, f: LocPolyFun) -> LocPolyDocument:
        entries = [
            CosetEntry(
                rep=CosetDocument.of(a),
                coeffs=[
                    CoefficientEntry(idx=list(m), val=f.table[a][m].to_string())
                    for m in sorted(f.table[a], key=MultiIndex.sort_key)
                ],
            )
            for a in f.support()
        ]
        return cls(field=f.field, level=f.level, caps=list(f.caps), cosets=entries)

    def to_function(self) -> LocPolyFun:
        table: dict[CosetRep, CoeffTable] = {}
        for entry in self.cosets:
            coeffs: CoeffTable = {
                MultiIndex(c.idx): PadicScalar.parse(self.field, c.val) for c in entry.coeffs
            }
            table[entry.rep.to_rep()] = coeffs
        caps = tuple(self.caps) if self.caps is not None else None
        return LocPolyFun.build(self.field, self.level, table, caps)
