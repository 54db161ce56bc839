from __future__ import annotations

import json
import threading
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from padicwave.arith.scalar import PadicScalar
from padicwave.core.exceptions import DegreeTooHighError, FieldMismatchError, InvalidParametersError
from padicwave.core.types import Rational
from padicwave.fields.cosets import CosetRep, residue_system
from padicwave.fields.descriptor import FieldDescriptor
from padicwave.locpoly.documents import CosetDocument
from padicwave.locpoly.profile import BoundaryProfile
from padicwave.multiindex.index import MultiIndex

type MomentKey = tuple[CosetRep, int, MultiIndex]


class MomentOracle(ABC):
    """A distribution given by its moments.

    ``moment(a, n, i)`` is ∫_{a + ϖ^n O_F} ((z - a) / ϖ^n)^i μ(z) for a level-n
    coset a, with a taken as its Teichmüller point. Indices are limited to
    total degree ``degree`` and to the caps of ``profile``.
    """

    def __init__(self, field: FieldDescriptor, degree: int, profile: BoundaryProfile | None = None) -> None:
        if degree < 0:
            raise InvalidParametersError(f"degree must be non-negative, got {degree}")
        self.field = field
        self.degree = degree
        self.profile = profile if profile is not None else BoundaryProfile.full(field.d)
        if self.profile.dim != field.d:
            raise InvalidParametersError(f"profile of dimension {self.profile.dim} over a field of degree {field.d}")

    @abstractmethod
    def _moment(self, a: CosetRep, n: int, i: MultiIndex) -> PadicScalar:
        """The moment for a checked level-n coset and admissible index."""

    def moment(self, a: CosetRep, n: int, i: MultiIndex | tuple[int, ...]) -> PadicScalar:
        idx = MultiIndex(i)
        self.check_index(idx)
        if n < 0:
            raise InvalidParametersError(f"level must be non-negative, got {n}")
        return self._moment(a.pad(n), n, idx)

    def support(self, n: int) -> list[CosetRep] | None:
        """Level-n cosets outside of which every moment vanishes; None when unknown."""
        return None

    def indices(self, n: int | None = None) -> list[MultiIndex]:
        """Y ∩ I_{<=n} for n <= degree (all admissible indices by default)."""
        top = self.degree if n is None else n
        if top > self.degree:
            raise DegreeTooHighError(f"degree {top} exceeds the oracle degree {self.degree}")
        return self.profile.indices(top)

    def check_index(self, i: MultiIndex) -> None:
        if i.dim != self.field.d:
            raise InvalidParametersError(f"index {tuple(i)} has dimension {i.dim}, expected {self.field.d}")
        if i.total > self.degree:
            raise DegreeTooHighError(f"|{tuple(i)}| = {i.total} exceeds the oracle degree {self.degree}")
        if not self.profile.in_y(i):
            raise DegreeTooHighError(f"index {tuple(i)} outside caps {self.profile.caps}")

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.field.label()}, degree={self.degree})"


class CachedOracle(MomentOracle):
    """Memoizes ``_compute`` behind a lock; each key is written once."""

    def __init__(self, field: FieldDescriptor, degree: int, profile: BoundaryProfile | None = None) -> None:
        super().__init__(field, degree, profile)
        self._memo: dict[MomentKey, PadicScalar] = {}
        self._lock = threading.Lock()

    @abstractmethod
    def _compute(self, a: CosetRep, n: int, i: MultiIndex) -> PadicScalar: ...

    def _moment(self, a: CosetRep, n: int, i: MultiIndex) -> PadicScalar:
        key = (a, n, i)
        with self._lock:
            cached = self._memo.get(key)
        if cached is not None:
            return cached
        value = self._compute(a, n, i)
        with self._lock:
            return self._memo.setdefault(key, value)


class ScaledOracle(MomentOracle):
    """λ·μ."""

    def __init__(self, factor: PadicScalar | Rational, inner: MomentOracle) -> None:
        super().__init__(inner.field, inner.degree, inner.profile)
        self.factor = factor if isinstance(factor, PadicScalar) else PadicScalar.from_fraction(inner.field, factor)
        if self.factor.field != inner.field:
            raise FieldMismatchError(f"factor over {self.factor.field.label()} for {inner.field.label()}")
        self.inner = inner

    def _moment(self, a: CosetRep, n: int, i: MultiIndex) -> PadicScalar:
        return self.factor * self.inner.moment(a, n, i)

    def support(self, n: int) -> list[CosetRep] | None:
        return self.inner.support(n)


class MomentEntry(BaseModel):
    """One row of a moment table file."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    a: CosetDocument = Field(..., description="Coset representative")
    n: int = Field(..., ge=0, description="Coset level")
    i: tuple[int, ...] = Field(..., description="Moment index")
    val: str = Field(..., description="Moment value in scalar notation")


class TableOracle(MomentOracle):
    """Moments read from an explicit table; missing entries are zero."""

    def __init__(
        self,
        field: FieldDescriptor,
        degree: int,
        table: dict[MomentKey, PadicScalar],
        profile: BoundaryProfile | None = None,
    ) -> None:
        super().__init__(field, degree, profile)
        self.table: dict[MomentKey, PadicScalar] = {}
        for (a, n, i), value in table.items():
            idx = MultiIndex(i)
            self.check_index(idx)
            if value.field != field:
                raise FieldMismatchError(f"moment over {value.field.label()} in a table over {field.label()}")
            self.table[(a.pad(n), n, idx)] = value

    @classmethod
    def from_oracle(cls, oracle: MomentOracle, depth: int) -> TableOracle:
        """Tabulate every moment of ``oracle`` on levels 0..depth."""
        table: dict[MomentKey, PadicScalar] = {}
        for n in range(depth + 1):
            cosets = oracle.support(n)
            for a in cosets if cosets is not None else residue_system(oracle.field, n):
                for i in oracle.indices():
                    value = oracle.moment(a, n, i)
                    if not value.is_zero:
                        table[(a, n, i)] = value
        return cls(oracle.field, oracle.degree, table, oracle.profile)

    def with_entry(self, a: CosetRep, n: int, i: MultiIndex | tuple[int, ...], value: PadicScalar) -> TableOracle:
        table = dict(self.table)
        table[(a.pad(n), n, MultiIndex(i))] = value
        return TableOracle(self.field, self.degree, table, self.profile)

    def _moment(self, a: CosetRep, n: int, i: MultiIndex) -> PadicScalar:
        return self.table.get((a, n, i), PadicScalar.exact_zero(self.field))

    def to_json(self) -> list[dict[str, Any]]:
        rows = sorted(self.table.items(), key=lambda kv: (kv[0][1], kv[0][0].digits, kv[0][2].sort_key()))
        return [
            MomentEntry(a=CosetDocument.of(a), n=n, i=tuple(i), val=value.to_string()).model_dump()
            for (a, n, i), value in rows
        ]

    @classmethod
    def from_json(
        cls, field: FieldDescriptor, degree: int, rows: list[dict[str, Any]], profile: BoundaryProfile | None = None
    ) -> TableOracle:
        table: dict[MomentKey, PadicScalar] = {}
        for row in rows:
            entry = MomentEntry.model_validate(row)
            table[(entry.a.to_rep(), entry.n, MultiIndex(entry.i))] = PadicScalar.parse(field, entry.val)
        return cls(field, degree, table, profile)

    @classmethod
    def load(cls, path: Path, field: FieldDescriptor, degree: int, profile: BoundaryProfile | None = None) -> TableOracle:
        return cls.from_json(field, degree, json.loads(path.read_text()), profile)
