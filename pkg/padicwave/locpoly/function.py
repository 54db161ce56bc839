from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from dataclasses import field as dataclass_field
from fractions import Fraction
from math import floor

from padicwave.arith.absvalue import AbsValue
from padicwave.arith.scalar import PadicScalar
from padicwave.core.enums import Relation
from padicwave.core.exceptions import DegreeTooHighError, FieldMismatchError, InvalidParametersError
from padicwave.core.types import Caps, Rational
from padicwave.fields.cosets import CosetRep, coset_of, descendants
from padicwave.fields.descriptor import FieldDescriptor
from padicwave.fields.embeddings import embedded_images
from padicwave.multiindex.index import MultiIndex, index_set, mi_binom, monomial_from_images

type CoeffTable = dict[MultiIndex, PadicScalar]


def integer_part(r: Rational) -> int:
    """[r], the integer part of a non-negative rational."""
    return floor(Fraction(r))


def recentre(table: Mapping[MultiIndex, PadicScalar], delta: PadicScalar) -> CoeffTable:
    """Re-expand Σ c_i (z - a)^i around a + delta.

    c'_m = Σ_{i >= m} c_i · binom(i, m) · delta^(i - m).
    """
    if delta.is_exact_zero:
        return dict(table)
    images = embedded_images(delta)
    powers: dict[MultiIndex, PadicScalar] = {}
    out: CoeffTable = {}
    for i, c in table.items():
        for m in i.below():
            gap = i.minus(m)
            mono = powers.get(gap)
            if mono is None:
                mono = monomial_from_images(images, gap)
                powers[gap] = mono
            if mono.is_zero:
                continue
            term = c * mono * mi_binom(i, m)
            prev = out.get(m)
            out[m] = term if prev is None else prev + term
    return _drop_zeros(out)


def _drop_zeros(table: Mapping[MultiIndex, PadicScalar]) -> CoeffTable:
    return {m: c for m, c in table.items() if not c.is_zero}


def _merge(a: Mapping[MultiIndex, PadicScalar], b: Mapping[MultiIndex, PadicScalar], sign: int = 1) -> CoeffTable:
    out: CoeffTable = dict(a)
    for m, c in b.items():
        term = c if sign == 1 else -c
        prev = out.get(m)
        out[m] = term if prev is None else prev + term
    return _drop_zeros(out)


def _combine_caps(a: Caps, b: Caps, op: str) -> Caps:
    if op == "max":
        return tuple(None if x is None or y is None else max(x, y) for x, y in zip(a, b, strict=True))
    return tuple(None if x is None or y is None else x + y for x, y in zip(a, b, strict=True))


@dataclass(frozen=True, slots=True, eq=False)
class LocPolyFun:
    """A function that is polynomial in the embeddings on every coset of level ``level``.

    ``table[a][m]`` is the coefficient a_m(a) in f(z) = Σ_m a_m(a)(z - a)^m
    for z in a + ϖ^level O_F. Absent cosets and indices are zero.
    Instances are built through :meth:`build`, which normalizes the table.
    """

    field: FieldDescriptor
    level: int
    table: Mapping[CosetRep, CoeffTable]
    caps: Caps
    max_degree: int | None = None
    _cache: dict[str, object] = dataclass_field(default_factory=dict, repr=False)

    # construction

    @classmethod
    def build(
        cls,
        fd: FieldDescriptor,
        level: int,
        table: Mapping[CosetRep, Mapping[MultiIndex, PadicScalar]],
        caps: Caps | None = None,
        max_degree: int | None = None,
    ) -> LocPolyFun:
        if level < 0:
            raise InvalidParametersError(f"level must be non-negative, got {level}")
        dim = fd.d
        full_caps: Caps = caps if caps is not None else (None,) * dim
        if len(full_caps) != dim:
            raise InvalidParametersError(f"{len(full_caps)} caps for {dim} embeddings")
        clean: dict[CosetRep, CoeffTable] = {}
        for a, coeffs in table.items():
            if a.level != level:
                raise InvalidParametersError(f"coset {a} has level {a.level}, expected {level}")
            kept: CoeffTable = {}
            for m, c in coeffs.items():
                if c.field != fd:
                    raise FieldMismatchError(f"coefficient over {c.field.label()} in a function over {fd.label()}")
                if c.is_zero:
                    continue
                idx = m if isinstance(m, MultiIndex) else MultiIndex(m)
                if idx.dim != dim:
                    raise InvalidParametersError(f"index {tuple(idx)} has dimension {idx.dim}, expected {dim}")
                if not idx.within(full_caps):
                    raise DegreeTooHighError(f"index {tuple(idx)} exceeds caps {full_caps}")
                if max_degree is not None and idx.total > max_degree:
                    raise DegreeTooHighError(f"index {tuple(idx)} exceeds total degree {max_degree}")
                kept[idx] = c
            if kept:
                clean[a] = kept
        return cls(fd, level, clean, full_caps, max_degree)

    @classmethod
    def zero(cls, fd: FieldDescriptor, level: int = 0) -> LocPolyFun:
        return cls.build(fd, level, {})

    @classmethod
    def constant(cls, fd: FieldDescriptor, value: PadicScalar | Rational, level: int = 0) -> LocPolyFun:
        c = value if isinstance(value, PadicScalar) else PadicScalar.from_fraction(fd, value)
        zero = MultiIndex.zero(fd.d)
        table = {CosetRep(tuple(digits)): {zero: c} for digits in _all_digits(fd, level)}
        return cls.build(fd, level, table)

    @classmethod
    def monomial(cls, fd: FieldDescriptor, m: MultiIndex | tuple[int, ...], coeff: PadicScalar | Rational = 1) -> LocPolyFun:
        """The global function coeff · z^m at level 0."""
        c = coeff if isinstance(coeff, PadicScalar) else PadicScalar.from_fraction(fd, coeff)
        return cls.build(fd, 0, {CosetRep(()): {MultiIndex(m): c}})

    @classmethod
    def indicator(cls, fd: FieldDescriptor, a: CosetRep, value: PadicScalar | Rational = 1) -> LocPolyFun:
        """value · 1_{a + ϖ^level(a) O_F}."""
        c = value if isinstance(value, PadicScalar) else PadicScalar.from_fraction(fd, value)
        return cls.build(fd, a.level, {a: {MultiIndex.zero(fd.d): c}})

    # inspection

    @property
    def dim(self) -> int:
        return self.field.d

    @property
    def degree(self) -> int:
        """Largest total degree carrying a nonzero coefficient; 0 for the zero function."""
        return max((m.total for coeffs in self.table.values() for m in coeffs), default=0)

    @property
    def is_zero(self) -> bool:
        return not self.table

    def support(self) -> list[CosetRep]:
        return sorted(self.table)

    def coefficients(self, a: CosetRep) -> CoeffTable:
        return dict(self.table.get(a, {}))

    def _with_table(self, level: int, table: Mapping[CosetRep, Mapping[MultiIndex, PadicScalar]]) -> LocPolyFun:
        return LocPolyFun.build(self.field, level, table, self.caps, self.max_degree)

    # the operations

    def evaluate(self, z: PadicScalar) -> PadicScalar:
        """f(z) for an integral point z."""
        if z.field != self.field:
            raise FieldMismatchError(f"point over {z.field.label()} for a function over {self.field.label()}")
        a = coset_of(z, self.level)
        coeffs = self.table.get(a)
        if not coeffs:
            return PadicScalar.exact_zero(self.field)
        delta = z - a.point(self.field)
        images = embedded_images(delta)
        total = PadicScalar.exact_zero(self.field)
        for m, c in coeffs.items():
            total = total + c * monomial_from_images(images, m)
        return total

    def __call__(self, z: PadicScalar) -> PadicScalar:
        return self.evaluate(z)

    def refine(self) -> LocPolyFun:
        """The same function written at level + 1."""
        h = self.level
        q = self.field.q
        uniformizer_power = PadicScalar.uniformizer(self.field) ** h
        shifts = [PadicScalar.teichmuller(self.field, t) * uniformizer_power for t in range(q)]
        table: dict[CosetRep, CoeffTable] = {}
        for a, coeffs in self.table.items():
            for t in range(q):
                child = recentre(coeffs, shifts[t])
                if child:
                    table[a.child(t)] = child
        return self._with_table(h + 1, table)

    def refine_to(self, level: int) -> LocPolyFun:
        if level < self.level:
            raise InvalidParametersError(f"cannot refine level {self.level} down to {level}")
        f = self
        while f.level < level:
            f = f.refine()
        return f

    def derived(self, i: MultiIndex | tuple[int, ...]) -> LocPolyFun:
        """The table of D_i f / i!: coefficients a_m(a) · binom(m, i) at index m - i."""
        idx = MultiIndex(i)
        key = f"derived:{tuple(idx)}"
        cached = self._cache.get(key)
        if isinstance(cached, LocPolyFun):
            return cached
        table: dict[CosetRep, CoeffTable] = {}
        for a, coeffs in self.table.items():
            out: CoeffTable = {}
            for m, c in coeffs.items():
                if idx.leq(m):
                    out[m.minus(idx)] = c * mi_binom(m, idx)
            if out:
                table[a] = out
        result = self._with_table(self.level, table)
        self._cache[key] = result
        return result

    def remainder(self, r: Rational, x: PadicScalar, y: PadicScalar) -> PadicScalar:
        """ε_{f,[r]}(x, y) = f(x + y) - Σ_{|i| <= [r]} (D_i f(x) / i!) y^i."""
        big_r = integer_part(r)
        images = embedded_images(y)
        taylor = PadicScalar.exact_zero(self.field)
        for i in index_set(Relation.LE, big_r, self.dim):
            value = self.derived(i).evaluate(x)
            if value.is_zero:
                continue
            taylor = taylor + value * monomial_from_images(images, i)
        return self.evaluate(x + y) - taylor

    def product(self, other: LocPolyFun) -> LocPolyFun:
        """Pointwise product, computed coset-wise at the common level."""
        self._check_field(other)
        h = max(self.level, other.level)
        f = self.refine_to(h)
        g = other.refine_to(h)
        table: dict[CosetRep, CoeffTable] = {}
        for a in f.table.keys() & g.table.keys():
            out: CoeffTable = {}
            for m, c in f.table[a].items():
                for n, b in g.table[a].items():
                    key = m.plus(n)
                    term = c * b
                    prev = out.get(key)
                    out[key] = term if prev is None else prev + term
            out = _drop_zeros(out)
            if out:
                table[a] = out
        max_degree = None if self.max_degree is None or other.max_degree is None else self.max_degree + other.max_degree
        return LocPolyFun.build(self.field, h, table, _combine_caps(self.caps, other.caps, "sum"), max_degree)

    def fh_norm(self) -> AbsValue:
        """‖f‖_{F_h} = sup over cosets and indices of |a_m(a)| q^{-h|m|}."""
        best = AbsValue.zero()
        f_h = self.field.f * self.level
        for coeffs in self.table.values():
            for m, c in coeffs.items():
                exp = c.val_exponent
                if exp is None:
                    continue
                candidate = AbsValue(exp + f_h * m.total)
                if candidate > best:
                    best = candidate
        return best

    # linear structure

    def _check_field(self, other: LocPolyFun) -> None:
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field.label()} vs {other.field.label()}")

    def add(self, other: LocPolyFun, sign: int = 1) -> LocPolyFun:
        self._check_field(other)
        h = max(self.level, other.level)
        f = self.refine_to(h)
        g = other.refine_to(h)
        table: dict[CosetRep, CoeffTable] = {a: dict(c) for a, c in f.table.items()}
        for a, coeffs in g.table.items():
            table[a] = _merge(table.get(a, {}), coeffs, sign)
        max_degree = None if self.max_degree is None or other.max_degree is None else max(self.max_degree, other.max_degree)
        return LocPolyFun.build(self.field, h, table, _combine_caps(self.caps, other.caps, "max"), max_degree)

    def scale(self, value: PadicScalar | Rational) -> LocPolyFun:
        c = value if isinstance(value, PadicScalar) else PadicScalar.from_fraction(self.field, value)
        table = {a: {m: x * c for m, x in coeffs.items()} for a, coeffs in self.table.items()}
        return self._with_table(self.level, table)

    def __add__(self, other: LocPolyFun) -> LocPolyFun:
        return self.add(other)

    def __sub__(self, other: LocPolyFun) -> LocPolyFun:
        return self.add(other, sign=-1)

    def __neg__(self) -> LocPolyFun:
        return self.scale(-1)

    def __mul__(self, other: LocPolyFun | PadicScalar | Rational) -> LocPolyFun:
        if isinstance(other, LocPolyFun):
            return self.product(other)
        return self.scale(other)

    def __rmul__(self, other: PadicScalar | Rational) -> LocPolyFun:
        return self.scale(other)

    def __eq__(self, other: object) -> bool:
        """Equality as functions on O_F."""
        if not isinstance(other, LocPolyFun):
            return NotImplemented
        if other.field != self.field:
            return False
        return (self - other).is_zero

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"LocPolyFun({self.field.label()}, level={self.level}, cosets={len(self.table)}, degree={self.degree})"


def _all_digits(fd: FieldDescriptor, level: int) -> list[tuple[int, ...]]:
    return [a.digits for a in descendants(fd, CosetRep(()), level)]
