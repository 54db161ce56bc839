from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import ClassVar

from padicwave.arith.absvalue import AbsValue
from padicwave.arith.ring import FieldContext, field_context
from padicwave.core.enums import ArithOp
from padicwave.core.exceptions import (
    DivisionByZeroToPrecisionError,
    FieldMismatchError,
    InvalidParametersError,
    PrecisionExhaustedError,
)
from padicwave.core.types import Block, Rational
from padicwave.fields.descriptor import FieldDescriptor

_SCALAR_PATTERN = re.compile(r"^\s*p\^\((-?\d+)(?:/(\d+))?\)\s*\*\s*\[([0-9,\s]*)\]\s*$")


@dataclass(frozen=True, slots=True, eq=False)
class PadicScalar:
    """An element ϖ^valuation · unit of F, the unit known modulo ϖ^precision.

    Three shapes exist:

    - nonzero: ``unit`` is a unit block and ``precision >= 1``;
    - zero to precision: ``unit is None`` and ``valuation`` is the absolute
      bound (the value is 0 modulo ϖ^valuation);
    - exact zero: ``unit is None`` and ``valuation is None``.

    Equality is semantic: two scalars are equal when their difference is
    zero to the available precision. Scalars are therefore unhashable.
    """

    field: FieldDescriptor
    valuation: int | None
    unit: Block | None
    precision: int

    __hash__: ClassVar[None] = None  # type: ignore[assignment]

    # construction

    @property
    def ctx(self) -> FieldContext:
        return field_context(self.field)

    @classmethod
    def exact_zero(cls, field: FieldDescriptor) -> PadicScalar:
        return cls(field, None, None, 0)

    @classmethod
    def zero_to(cls, field: FieldDescriptor, bound: int) -> PadicScalar:
        return cls(field, bound, None, 0)

    @classmethod
    def from_block(cls, field: FieldDescriptor, k: int, block: Block, absolute_precision: int) -> PadicScalar:
        """Normalize ϖ^k · block, the block known modulo ϖ^(absolute_precision - k)."""
        ctx = field_context(field)
        n = absolute_precision - k
        if n <= 0:
            return cls.zero_to(field, absolute_precision)
        block = ctx.block_reduce(block, n)
        v = ctx.block_valuation(block, n)
        if v is None:
            return cls.zero_to(field, absolute_precision)
        if v:
            block = ctx.block_shift_down(block, v)
        rel = n - v
        if rel > ctx.precision:
            rel = ctx.precision
            block = ctx.block_reduce(block, rel)
        return cls(field, k + v, block, rel)

    @classmethod
    def from_int(cls, field: FieldDescriptor, n: int) -> PadicScalar:
        if n == 0:
            return cls.exact_zero(field)
        ctx = field_context(field)
        v = 0
        while n % ctx.p == 0:
            n //= ctx.p
            v += 1
        k = ctx.e * v
        return cls.from_block(field, k, ctx.block_const(n), k + ctx.precision)

    @classmethod
    def from_fraction(cls, field: FieldDescriptor, value: Rational) -> PadicScalar:
        fr = Fraction(value)
        num = cls.from_int(field, fr.numerator)
        if fr.denominator == 1:
            return num
        return num / cls.from_int(field, fr.denominator)

    @classmethod
    def one(cls, field: FieldDescriptor) -> PadicScalar:
        return cls.from_int(field, 1)

    @classmethod
    def uniformizer(cls, field: FieldDescriptor) -> PadicScalar:
        ctx = field_context(field)
        return cls(field, 1, ctx.block_reduce(ctx.block_const(1), ctx.precision), ctx.precision)

    @classmethod
    def teichmuller(cls, field: FieldDescriptor, t: int) -> PadicScalar:
        """Teichmüller lift of the residue class with index ``t`` in [0, q)."""
        ctx = field_context(field)
        if not 0 <= t < ctx.q:
            raise InvalidParametersError(f"residue index {t} outside [0, {ctx.q})")
        if t == 0:
            return cls.exact_zero(field)
        return cls.from_block(field, 0, ctx.block_from_zq(ctx.teichmuller_zq(t)), ctx.precision)

    @classmethod
    def residue_lift(cls, field: FieldDescriptor, t: int) -> PadicScalar:
        """Integer-digit lift Σ c_j x^j (0 <= c_j < p) of the residue class with index ``t``."""
        ctx = field_context(field)
        if t == 0:
            return cls.exact_zero(field)
        return cls.from_block(field, 0, ctx.block_from_zq(ctx.residue_lift(t)), ctx.precision)

    @classmethod
    def from_digits(cls, field: FieldDescriptor, lead: int, digits: list[int] | tuple[int, ...]) -> PadicScalar:
        """Σ [t_m] ϖ^(lead + m) known to absolute precision lead + len(digits)."""
        if not digits:
            return cls.zero_to(field, lead)
        return cls.from_block(field, lead, _teichmuller_block(field, digits), lead + len(digits))

    @classmethod
    def from_expansion(cls, field: FieldDescriptor, digits: list[int] | tuple[int, ...]) -> PadicScalar:
        """The finite sum Σ [t_m] ϖ^m at full working precision."""
        if not any(digits):
            return cls.exact_zero(field)
        return cls.from_block(field, 0, _teichmuller_block(field, digits), len(digits) + field_context(field).precision)

    # inspection

    @property
    def is_zero(self) -> bool:
        return self.unit is None

    @property
    def is_exact_zero(self) -> bool:
        return self.unit is None and self.valuation is None

    @property
    def absolute_precision(self) -> int | None:
        if self.valuation is None:
            return None
        return self.valuation + self.precision

    @property
    def val_exponent(self) -> Fraction | None:
        """Exponent w with |x| = p^{-w}; None for zero of either kind."""
        if self.unit is None or self.valuation is None:
            return None
        return Fraction(self.valuation * self.field.f)

    def abs(self) -> AbsValue:
        if self.valuation is None:
            return AbsValue.zero()
        if self.unit is None:
            return AbsValue(Fraction(self.valuation * self.field.f), exact=False)
        return AbsValue(Fraction(self.valuation * self.field.f))

    def residue(self) -> int:
        """Index of the residue class modulo ϖ of an integral scalar."""
        if self.valuation is None:
            return 0
        if self.unit is None:
            if self.valuation >= 1:
                return 0
            raise PrecisionExhaustedError("residue of a scalar known only modulo ϖ^0")
        if self.valuation < 0:
            raise InvalidParametersError(f"scalar of valuation {self.valuation} is not integral")
        if self.valuation > 0:
            return 0
        return self.ctx.block_residue(self.unit)

    def teichmuller_digits(self, count: int) -> list[int]:
        """The first ``count`` Teichmüller digits of an integral scalar."""
        digits: list[int] = []
        y = self
        for _ in range(count):
            t = y.residue()
            digits.append(t)
            if t:
                y = y - PadicScalar.teichmuller(self.field, t)
            y = y.shift(-1)
        return digits

    # arithmetic

    def _coerce(self, other: PadicScalar | Rational) -> PadicScalar:
        if isinstance(other, PadicScalar):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field.label()} vs {other.field.label()}")
            return other
        if isinstance(other, int | Fraction):
            return PadicScalar.from_fraction(self.field, other)
        raise TypeError(f"cannot combine PadicScalar with {type(other).__name__}")

    def shift(self, n: int) -> PadicScalar:
        """Multiply by ϖ^n."""
        if self.valuation is None or n == 0:
            return self
        return PadicScalar(self.field, self.valuation + n, self.unit, self.precision)

    def truncate(self, absolute_precision: int) -> PadicScalar:
        if self.valuation is None:
            return self
        current = self.valuation + self.precision if self.unit is not None else self.valuation
        if absolute_precision >= current:
            return self
        if self.unit is None:
            return PadicScalar.zero_to(self.field, absolute_precision)
        return PadicScalar.from_block(self.field, self.valuation, self.unit, absolute_precision)

    def __neg__(self) -> PadicScalar:
        if self.unit is None or self.valuation is None:
            return self
        k = self.valuation
        return PadicScalar.from_block(self.field, k, self.ctx.block_neg(self.unit), k + self.precision)

    def __add__(self, other: PadicScalar | Rational) -> PadicScalar:
        y = self._coerce(other)
        if self.is_exact_zero:
            return y
        if y.is_exact_zero:
            return self
        ctx = self.ctx
        ax = self._abs_bound()
        ay = y._abs_bound()
        bound = min(ax, ay)
        kx = self.valuation if self.unit is not None else ax
        ky = y.valuation if y.unit is not None else ay
        assert kx is not None and ky is not None
        k0 = min(kx, ky)
        if k0 >= bound:
            return PadicScalar.zero_to(self.field, bound)
        bx = ctx.block_shift_up(self.unit, kx - k0) if self.unit is not None else ctx.block_zero()
        by = ctx.block_shift_up(y.unit, ky - k0) if y.unit is not None else ctx.block_zero()
        return PadicScalar.from_block(self.field, k0, ctx.block_add(bx, by), bound)

    def _abs_bound(self) -> int:
        assert self.valuation is not None
        if self.unit is None:
            return self.valuation
        return self.valuation + self.precision

    def __radd__(self, other: Rational) -> PadicScalar:
        return self + other

    def __sub__(self, other: PadicScalar | Rational) -> PadicScalar:
        return self + (-self._coerce(other))

    def __rsub__(self, other: Rational) -> PadicScalar:
        return self._coerce(other) - self

    def __mul__(self, other: PadicScalar | Rational) -> PadicScalar:
        y = self._coerce(other)
        if self.is_exact_zero or y.is_exact_zero:
            return PadicScalar.exact_zero(self.field)
        assert self.valuation is not None and y.valuation is not None
        k = self.valuation + y.valuation
        if self.unit is None or y.unit is None:
            return PadicScalar.zero_to(self.field, k)
        ctx = self.ctx
        n = min(self.precision, y.precision)
        return PadicScalar.from_block(self.field, k, ctx.block_mul(self.unit, y.unit), k + n)

    def __rmul__(self, other: Rational) -> PadicScalar:
        return self * other

    def __truediv__(self, other: PadicScalar | Rational) -> PadicScalar:
        y = self._coerce(other)
        if y.unit is None:
            raise DivisionByZeroToPrecisionError(f"divisor {y} is zero to precision")
        assert y.valuation is not None
        if self.is_exact_zero:
            return self
        assert self.valuation is not None
        k = self.valuation - y.valuation
        if self.unit is None:
            return PadicScalar.zero_to(self.field, k)
        ctx = self.ctx
        n = min(self.precision, y.precision)
        inverse = ctx.block_unit_inverse(y.unit, n)
        return PadicScalar.from_block(self.field, k, ctx.block_mul(self.unit, inverse), k + n)

    def __rtruediv__(self, other: Rational) -> PadicScalar:
        return self._coerce(other) / self

    def __pow__(self, n: int) -> PadicScalar:
        if n < 0:
            return PadicScalar.one(self.field) / (self**-n)
        result = PadicScalar.one(self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PadicScalar | int | Fraction):
            return NotImplemented
        if isinstance(other, PadicScalar) and other.field != self.field:
            return False
        return (self - other).is_zero

    def apply_embedding(self, j: int, k: int) -> PadicScalar:
        """σ_(j,k)(x): Frobenius^j on Teichmüller coefficients and ϖ -> ζ^k ϖ."""
        if self.unit is None:
            return self
        assert self.valuation is not None
        ctx = self.ctx
        block = ctx.block_embed(self.unit, j, k)
        twist = ctx.zeta_power(k * self.valuation)
        if twist != 1:
            block = ctx.block_mul(block, ctx.block_const(twist))
        return PadicScalar.from_block(self.field, self.valuation, block, self.valuation + self.precision)

    # serialization

    def to_string(self) -> str:
        if self.valuation is None:
            return "0"
        lead = Fraction(self.valuation * self.field.f)
        if self.unit is None:
            return f"p^({lead.numerator}/{lead.denominator}) * []"
        digits = PadicScalar(self.field, 0, self.unit, self.precision).teichmuller_digits(self.precision)
        body = ",".join(str(t) for t in digits)
        return f"p^({lead.numerator}/{lead.denominator}) * [{body}]"

    @classmethod
    def parse(cls, field: FieldDescriptor, text: str) -> PadicScalar:
        if text.strip() == "0":
            return cls.exact_zero(field)
        match = _SCALAR_PATTERN.match(text)
        if match is None:
            raise InvalidParametersError(f"cannot parse scalar {text!r}")
        num, den, body = match.groups()
        lead = Fraction(int(num), int(den) if den else 1)
        k = lead / field.f
        if k.denominator != 1:
            raise InvalidParametersError(f"lead valuation {lead} is not in the value group")
        digits = [int(t) for t in body.split(",") if t.strip()]
        if any(not 0 <= t < field.q for t in digits):
            raise InvalidParametersError(f"digit outside [0, {field.q}) in {text!r}")
        return cls.from_digits(field, int(k), digits)

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"PadicScalar({self.to_string()}, {self.field.label()})"


def arith(op: ArithOp, x: PadicScalar, y: PadicScalar) -> PadicScalar:
    if x.field != y.field:
        raise FieldMismatchError(f"{x.field.label()} vs {y.field.label()}")
    match op:
        case ArithOp.ADD:
            return x + y
        case ArithOp.SUB:
            return x - y
        case ArithOp.MUL:
            return x * y


def divide(x: PadicScalar, y: PadicScalar) -> PadicScalar:
    if x.field != y.field:
        raise FieldMismatchError(f"{x.field.label()} vs {y.field.label()}")
    return x / y


def absolute(x: PadicScalar) -> AbsValue:
    return x.abs()


def teichmuller(field: FieldDescriptor, t: int) -> PadicScalar:
    return PadicScalar.teichmuller(field, t)


def _teichmuller_block(field: FieldDescriptor, digits: list[int] | tuple[int, ...]) -> Block:
    ctx = field_context(field)
    coeffs = [ctx.zq_zero() for _ in range(ctx.e)]
    for m, t in enumerate(digits):
        if t == 0:
            continue
        whole, rest = divmod(m, ctx.e)
        coeffs[rest] = ctx.zq_add(coeffs[rest], ctx.zq_scale(ctx.teichmuller_zq(t), ctx.ppow(whole)))
    return tuple(coeffs)
