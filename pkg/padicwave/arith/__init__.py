from __future__ import annotations

from .absvalue import AbsValue, max_abs
from .ring import FieldContext, field_context
from .scalar import PadicScalar, absolute, arith, divide, teichmuller

__all__ = [
    "AbsValue",
    "FieldContext",
    "PadicScalar",
    "absolute",
    "arith",
    "divide",
    "field_context",
    "max_abs",
    "teichmuller",
]
