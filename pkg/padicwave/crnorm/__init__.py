"""Certified sup norms and C^r norms of locally polynomial functions."""

from __future__ import annotations

from .domain import CrNormReport, RatioInterval, SupInterval, interval_max
from .norm import (
    cr_norm,
    derivative_constant,
    norm_downgrade,
    remainder_profile,
    subspace_member,
)
from .sup import sup_abs

__all__ = [
    "CrNormReport",
    "RatioInterval",
    "SupInterval",
    "cr_norm",
    "derivative_constant",
    "interval_max",
    "norm_downgrade",
    "remainder_profile",
    "subspace_member",
    "sup_abs",
]
