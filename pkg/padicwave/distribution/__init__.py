"""Moment oracles, the order-r growth criterion and the separating counterexample."""

from __future__ import annotations

from .builtin import DiracOracle, HaarOracle, integer_digit_rep
from .counterexample import (
    GrowthRow,
    LatticeOracle,
    counterexample_build,
    growth_table,
    tensor_check,
    uniform_check,
)
from .criterion import (
    AdditivityResult,
    AvvReport,
    DualNorm,
    MomentWitness,
    avv_check,
    dual_norm,
    extend_pair,
    pair,
    validate_additivity,
)
from .oracle import MomentOracle, ScaledOracle, TableOracle

__all__ = [
    "AdditivityResult",
    "AvvReport",
    "DiracOracle",
    "DualNorm",
    "GrowthRow",
    "HaarOracle",
    "LatticeOracle",
    "MomentOracle",
    "MomentWitness",
    "ScaledOracle",
    "TableOracle",
    "avv_check",
    "counterexample_build",
    "dual_norm",
    "extend_pair",
    "growth_table",
    "integer_digit_rep",
    "pair",
    "tensor_check",
    "uniform_check",
    "validate_additivity",
]
