"""Finite differences along embeddings and top-coefficient recovery for global polynomials."""

from __future__ import annotations

from .operators import delta_multi, delta_tau, recover_all, recover_leading
from .poly import GlobalPoly
from .probe import RATIO_NAMES, ProbeReport, ProbeRow, inequality_probe

__all__ = [
    "RATIO_NAMES",
    "GlobalPoly",
    "ProbeReport",
    "ProbeRow",
    "delta_multi",
    "delta_tau",
    "inequality_probe",
    "recover_all",
    "recover_leading",
]
