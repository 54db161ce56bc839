"""The e_{a,i,r} wavelet basis: coefficients, analysis and synthesis."""

from __future__ import annotations

from .basis import (
    ApproximationStep,
    analyze,
    approximant,
    approximation_series,
    basis_fn,
    coefficient_ratio,
    subfamily_indices,
    synthesize,
)
from .coeffs import WaveletCoeffs

__all__ = [
    "ApproximationStep",
    "WaveletCoeffs",
    "analyze",
    "approximant",
    "approximation_series",
    "basis_fn",
    "coefficient_ratio",
    "subfamily_indices",
    "synthesize",
]
