"""Multi-indices, index sets and monomials over the embedding set."""

from __future__ import annotations

from .index import MultiIndex, index_set, mi_binom, monomial_eval, monomial_from_images

__all__ = [
    "MultiIndex",
    "index_set",
    "mi_binom",
    "monomial_eval",
    "monomial_from_images",
]
