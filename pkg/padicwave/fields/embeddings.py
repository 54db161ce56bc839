from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from padicwave.arith.ring import field_context
from padicwave.arith.scalar import PadicScalar
from padicwave.fields.descriptor import FieldDescriptor


@dataclass(frozen=True, slots=True)
class Embedding:
    """σ_(j,k): Frobenius^j on the unramified part and ϖ -> ζ_e^k ϖ."""

    frobenius_power: int
    root_twist: int

    @property
    def is_identity(self) -> bool:
        return self.frobenius_power == 0 and self.root_twist == 0

    def __call__(self, x: PadicScalar) -> PadicScalar:
        return apply_embedding(self, x)

    def label(self) -> str:
        return f"σ({self.frobenius_power},{self.root_twist})"


@lru_cache(maxsize=64)
def embeddings(fd: FieldDescriptor) -> tuple[Embedding, ...]:
    """All e·f embeddings F -> E in lexicographic (j, k) order; the identity comes first."""
    field_context(fd)
    return tuple(Embedding(j, k) for j in range(fd.f) for k in range(fd.e))


def apply_embedding(sigma: Embedding, x: PadicScalar) -> PadicScalar:
    if sigma.is_identity:
        return x
    return x.apply_embedding(sigma.frobenius_power, sigma.root_twist)


def embedded_images(x: PadicScalar) -> tuple[PadicScalar, ...]:
    """(σ(x))_σ in the canonical embedding order."""
    return tuple(apply_embedding(sigma, x) for sigma in embeddings(x.field))
