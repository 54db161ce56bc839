from __future__ import annotations

from fractions import Fraction

from pydantic import BaseModel, ConfigDict, Field, model_validator

from padicwave.core.enums import Relation
from padicwave.core.types import Caps, Rational
from padicwave.multiindex.index import MultiIndex, index_set


class BoundaryProfile(BaseModel):
    """The analytic directions J and the degree caps d_σ for σ outside J.

    ``caps[σ] is None`` means σ ∈ J; an integer entry is d_σ.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    caps: tuple[int | None, ...] = Field(..., description="Per-embedding cap d_σ, null for σ in J")

    @model_validator(mode="after")
    def validate_caps(self) -> BoundaryProfile:
        if any(c is not None and c < 0 for c in self.caps):
            raise ValueError(f"caps must be non-negative, got {self.caps}")
        return self

    @classmethod
    def full(cls, dim: int) -> BoundaryProfile:
        """J = S: no caps."""
        return cls(caps=(None,) * dim)

    @property
    def dim(self) -> int:
        return len(self.caps)

    @property
    def analytic(self) -> frozenset[int]:
        return frozenset(s for s, c in enumerate(self.caps) if c is None)

    def enlarged(self, r: Rational) -> frozenset[int]:
        """J' = J ∪ {σ : d_σ + 1 > r}."""
        rr = Fraction(r)
        return self.analytic | {s for s, c in enumerate(self.caps) if c is not None and c + 1 > rr}

    def y_caps(self) -> Caps:
        """Caps describing Y = {i : i_σ <= d_σ for σ ∉ J}."""
        return self.caps

    def y_prime_caps(self, r: Rational) -> Caps:
        """Caps describing Y' = {i : i_σ <= d_σ for σ ∉ J'}."""
        j_prime = self.enlarged(r)
        return tuple(None if s in j_prime else c for s, c in enumerate(self.caps))

    def in_y(self, i: MultiIndex) -> bool:
        return i.within(self.y_caps())

    def in_y_prime(self, i: MultiIndex, r: Rational) -> bool:
        return i.within(self.y_prime_caps(r))

    def indices(self, n: int) -> list[MultiIndex]:
        """Y ∩ I_{<=n}."""
        return index_set(Relation.LE, n, self.dim, caps=self.caps)
