from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, field_validator

from padicwave.config import get_settings


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


class FieldDescriptor(BaseModel):
    """The local field F = Q_{p^f}(ϖ) with ϖ^e = p, used as its own coefficient field E.

    Tameness (e | p - 1) is not enforced here so that descriptors can be
    built and reported on; every computation that needs the embeddings goes
    through :func:`padicwave.arith.ring.field_context`, which raises
    :class:`~padicwave.core.exceptions.UnsupportedFieldError` for wild fields.

    Attributes
    ----------
    p : int
        Residue characteristic.
    f : int
        Residue degree.
    e : int
        Ramification index.
    precision : int
        Working precision M in uniformizer digits.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    p: int = Field(..., ge=2, description="Residue characteristic, a prime")
    f: int = Field(default=1, ge=1, le=6, description="Residue degree")
    e: int = Field(default=1, ge=1, le=12, description="Ramification index")
    precision: int = Field(
        default_factory=lambda: get_settings().precision,
        ge=8,
        le=4096,
        description="Working precision in uniformizer digits",
    )

    @field_validator("p")
    @classmethod
    def validate_prime(cls, v: int) -> int:
        if not is_prime(v):
            raise ValueError(f"p must be prime, got {v}")
        return v

    @property
    def d(self) -> int:
        return self.e * self.f

    @property
    def q(self) -> int:
        return self.p**self.f

    @property
    def is_tame(self) -> bool:
        return (self.p - 1) % self.e == 0

    def label(self) -> str:
        if self.f == 1 and self.e == 1:
            return f"Q_{self.p}"
        return f"Q_{self.p}(f={self.f},e={self.e})"
