from __future__ import annotations

from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class PadicSettings(BaseSettings):
    """Process-wide knobs for precision, enumeration depth and moment convergence."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="PADICWAVE_",
        extra="forbid",
        frozen=True,
    )

    precision: int = Field(
        default=64,
        ge=8,
        le=4096,
        description="Working precision M in uniformizer digits",
    )
    default_depth: int = Field(
        default=4,
        ge=0,
        le=12,
        description="Enumeration depth used when a caller does not pass one",
    )
    annulus_slack: int = Field(
        default=2,
        ge=0,
        description="Extra annuli in the initial cutoff K = h + [r] + slack",
    )
    max_annulus_extension: int = Field(
        default=64,
        ge=0,
        description="Annuli added past the initial cutoff before the tail bound is folded in",
    )
    haar_digits: int = Field(
        default=12,
        ge=1,
        description="Digit agreement required between consecutive Riemann sums",
    )
    haar_max_level: int = Field(
        default=40,
        ge=2,
        description="Deepest Riemann-sum level tried for a Haar moment",
    )
    seed: int = Field(default=0, description="Default seed for randomized commands")


@lru_cache(maxsize=1)
def get_settings() -> PadicSettings:
    return PadicSettings()
