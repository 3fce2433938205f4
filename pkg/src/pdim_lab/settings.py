"""Process-wide defaults, overridable through PDIM_* environment variables or .env."""

from __future__ import annotations

from functools import lru_cache
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class LabSettings(BaseSettings):
    """Defaults for caps, percolation windows and report thresholds."""

    model_config = SettingsConfigDict(env_prefix="PDIM_", env_file=".env", extra="ignore")

    element_cap: int = Field(default=50_000_000, ge=1)
    walk_cap: int = Field(default=50_000_000, ge=1)
    exact_n_max: int = Field(default=8, ge=0)

    lambda_min: float = Field(default=1e-3, gt=0)
    lambda_max: float = Field(default=64.0, ge=1)
    theta: float = Field(default=0.5, gt=0, lt=1)
    escape_radius: int = Field(default=40, ge=1)
    size_cap: int = Field(default=200_000, ge=1)
    trials: int = Field(default=2000, ge=1)
    relative_width: float = Field(default=0.01, gt=0)
    window_drift: float = Field(default=0.10, gt=0)
    estimator: Literal["growth", "theta"] = "growth"
    growth_budget: int = Field(default=256, ge=2)

    proximity_band: float = Field(default=0.15, ge=0)
    workers: int = Field(default=1, ge=1)
    log_level: str = "WARNING"


@lru_cache(maxsize=1)
def get_settings() -> LabSettings:
    return LabSettings()
