"""Resolved experiment configuration and its flat ``key=value`` file format.

Keys are the flag names without dashes (``lambda-max=64``). Precedence:
command-line flags, then the ``--config`` file, then ``LabSettings`` defaults.
"""

from __future__ import annotations

import io
from pathlib import Path
from typing import Any, Literal

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from pdim_lab.core.errors import UsageError
from pdim_lab.settings import get_settings

Command = Literal["ball", "measure", "lambda-c", "saw", "spectral", "sweep", "giant", "selftest"]
Family = Literal["percolativity", "pdim", "epdim", "nudim", "tree", "growth", "lb"]
Weights = Literal["complete", "two-clique", "ball"]
Estimator = Literal["growth", "theta"]

_LIST_FIELDS = ("radii", "s", "R")


class ExperimentConfig(BaseModel):
    """Every knob of one CLI run, fully resolved."""

    model_config = ConfigDict(populate_by_name=True, extra="forbid", frozen=True)

    command: Command
    group: str = "zd:2"
    measure: str = "uniform-ball:1"
    lam: float | None = Field(default=None, alias="lambda", ge=0)
    L: int = Field(default=40, ge=1)
    trials: int = Field(default=2000, ge=1)
    theta: float = Field(default=0.5, gt=0, lt=1)
    lambda_max: float = Field(default=64.0, alias="lambda-max", ge=1)
    nmax: int = Field(default=4, ge=0)
    seed: int = Field(default=0, ge=0)
    threads: int = Field(default=1, ge=1)
    out: str | None = None
    exact: bool = False
    n: int | None = Field(default=None, ge=0)
    family: Family = "percolativity"
    radii: list[int] = Field(default_factory=list)
    s: list[float] = Field(default_factory=list)
    R: list[int] = Field(default_factory=list)
    r: float | None = Field(default=None, gt=0, lt=1)
    M: int = Field(default=1, ge=1)
    samples: int = Field(default=20, ge=1)
    weights: Weights = "complete"
    window_check: bool = Field(default=True, alias="window-check")
    estimator: Estimator = "growth"

    @field_validator(*_LIST_FIELDS, mode="before")
    @classmethod
    def _split_lists(cls, value: Any) -> Any:
        if isinstance(value, str):
            return [part for part in value.replace(" ", "").split(",") if part]
        return value

    @classmethod
    def resolve(
        cls, command: str, flags: dict[str, Any], config_file: str | Path | None = None
    ) -> ExperimentConfig:
        """Merge settings defaults, the config file and explicit flags (keyed by alias)."""
        settings = get_settings()
        values: dict[str, Any] = {
            "L": settings.escape_radius,
            "trials": settings.trials,
            "theta": settings.theta,
            "lambda-max": settings.lambda_max,
            "threads": settings.workers,
            "estimator": settings.estimator,
        }
        if config_file is not None:
            path = Path(config_file)
            if not path.exists():
                raise UsageError(f"config file not found: {path}")
            values.update(_read_pairs(dotenv_values(path)))
        values.update({k: v for k, v in flags.items() if v is not None})
        values["command"] = command
        try:
            return cls.model_validate(values)
        except ValidationError as exc:
            raise UsageError(_describe(exc)) from None

    @classmethod
    def from_config_text(cls, text: str) -> ExperimentConfig:
        pairs = _read_pairs(dotenv_values(stream=io.StringIO(text)))
        try:
            return cls.model_validate(pairs)
        except ValidationError as exc:
            raise UsageError(_describe(exc)) from None

    def to_config_text(self) -> str:
        """The config as ``key=value`` lines; parsing it back yields an equal config."""
        lines: list[str] = []
        for name, value in self.model_dump(by_alias=True).items():
            if value is None:
                continue
            if isinstance(value, bool):
                text = "true" if value else "false"
            elif isinstance(value, list):
                text = ",".join(_scalar(v) for v in value)
            else:
                text = _scalar(value)
            lines.append(f"{name}={text}")
        return "\n".join(lines) + "\n"


def _scalar(value: Any) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _read_pairs(raw: dict[str, str | None]) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for key, value in raw.items():
        if value is None or value == "":
            continue
        out[key.strip()] = value
    return out


def _describe(exc: ValidationError) -> str:
    parts = []
    for err in exc.errors():
        where = ".".join(str(loc) for loc in err["loc"])
        parts.append(f"{where}: {err['msg']}")
    return "invalid configuration: " + "; ".join(parts)
