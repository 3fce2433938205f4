"""CSV/JSON writers; every file starts with the tool version and the resolved config."""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from collections.abc import Iterable, Sequence
from fractions import Fraction
from pathlib import Path
from typing import Any

from pdim_lab import __version__
from pdim_lab.cli.config import ExperimentConfig


def format_value(value: Any) -> str:
    """17 significant digits for floats, ``p/q`` for exact rationals."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".17g")
    return str(value)


def _jsonable(value: Any) -> Any:
    if isinstance(value, Fraction):
        return format_value(value)
    if isinstance(value, float) and not math.isfinite(value):
        return format_value(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def header_lines(config: ExperimentConfig) -> list[str]:
    lines = [f"# pdim-lab {__version__}", f"# seed={config.seed}"]
    lines.extend(f"# {line}" for line in config.to_config_text().splitlines())
    return lines


def render_csv(
    config: ExperimentConfig, columns: Sequence[str], rows: Iterable[Sequence[Any]]
) -> str:
    buffer = io.StringIO()
    buffer.write("\n".join(header_lines(config)) + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buffer.getvalue()


def csv_body(text: str) -> str:
    """The CSV without its ``#`` header lines."""
    return "".join(line for line in text.splitlines(keepends=True) if not line.startswith("#"))


def render_json(config: ExperimentConfig, payload: dict[str, Any]) -> str:
    document = {
        "tool": "pdim-lab",
        "version": __version__,
        "seed": config.seed,
        "config": config.model_dump(by_alias=True),
        **payload,
    }
    return json.dumps(_jsonable(document), indent=2, ensure_ascii=True) + "\n"


def emit(
    config: ExperimentConfig,
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    report: dict[str, Any] | None = None,
) -> list[Path]:
    """Write the CSV (and the JSON report, if any) to ``--out`` or stdout."""
    text = render_csv(config, columns, rows)
    written: list[Path] = []
    if config.out is None:
        sys.stdout.write(text)
        if report is not None:
            sys.stdout.write(render_json(config, report))
        return written
    out = Path(config.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    written.append(out)
    if report is not None:
        json_path = out.with_suffix(".json")
        json_path.write_text(render_json(config, report), encoding="utf-8")
        written.append(json_path)
    return written
