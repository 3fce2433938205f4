"""Shared helpers for the MCP tools: error dicts, value encoding and the tool runner."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from fractions import Fraction
from typing import Any

from pdim_lab.core.errors import CapExceededError, UsageError
from pdim_lab.core.groups import GroupContext
from pdim_lab.core.measures import Measure
from pdim_lab.parsers import parse_group, parse_measure

logger = logging.getLogger(__name__)

# Upper limits for interactive calls; the batch CLI has none.
_MAX_TRIALS = 100_000
_MAX_WALK_LENGTH = 12
_MAX_RETURN_STEPS = 400
_MAX_RADIUS = 64


def _validation_error(message: str) -> dict[str, Any]:
    return {"error": "validation_error", "message": message}


def _cap_error(exc: CapExceededError) -> dict[str, Any]:
    return {
        "error": "cap_exceeded",
        "message": str(exc),
        "cap": exc.cap,
        "partial": list(exc.partial),
    }


def _value(value: Any) -> Any:
    """JSON-friendly scalar: exact rationals become ``p/q`` strings, infinities strings."""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float) and not math.isfinite(value):
        return "inf" if value > 0 else "-inf"
    return value


def _context(group: str) -> GroupContext:
    return parse_group(group.strip())


def _measure(group: str, measure: str) -> tuple[GroupContext, Measure]:
    ctx = _context(group)
    return ctx, parse_measure(ctx, measure.strip())


def _run_tool(body: Callable[[], dict[str, Any]]) -> dict[str, Any]:
    """Run a tool body, turning library errors into error dicts."""
    try:
        return body()
    except CapExceededError as exc:
        logger.warning("tool hit a cap: %s", exc)
        return _cap_error(exc)
    except (UsageError, FileNotFoundError) as exc:
        return _validation_error(str(exc))
