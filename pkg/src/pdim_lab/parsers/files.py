"""Readers for element-set and explicit-measure files."""

from __future__ import annotations

import logging
from pathlib import Path

from pdim_lab.core.errors import UsageError
from pdim_lab.core.groups import Element, GroupContext
from pdim_lab.core.measures import Measure, MeasureCorrection, explicit_measure

from .elements import parse_element

logger = logging.getLogger(__name__)


def _content_lines(path: Path) -> list[tuple[int, str]]:
    if not path.exists():
        raise FileNotFoundError(path)
    out: list[tuple[int, str]] = []
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((lineno, line))
    return out


def read_element_set(ctx: GroupContext, path: str | Path) -> list[Element]:
    """Whitespace-separated element literals; ``#`` starts a comment."""
    path = Path(path)
    elements: list[Element] = []
    for lineno, line in _content_lines(path):
        for token in line.split():
            try:
                elements.append(parse_element(ctx, token))
            except UsageError as exc:
                raise UsageError(f"{path}:{lineno}: {exc}") from None
    return elements


def load_measure_file(ctx: GroupContext, path: str | Path) -> tuple[Measure, MeasureCorrection]:
    """Lines ``<element-literal> <probability>``.

    The table is handed to ``explicit_measure``, which drops identity mass,
    symmetrises and renormalises; the applied correction is returned alongside.
    """
    path = Path(path)
    raw: dict[Element, float] = {}
    for lineno, line in _content_lines(path):
        parts = line.split()
        if len(parts) != 2:
            raise UsageError(f"{path}:{lineno}: expected '<element> <probability>'")
        try:
            g = parse_element(ctx, parts[0])
            p = float(parts[1])
        except (UsageError, ValueError) as exc:
            raise UsageError(f"{path}:{lineno}: {exc}") from None
        if g in raw:
            raise UsageError(f"{path}:{lineno}: element {parts[0]} listed twice")
        raw[g] = p
    measure, correction = explicit_measure(ctx, raw, provenance=f"file:{path}")
    if correction.identity_mass or correction.max_asymmetry:
        logger.info("%s: corrections applied %s", path, correction)
    return measure, correction
