"""Ordered fan-out over a thread pool."""

from __future__ import annotations

from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> list[R]:
    """Apply ``fn`` to every item, returning results in input order.

    With ``workers <= 1`` everything runs inline.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))


def chunk_ranges(total: int, chunks: int) -> list[range]:
    """Split ``range(total)`` into at most ``chunks`` contiguous ranges."""
    chunks = max(1, min(chunks, total)) if total > 0 else 1
    size, extra = divmod(total, chunks)
    ranges: list[range] = []
    start = 0
    for i in range(chunks):
        stop = start + size + (1 if i < extra else 0)
        ranges.append(range(start, stop))
        start = stop
    return ranges
