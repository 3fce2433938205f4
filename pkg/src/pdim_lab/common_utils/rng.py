"""Counter-based random streams.

Every random decision in a percolation trial is a pure function of
(master seed, trial index, unordered vertex pair), so outcomes do not depend on
exploration order or on how trials are distributed over workers.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Any

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_TUPLE_TAG = 0x243F6A8885A308D3
_INV_2_53 = 2.0**-53


def splitmix64(x: int) -> int:
    """One round of the splitmix64 finaliser on a 64-bit word."""
    x = (x + _GOLDEN) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def stable_key(obj: Any) -> int:
    """Deterministic 64-bit key of a nested tuple of ints.

    Python's ``hash`` is unsuitable: ``hash(-1) == hash(-2)``.
    """
    if isinstance(obj, int):
        return splitmix64(obj & _MASK)
    if isinstance(obj, tuple):
        h = splitmix64(_TUPLE_TAG ^ len(obj))
        for item in obj:
            h = splitmix64(h ^ stable_key(item))
        return h
    raise TypeError(f"unsupported element type for stable_key: {type(obj).__name__}")


@lru_cache(maxsize=1 << 20)
def cached_key(obj: Any) -> int:
    """stable_key memoised across trials; elements are hashable tuples."""
    return stable_key(obj)


def trial_stream(seed: int, trial_index: int) -> int:
    """Key of the stream owned by one trial."""
    return splitmix64(splitmix64(seed & _MASK) ^ (trial_index & _MASK))


def pair_uniform(stream: int, key_a: int, key_b: int) -> float:
    """Uniform in [0, 1) attached to the unordered pair {a, b} within a trial stream."""
    lo, hi = (key_a, key_b) if key_a <= key_b else (key_b, key_a)
    x = splitmix64(stream ^ lo)
    x = splitmix64(x ^ hi)
    return (x >> 11) * _INV_2_53


def trial_generator(seed: int, trial_index: int) -> np.random.Generator:
    """numpy Philox generator keyed by (seed, trial index)."""
    key = np.array([seed & _MASK, trial_index & _MASK], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
