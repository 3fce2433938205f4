"""Small statistical helpers used by the Monte-Carlo and sweep modules."""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np
from scipy.stats import norm


def wilson_interval(
    successes: int, trials: int, confidence: float = 0.95
) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        return 0.0, 1.0
    z = float(norm.ppf(0.5 + confidence / 2))
    p_hat = successes / trials
    denom = 1 + z * z / trials
    centre = (p_hat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p_hat * (1 - p_hat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def ratio_interval(
    num: int,
    den: int,
    sum_nn: int,
    sum_nd: int,
    sum_dd: int,
    confidence: float = 0.95,
) -> tuple[float, float]:
    """Delta-method interval for the pooled ratio sum(n_t) / sum(d_t) over independent trials.

    ``sum_nn``, ``sum_nd`` and ``sum_dd`` are the per-trial sums of n_t^2, n_t d_t and d_t^2.
    """
    if den <= 0:
        return 0.0, 0.0
    ratio = num / den
    spread = max(0.0, sum_nn - 2 * ratio * sum_nd + ratio * ratio * sum_dd)
    z = float(norm.ppf(0.5 + confidence / 2))
    half = z * math.sqrt(spread) / den
    return max(0.0, ratio - half), ratio + half


def ci_separated(upper: tuple[float, float], lower: tuple[float, float]) -> bool:
    """True when interval ``upper`` lies strictly above interval ``lower``."""
    return upper[0] > lower[1]


def linear_fit(x: Sequence[float], y: Sequence[float]) -> tuple[float, float, list[float]]:
    """Least-squares line; returns (slope, intercept, residuals)."""
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    slope, intercept = np.polyfit(xs, ys, 1)
    residuals = ys - (slope * xs + intercept)
    return float(slope), float(intercept), [float(r) for r in residuals]


def rms(values: Sequence[float]) -> float:
    if not values:
        return 0.0
    return math.sqrt(math.fsum(v * v for v in values) / len(values))
