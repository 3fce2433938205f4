"""Tests for the counter-based RNG, interval statistics and the ordered pool."""

from __future__ import annotations

import math
import threading

import pytest

from pdim_lab.common_utils.parallel import chunk_ranges, ordered_map
from pdim_lab.common_utils.rng import (
    cached_key,
    pair_uniform,
    splitmix64,
    stable_key,
    trial_generator,
    trial_stream,
)
from pdim_lab.common_utils.stats import (
    ci_separated,
    linear_fit,
    ratio_interval,
    rms,
    wilson_interval,
)


class TestStableKey:
    """Keys are deterministic and separate values Python's hash conflates."""

    def test_minus_one_and_minus_two_differ(self) -> None:
        assert hash(-1) == hash(-2)
        assert stable_key(-1) != stable_key(-2)

    def test_tuples_are_order_sensitive(self) -> None:
        assert stable_key((1, 2)) != stable_key((2, 1))
        assert stable_key(((0, 1), 2)) != stable_key((0, (1, 2)))

    def test_deterministic(self) -> None:
        assert stable_key((3, -4, (5,))) == stable_key((3, -4, (5,)))

    def test_rejects_strings(self) -> None:
        with pytest.raises(TypeError):
            stable_key("a")

    def test_cached_key_matches(self) -> None:
        for g in [(), (1, -2, 1), (3, 0, -7), ((0, 4), -1), ((1,), (2, -1))]:
            assert cached_key(g) == stable_key(g)
            assert cached_key(g) == cached_key(g)

    def test_splitmix_stays_in_64_bits(self) -> None:
        assert 0 <= splitmix64((1 << 64) - 1) < 1 << 64


class TestPairUniform:
    """Pair draws are symmetric, in [0, 1) and vary across trials."""

    def test_symmetric(self) -> None:
        stream = trial_stream(7, 3)
        a, b = stable_key((1, 0)), stable_key((0, 1))
        assert pair_uniform(stream, a, b) == pair_uniform(stream, b, a)

    def test_range_and_spread(self) -> None:
        stream = trial_stream(0, 0)
        draws = [pair_uniform(stream, stable_key(i), stable_key(i + 1)) for i in range(2000)]
        assert all(0.0 <= u < 1.0 for u in draws)
        assert 0.45 < sum(draws) / len(draws) < 0.55

    def test_trials_get_distinct_streams(self) -> None:
        assert trial_stream(0, 1) != trial_stream(0, 2)
        assert trial_stream(1, 1) != trial_stream(2, 1)

    def test_generator_is_reproducible(self) -> None:
        a = trial_generator(5, 9).random(4)
        b = trial_generator(5, 9).random(4)
        assert list(a) == list(b)
        assert list(trial_generator(5, 10).random(4)) != list(a)


class TestIntervals:
    """Wilson intervals and strict separation."""

    def test_wilson_half(self) -> None:
        lo, hi = wilson_interval(50, 100)
        assert lo == pytest.approx(0.4038, abs=1e-3)
        assert hi == pytest.approx(0.5962, abs=1e-3)

    def test_wilson_edges(self) -> None:
        lo, hi = wilson_interval(0, 20)
        assert lo == 0.0
        assert 0 < hi < 0.2
        assert wilson_interval(0, 0) == (0.0, 1.0)

    def test_wider_at_higher_confidence(self) -> None:
        narrow = wilson_interval(30, 100, 0.90)
        wide = wilson_interval(30, 100, 0.99)
        assert wide[0] < narrow[0] and wide[1] > narrow[1]

    def test_separation_is_strict(self) -> None:
        assert ci_separated((0.6, 0.7), (0.4, 0.5))
        assert not ci_separated((0.5, 0.7), (0.4, 0.5))
        assert not ci_separated((0.4, 0.5), (0.6, 0.7))


class TestRatioInterval:
    """Delta-method intervals for pooled ratios."""

    def test_known_trials(self) -> None:
        # trials (n, d): (2, 1), (1, 1), (3, 2)
        low, high = ratio_interval(6, 4, 14, 9, 6)
        half = 1.959964 * math.sqrt(0.5) / 4
        assert low == pytest.approx(1.5 - half, rel=1e-5)
        assert high == pytest.approx(1.5 + half, rel=1e-5)

    def test_proportional_trials_have_zero_width(self) -> None:
        # n_t = 2 d_t for d = 1, 2, 3
        assert ratio_interval(12, 6, 56, 28, 14) == pytest.approx((2.0, 2.0))

    def test_no_parents(self) -> None:
        assert ratio_interval(0, 0, 0, 0, 0) == (0.0, 0.0)

    def test_lower_edge_clipped(self) -> None:
        low, _ = ratio_interval(1, 10, 1, 1, 100)
        assert low == 0.0


class TestFits:
    def test_exact_line(self) -> None:
        slope, intercept, residuals = linear_fit([1, 2, 3, 4], [3, 5, 7, 9])
        assert slope == pytest.approx(2.0)
        assert intercept == pytest.approx(1.0)
        assert rms(residuals) == pytest.approx(0.0, abs=1e-9)

    def test_rms(self) -> None:
        assert rms([3.0, -4.0]) == pytest.approx(12.5**0.5)
        assert rms([]) == 0.0


class TestParallel:
    """Results keep input order whatever the worker count."""

    @pytest.mark.parametrize("workers", [1, 2, 8])
    def test_order_preserved(self, workers: int) -> None:
        assert ordered_map(lambda x: x * x, range(20), workers) == [x * x for x in range(20)]

    def test_uses_threads(self) -> None:
        seen: set[int] = set()
        barrier = threading.Barrier(2, timeout=5)

        def task(_: int) -> None:
            seen.add(threading.get_ident())
            barrier.wait()

        ordered_map(task, range(2), workers=2)
        assert len(seen) == 2

    def test_chunk_ranges_cover(self) -> None:
        ranges = chunk_ranges(10, 3)
        assert [len(r) for r in ranges] == [4, 3, 3]
        assert [i for r in ranges for i in r] == list(range(10))

    def test_chunk_ranges_small_totals(self) -> None:
        assert chunk_ranges(2, 8) == [range(0, 1), range(1, 2)]
        assert chunk_ranges(0, 4) == [range(0, 0)]
