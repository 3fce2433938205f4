"""Tests for the acceptance suite; the full quick run is marked slow."""

from __future__ import annotations

import time

import pytest

from pdim_lab.cli import selftest
from pdim_lab.cli.selftest import _Run, run_selftest


def _fake(value: float, capped: bool = False) -> selftest.LambdaCEstimate:
    return selftest.LambdaCEstimate(
        lambda_hat=None if capped else value,
        bracket=(value, value),
        ci=(value, value),
        evaluations=(),
        capped=capped,
        escape_radius=8,
        theta=0.5,
    )


class TestChecks:
    """Cheap checks run directly."""

    def test_saw_identity(self) -> None:
        passed, detail = selftest._numu_identity(_Run(quick=True, seed=0, workers=1))
        assert passed, detail
        assert "c4(Z^2)=100" in detail

    def test_spectral(self) -> None:
        passed, detail = selftest._spectral(_Run(quick=True, seed=0, workers=1))
        assert passed, detail

    def test_universal_lower_bound_flags_small_estimates(self) -> None:
        run = _Run(quick=True, seed=0, workers=1)
        run.estimates.extend([("a", _fake(1.6)), ("b", _fake(0, capped=True))])
        assert selftest._universal_lower_bound(run)[0]
        run.estimates.append(("c", _fake(0.9)))
        passed, detail = selftest._universal_lower_bound(run)
        assert not passed
        assert "below 0.98" in detail


class TestRunSelftest:
    def test_results_sorted_and_slow_skipped(self, monkeypatch: pytest.MonkeyPatch) -> None:
        checks = (
            selftest._Check(2, "second", lambda run: (True, "ok")),
            selftest._Check(3, "last", lambda run: (True, "ok")),
            selftest._Check(1, "first", lambda run: (True, "ok"), slow=True),
        )
        monkeypatch.setattr(selftest, "_CHECKS", checks)
        results = run_selftest(quick=True)
        assert [r.number for r in results] == [1, 2, 3]
        assert results[0].skipped
        assert results[1].detail.startswith("ok [")

    def test_overrunning_check_fails(self, monkeypatch: pytest.MonkeyPatch) -> None:
        def sluggish(run: _Run) -> tuple[bool, str]:
            time.sleep(0.01)
            return True, "values agree"

        checks = (
            selftest._Check(1, "sluggish", sluggish, budget=0.001),
            selftest._Check(2, "unbounded", sluggish),
        )
        monkeypatch.setattr(selftest, "_CHECKS", checks)
        first, second = run_selftest(quick=True)
        assert not first.passed
        assert "over budget 0.001s" in first.detail
        assert second.passed

    def test_timed_checks_carry_budgets(self) -> None:
        budgets = {c.number: c.budget for c in selftest._CHECKS}
        assert budgets[1] == 60.0
        assert budgets[4] == 60.0
        assert budgets[2] is not None

    @pytest.mark.slow
    def test_quick_suite_passes(self) -> None:
        results = run_selftest(quick=True, seed=0, workers=4)
        failed = [(r.number, r.detail) for r in results if not r.passed]
        assert not failed

    @pytest.mark.slow
    def test_tree_threshold_uses_offspring_growth(self) -> None:
        run = _Run(quick=False, seed=0, workers=4)
        passed, detail = selftest._tree_threshold(run)
        assert passed, detail
        label, est = run.estimates[-1]
        assert label == "free:2"
        assert est.estimator == "growth"
        assert est.theta == 0.5

    @pytest.mark.slow
    def test_square_lattice_calibration(self) -> None:
        passed, detail = selftest._square_calibration(_Run(quick=False, seed=0, workers=4))
        assert passed, detail

    @pytest.mark.slow
    def test_square_lattice_percolativity_trend(self) -> None:
        passed, detail = selftest._percolativity_trend(_Run(quick=False, seed=0, workers=4))
        assert passed, detail


class TestNoTargetLeak:
    """The calibration checks take their decision level from the config, not the oracle."""

    def test_square_check_keeps_configured_theta(self, monkeypatch: pytest.MonkeyPatch) -> None:
        seen: list[selftest.PercConfig] = []

        def fake_survival(mu: object, cfg: selftest.PercConfig) -> object:
            seen.append(cfg)
            p = 0.2 if cfg.lam < 2.6 else 0.8
            return type("S", (), {"ci": (p - 0.01, p + 0.01), "p_hat": p})()

        def fake_estimate(mu: object, cfg: selftest.PercConfig) -> selftest.LambdaCEstimate:
            seen.append(cfg)
            return _fake(2.8)

        monkeypatch.setattr(selftest, "survival_probability", fake_survival)
        monkeypatch.setattr(selftest, "lambda_c_estimate", fake_estimate)
        passed, detail = selftest._square_calibration(_Run(quick=False, seed=0, workers=1))
        assert passed, detail
        assert {c.theta for c in seen} == {0.5}
        assert seen[-1].estimator == "theta"
        assert "theta=0.5" in detail
