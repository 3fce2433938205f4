"""MCP tools for long-range percolation thresholds."""

from __future__ import annotations

from typing import Any

from pdim_lab.core.percolation import (
    PercConfig,
    lambda_c_estimate,
    tree_escape_probability,
    tree_oracle_lambda_c,
    tree_survival_probability,
    tree_theta_crossing,
)
from pdim_lab.mcp_server import mcp
from pdim_lab.mcp_server._helpers import (
    _MAX_TRIALS,
    _measure,
    _run_tool,
    _validation_error,
)


@mcp.tool()
def estimate_lambda_c(
    group: str,
    measure: str,
    L: int = 40,
    trials: int = 2000,
    seed: int = 0,
    theta: float = 0.5,
    lambda_max: float = 64.0,
    estimator: str = "growth",
) -> dict[str, Any]:
    """Estimate the critical intensity lambda_c(mu) by Monte Carlo bisection.

    With estimator="growth" the estimate is the lambda at which the mean number
    of children per cluster vertex, pooled over at most L generations, crosses 1;
    on free groups this is lambda_c itself. With estimator="theta" it is the
    lambda at which the fraction of identity clusters reaching word length L
    crosses theta, a finite-window pseudo-critical point. capped=true means the
    statistic never crosses up to lambda_max or the crossing keeps moving when
    the window is doubled.

    Args:
        group: Group spec string (e.g. "free:2").
        measure: Measure spec string (e.g. "uniform-ball:1").
        L: Escape radius. Default 40.
        trials: Trials per bisection step, 1..100000. Default 2000.
        seed: Master seed. Default 0.
        theta: Survival threshold in (0, 1) for the theta estimator. Default 0.5.
        lambda_max: Search cap. Default 64.
        estimator: "growth" or "theta". Default "growth".

    Returns:
        lambda_hat, ci_low, ci_high, capped, cap_reason, estimator, evaluations, caveat
        error/message: Present when the input is invalid
    """
    if not 1 <= trials <= _MAX_TRIALS:
        return _validation_error(f"trials must be in 1..{_MAX_TRIALS}")
    if estimator not in ("growth", "theta"):
        return _validation_error("estimator must be growth or theta")

    def body() -> dict[str, Any]:
        ctx, mu = _measure(group, measure)
        cfg = PercConfig.from_settings(
            escape_radius=L,
            trials=trials,
            seed=seed,
            theta=theta,
            lambda_max=lambda_max,
            estimator=estimator,
        )
        est = lambda_c_estimate(mu, cfg)
        return {
            "group": ctx.spec,
            "measure": mu.provenance,
            "lambda_hat": est.lambda_hat,
            "ci_low": est.ci[0],
            "ci_high": est.ci[1],
            "capped": est.capped,
            "cap_reason": est.cap_reason,
            "window_lambda_hat": est.window_lambda_hat,
            "estimator": est.estimator,
            "evaluations": [{"lambda": p.lam, "statistic": p.statistic} for p in est.evaluations],
            "caveat": est.caveat,
        }

    return _run_tool(body)


@mcp.tool()
def tree_threshold(k: int, L: int = 40, theta: float = 0.5) -> dict[str, Any]:
    """Exact percolation oracles on the free group F_k with uniform generator measure.

    Args:
        k: Number of free generators, >= 2.
        L: Window for the finite-window escape probability. Default 40.
        theta: Threshold for the exact window-L crossing. Default 0.5.

    Returns:
        lambda_c: 2k ln((2k-1)/(2k-2))
        escape_at_lambda_c: P(reach length L) at lambda_c
        theta_crossing: lambda where the window-L escape probability equals theta
        survival_at_2lambda_c: infinite-window survival at 2 lambda_c
        error/message: Present when the input is invalid
    """

    def body() -> dict[str, Any]:
        lam_c = tree_oracle_lambda_c(k)
        return {
            "k": k,
            "lambda_c": lam_c,
            "escape_at_lambda_c": tree_escape_probability(k, lam_c, L),
            "theta_crossing": tree_theta_crossing(k, theta, L),
            "survival_at_2lambda_c": tree_survival_probability(k, 2 * lam_c),
        }

    return _run_tool(body)
