"""MCP tools for self-avoiding walks and random-walk return probabilities."""

from __future__ import annotations

from typing import Any

from pdim_lab.core.saw import nu_upper, ratio_estimates, saw_table
from pdim_lab.core.spectral import (
    cheeger_report,
    kesten_inequality_check,
    return_probabilities,
    rho_estimate,
)
from pdim_lab.mcp_server import mcp
from pdim_lab.mcp_server._helpers import (
    _MAX_RETURN_STEPS,
    _MAX_WALK_LENGTH,
    _measure,
    _run_tool,
    _validation_error,
    _value,
)


@mcp.tool()
def enumerate_saw(group: str, measure: str, n_max: int = 6, exact: bool = False) -> dict[str, Any]:
    """Weighted self-avoiding walk sums sigma_n(mu) for n = 0..n_max.

    Each sigma_n^(1/n) is a rigorous upper bound on the connective constant
    nu(mu), and 1/nu(mu) is a lower bound on lambda_c(mu).

    Args:
        group: Group spec string (e.g. "zd:2").
        measure: Measure spec string (e.g. "uniform-ball:1").
        n_max: Largest walk length, 0..12. Default 6.
        exact: Force rational arithmetic (needs rational atoms). Default False.

    Returns:
        sigma: sigma_0..sigma_n_max ("p/q" strings when exact)
        exact: Whether the values are exact
        nu_upper: Best bound sigma_n^(1/n) and the n attaining it
        ratios: sigma_n / sigma_{n-1} diagnostics (not bounds)
        error/message: Present when the input is invalid or a cap is hit
    """
    if not 0 <= n_max <= _MAX_WALK_LENGTH:
        return _validation_error(f"n_max must be in 0..{_MAX_WALK_LENGTH}")

    def body() -> dict[str, Any]:
        _, mu = _measure(group, measure)
        table = saw_table(mu, n_max, exact=True if exact else None)
        out: dict[str, Any] = {
            "measure": mu.provenance,
            "sigma": [_value(v) for v in table.sigma],
            "exact": table.exact,
            "walks": list(table.walks),
        }
        if n_max >= 1:
            bound = nu_upper(table)
            out["nu_upper"] = {"n": bound.best_n, "value": bound.best}
            out["ratios"] = [r for _, r in ratio_estimates(table)]
        return out

    return _run_tool(body)


@mcp.tool()
def random_walk_report(group: str, measure: str, n_max: int = 40) -> dict[str, Any]:
    """Return probabilities p_n, the spectral radius estimate and isoperimetric bounds.

    Args:
        group: Group spec string (e.g. "free:2").
        measure: Measure spec string (e.g. "uniform-ball:1").
        n_max: Number of steps, 0..400. rho is estimated when n_max >= 20. Default 40.

    Returns:
        mode: "radial-chain" or "element-convolution" (the exact method used)
        p: p_0..p_n_max as floats
        rho / kesten: Ratio estimate of the spectral radius and the 1/|S| <= rho^2 check
        cheeger: Smallest |boundary B(r)|/|B(r)| over r <= 4 and the derived p_c bounds
        error/message: Present when the input is invalid or a cap is hit
    """
    if not 0 <= n_max <= _MAX_RETURN_STEPS:
        return _validation_error(f"n_max must be in 0..{_MAX_RETURN_STEPS}")

    def body() -> dict[str, Any]:
        ctx, mu = _measure(group, measure)
        table = return_probabilities(mu, n_max)
        out: dict[str, Any] = {"mode": table.mode, "p": [float(p) for p in table.p]}
        rho = None
        if n_max >= 20:
            rho = rho_estimate(table).rho
            kesten = kesten_inequality_check(len(mu), rho)
            out["rho"] = rho
            out["kesten"] = {"inverse_size": kesten.inverse_size, "passed": kesten.passed}
        cheeger = cheeger_report(ctx, rho=rho)
        out["cheeger"] = {
            "iota_upper": cheeger.iota_upper,
            "raw": _value(cheeger.bound_raw),
            "degree_normalized": _value(cheeger.bound_degree_normalized),
            "kesten_lower": cheeger.kesten_lower,
        }
        return out

    return _run_tool(body)
