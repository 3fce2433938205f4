"""MCP tools for word-metric geometry: balls, spheres and growth fits."""

from __future__ import annotations

from typing import Any

from pdim_lab.core.dimension import growth_fit
from pdim_lab.core.groups import ball
from pdim_lab.mcp_server import mcp
from pdim_lab.mcp_server._helpers import (
    _MAX_RADIUS,
    _context,
    _run_tool,
    _validation_error,
)


@mcp.tool()
def get_ball_profile(group: str, n: int) -> dict[str, Any]:
    """Return sphere and ball sizes |S(r)|, |B(r)| for r = 0..n.

    Group specs: "zd:<d>", "free:<k>", "heis", "lamp", "canopy:<depth>",
    "graph:<edge-list file>", "product:<spec>+<spec>".

    Args:
        group: Group spec string (e.g. "heis").
        n: Ball radius, 0..64.

    Returns:
        group: Canonical group spec
        sphere_sizes: |S(r)| for r = 0..n
        ball_sizes: |B(r)| for r = 0..n
        error/message: Present when the input is invalid or a cap is hit
    """
    if not 0 <= n <= _MAX_RADIUS:
        return _validation_error(f"n must be in 0..{_MAX_RADIUS}")

    def body() -> dict[str, Any]:
        ctx = _context(group)
        spheres = list(ball(ctx, n).sphere_sizes)
        totals: list[int] = []
        running = 0
        for size in spheres:
            running += size
            totals.append(running)
        return {"group": ctx.spec, "sphere_sizes": spheres, "ball_sizes": totals}

    return _run_tool(body)


@mcp.tool()
def growth_profile(group: str, radii: list[int]) -> dict[str, Any]:
    """Fit the growth exponent of spheres over a geometric progression of radii.

    Polynomial growth reports d_hat (an upper bound hint for the percolation
    dimension); exponential growth reports the stretched-exponential exponent.

    Args:
        group: Group spec string (e.g. "zd:2").
        radii: At least 4 radii in geometric progression (e.g. [2, 4, 8, 16]).

    Returns:
        d_hat, exponential, s_hat, residuals, statement
        error/message: Present when the input is invalid or a cap is hit
    """
    if radii and max(radii) > _MAX_RADIUS:
        return _validation_error(f"radii must be <= {_MAX_RADIUS}")

    def body() -> dict[str, Any]:
        fit = growth_fit(_context(group), radii)
        return {
            "radii": list(fit.radii),
            "sphere_sizes": list(fit.sphere_sizes),
            "ball_sizes": list(fit.ball_sizes),
            "d_hat": fit.d_hat,
            "exponential": fit.exponential,
            "s_hat": fit.s_hat,
            "residuals": list(fit.residuals),
            "statement": fit.statement,
        }

    return _run_tool(body)
