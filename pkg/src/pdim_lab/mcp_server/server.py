"""pdim-lab MCP server.

Register with an MCP client to run the lab's experiments through natural language.

Tools:
  - get_ball_profile: sphere and ball sizes of a group's word metric
  - growth_profile: growth exponent fit over a geometric progression of radii
  - describe_measure: atoms, decay-class constants and annulus masses of a measure
  - estimate_lambda_c: Monte Carlo bisection estimate of lambda_c(mu)
  - tree_threshold: exact thresholds on free groups
  - enumerate_saw: weighted self-avoiding walk sums and connective-constant bounds
  - random_walk_report: return probabilities, spectral radius and isoperimetry
  - list_specs: the group and measure spec grammars

Keyword mapping (for tool selection):
  - "critical intensity", "threshold", "lambda_c" → estimate_lambda_c
    (tree_threshold when the group is a free group with its generators)
  - "self-avoiding", "connective constant" → enumerate_saw
  - "return probability", "spectral radius", "amenable" → random_walk_report
  - "growth", "volume", "ball size" → get_ball_profile / growth_profile
"""

from __future__ import annotations

import pdim_lab.mcp_server.tools.geometry  # noqa: F401  registers @mcp.tool()
import pdim_lab.mcp_server.tools.measures  # noqa: F401
import pdim_lab.mcp_server.tools.percolation  # noqa: F401
import pdim_lab.mcp_server.tools.walks  # noqa: F401
from pdim_lab.mcp_server import mcp
from pdim_lab.parsers.specs import GROUP_GRAMMAR, MEASURE_GRAMMAR


@mcp.tool()
def list_specs() -> dict[str, str]:
    """Return the grammars accepted by the group and measure arguments of every tool.

    Returns:
        group: Group spec grammar
        measure: Measure spec grammar
    """
    return {"group": GROUP_GRAMMAR, "measure": MEASURE_GRAMMAR}


def main() -> None:
    import argparse

    parser = argparse.ArgumentParser(description="pdim-lab MCP Server")
    parser.add_argument(
        "--transport",
        choices=["stdio", "http"],
        default="stdio",
        help="Transport mode (default: stdio)",
    )
    parser.add_argument("--host", default="127.0.0.1", help="HTTP host (default: 127.0.0.1)")
    parser.add_argument("--port", type=int, default=8000, help="HTTP port (default: 8000)")
    args = parser.parse_args()

    if args.transport == "http":
        import os

        import uvicorn
        from mcp.server.transport_security import TransportSecuritySettings

        mcp.settings.host = args.host
        mcp.settings.port = args.port
        mcp.settings.transport_security = TransportSecuritySettings(
            enable_dns_rebinding_protection=False,
        )
        app = mcp.streamable_http_app()
        uvicorn.run(
            app,
            host=args.host,
            port=args.port,
            proxy_headers=True,
            forwarded_allow_ips=os.environ.get("FORWARDED_ALLOW_IPS", "127.0.0.1"),
        )
    else:
        mcp.run()


if __name__ == "__main__":
    main()
