"""MCP tool describing a measure: atoms, decay classes and annulus masses."""

from __future__ import annotations

from typing import Any

from pdim_lab.core.measures import annulus_mass, decay_class, max_atom
from pdim_lab.mcp_server import mcp
from pdim_lab.mcp_server._helpers import _measure, _run_tool, _value


@mcp.tool()
def describe_measure(group: str, measure: str, s: float = 1.0, M: int = 1) -> dict[str, Any]:
    """Describe a symmetric probability measure on a group.

    Measure specs: "uniform-ball:<n>", "uniform-set:<file>", "poly:<s>,<R>",
    "sexp:<r>,<s>,<R>", "file:<path>".

    Args:
        group: Group spec string (e.g. "zd:2").
        measure: Measure spec string (e.g. "poly:3,4").
        s: Decay exponent for the M_s^b / eM_s^r class constants. Default 1.0.
        M: Inner radius of the dyadic annuli. Default 1.

    Returns:
        provenance: Canonical measure spec
        support_size: Number of atoms
        atoms: First 50 atoms as {element, mass}
        max_atom: {element, mass}
        b_min / r_min: Minimal class constants for exponent s (membership is strict)
        annuli: mu(A_i) for i >= 0 and whether mu(A_0) > 1/2
        error/message: Present when the input is invalid
    """

    def body() -> dict[str, Any]:
        ctx, mu = _measure(group, measure)
        if mu.is_graph:
            return {
                "provenance": mu.provenance,
                "edge_weight": _value(mu.edge_weight),
                "note": "nearest-neighbour measure on a graph; every edge has the same weight",
            }
        atom, delta = max_atom(mu)
        poly = decay_class(mu, s, "poly")
        annuli = annulus_mass(mu, M)
        return {
            "provenance": mu.provenance,
            "support_size": len(mu),
            "atoms": [
                {"element": ctx.format_element(g), "mass": m}
                for g, m in list(zip(mu.support, mu.masses))[:50]
            ],
            "max_atom": {"element": ctx.format_element(atom), "mass": delta},
            "b_min": _value(poly.exact_constant) if poly.exact_constant else poly.constant,
            "r_min": decay_class(mu, s, "exp").constant,
            "annuli": {
                "M": annuli.M,
                "masses": [m for _, m in annuli.masses],
                "inner_dominates": annuli.dominant,
            },
        }

    return _run_tool(body)
