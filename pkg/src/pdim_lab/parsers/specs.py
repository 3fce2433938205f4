"""Group and measure specification strings shared by the CLI, config files and tools.

Groups:   ``zd:<d>``, ``free:<k>``, ``heis``, ``lamp``, ``canopy:<D>``,
          ``graph:<edge-list path>``, ``product:<spec>+<spec>``
Measures: ``uniform-ball:<n>``, ``uniform-set:<file>``, ``poly:<s>,<R>``,
          ``sexp:<r>,<s>,<R>``, ``file:<path>``
"""

from __future__ import annotations

from functools import lru_cache

from pdim_lab.core.errors import UsageError
from pdim_lab.core.groups import (
    CanopyTree,
    EdgeListGraph,
    FreeGroup,
    GroupContext,
    HeisenbergGroup,
    LamplighterGroup,
    LatticeGroup,
    ProductGroup,
)
from pdim_lab.core.measures import (
    Measure,
    poly_decay,
    stretched_exp_decay,
    uniform_on_ball,
    uniform_on_set,
)

from .files import load_measure_file, read_element_set

GROUP_GRAMMAR = "zd:<d> | free:<k> | heis | lamp | canopy:<D> | graph:<path> | product:<A>+<B>"
MEASURE_GRAMMAR = (
    "uniform-ball:<n> | uniform-set:<file> | poly:<s>,<R> | sexp:<r>,<s>,<R> | file:<path>"
)


def _int_arg(value: str, spec: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise UsageError(f"expected an integer in {spec!r}") from None


def _float_args(value: str, count: int, spec: str) -> list[float]:
    parts = value.split(",")
    if len(parts) != count:
        raise UsageError(f"{spec!r} needs {count} comma-separated parameters")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise UsageError(f"non-numeric parameter in {spec!r}") from None


@lru_cache(maxsize=64)
def parse_group(spec: str) -> GroupContext:
    """Build (once per process) the context named by ``spec``.

    Contexts are cached so their BFS tables are shared by every caller.
    """
    spec = spec.strip()
    kind, _, arg = spec.partition(":")
    if kind == "zd":
        return LatticeGroup(_int_arg(arg, spec))
    if kind == "free":
        return FreeGroup(_int_arg(arg, spec))
    if kind == "heis" and not arg:
        return HeisenbergGroup()
    if kind == "lamp" and not arg:
        return LamplighterGroup()
    if kind == "canopy":
        return CanopyTree(_int_arg(arg, spec))
    if kind == "graph" and arg:
        return EdgeListGraph.from_file(arg)
    if kind == "product":
        left, sep, right = arg.partition("+")
        if not sep:
            raise UsageError(f"product spec needs '<A>+<B>': {spec!r}")
        return ProductGroup(parse_group(left), parse_group(right))
    raise UsageError(f"unknown group spec {spec!r}; expected {GROUP_GRAMMAR}")


def parse_measure(ctx: GroupContext, spec: str) -> Measure:
    """Build the measure named by ``spec`` on ``ctx``."""
    spec = spec.strip()
    kind, _, arg = spec.partition(":")
    if not arg:
        raise UsageError(f"measure spec {spec!r} has no parameters; expected {MEASURE_GRAMMAR}")
    if kind == "uniform-ball":
        return uniform_on_ball(ctx, _int_arg(arg, spec))
    if kind == "uniform-set":
        return uniform_on_set(ctx, read_element_set(ctx, arg))
    if kind == "poly":
        s, R = _float_args(arg, 2, spec)
        if not R.is_integer():
            raise UsageError(f"radius R must be an integer in {spec!r}")
        return poly_decay(ctx, s, int(R))
    if kind == "sexp":
        r, s, R = _float_args(arg, 3, spec)
        if not R.is_integer():
            raise UsageError(f"radius R must be an integer in {spec!r}")
        return stretched_exp_decay(ctx, r, s, int(R))
    if kind == "file":
        return load_measure_file(ctx, arg)[0]
    raise UsageError(f"unknown measure spec {spec!r}; expected {MEASURE_GRAMMAR}")
