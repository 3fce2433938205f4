"""Random-walk diagnostics: return probabilities, spectral radius and isoperimetry."""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Literal

import numpy as np

from pdim_lab.core.errors import CapExceededError, UsageError
from pdim_lab.core.groups import Element, FreeGroup, GroupContext, ball
from pdim_lab.core.measures import Measure
from pdim_lab.settings import get_settings

logger = logging.getLogger(__name__)

ReturnMode = Literal["element-convolution", "radial-chain", "matrix-power"]

# largest ball the dense matrix-power oracle will build
_DENSE_LIMIT = 4096


@dataclass(frozen=True)
class ReturnTable:
    """p_n = P(walk started at e is back at e after n steps), n = 0..n_max."""

    measure: Measure
    p: tuple[Fraction | float, ...]
    mode: ReturnMode
    exact: bool

    @property
    def n_max(self) -> int:
        return len(self.p) - 1


@dataclass(frozen=True)
class RhoEstimate:
    rho: float
    n: int
    raw: tuple[tuple[int, float], ...]


@dataclass(frozen=True)
class KestenVerdict:
    inverse_size: float
    rho_squared: float
    passed: bool


@dataclass(frozen=True)
class CheegerRow:
    label: str
    size: int
    boundary: int
    ratio: float


@dataclass(frozen=True)
class CheegerReport:
    """Edge-isoperimetric ratios over a family of finite sets.

    ``iota_upper`` is the smallest ratio seen, an upper bound on the Cheeger
    constant. The percolation bound 1/(d * iota) is recorded as ``raw`` and, with
    iota normalised by the degree, as ``degree_normalized``.
    """

    iota_upper: float
    degree: int
    rows: tuple[CheegerRow, ...]
    bound_raw: float
    bound_degree_normalized: float
    kesten_lower: float | None = None
    kesten_consistent: bool | None = None


def _is_uniform_free_generators(mu: Measure) -> bool:
    ctx = mu.context
    if not isinstance(ctx, FreeGroup):
        return False
    if set(mu.support) != set(ctx.generators):
        return False
    return mu.exact is not None and len(set(mu.exact)) == 1


def _radial_chain(k: int, n_max: int) -> list[Fraction]:
    """Distance-to-identity chain of simple random walk on the 2k-regular tree."""
    counts: dict[int, int] = {0: 1}
    out = [Fraction(1)]
    degree = 2 * k
    for t in range(1, n_max + 1):
        horizon = n_max - t
        nxt: dict[int, int] = {}
        for d, c in counts.items():
            if d + 1 <= horizon:
                nxt[d + 1] = nxt.get(d + 1, 0) + c * (degree if d == 0 else degree - 1)
            if d > 0:
                nxt[d - 1] = nxt.get(d - 1, 0) + c
        counts = nxt
        out.append(Fraction(counts.get(0, 0), degree**t))
    return out


def _element_convolution(mu: Measure, n_max: int, exact: bool) -> list[Fraction | float]:
    ctx = mu.context
    cap = get_settings().element_cap
    length = ctx.word_length
    if exact:
        assert mu.exact is not None
        denom = lcm(*(q.denominator for q in mu.exact))
        steps: Sequence[tuple[Element, int | float]] = [
            (s, int(q * denom)) for s, q in zip(mu.support, mu.exact)
        ]
    else:
        denom = 1
        steps = list(zip(mu.support, mu.masses))

    reach = _max_step(mu)
    dist: dict[Element, int | float] = {ctx.identity: 1}
    out: list[Fraction | float] = [Fraction(1) if exact else 1.0]
    for t in range(1, n_max + 1):
        horizon = n_max - t
        nxt: dict[Element, int | float] = {}
        for g, w in dist.items():
            for s, a in steps:
                h = ctx.mul(g, s)
                # h can no longer return to e within the remaining steps
                if length(h) > horizon * reach:
                    continue
                nxt[h] = nxt.get(h, 0) + w * a
        if len(nxt) > cap:
            raise CapExceededError(
                f"convolution support exceeds cap {cap} at step {t}", cap=cap, partial=(t,)
            )
        dist = nxt
        back = dist.get(ctx.identity, 0)
        out.append(Fraction(int(back), denom**t) if exact else float(back))
    return out


def _max_step(mu: Measure) -> int:
    return max(mu.context.word_length(s) for s in mu.support)


def _matrix_power(mu: Measure, n_max: int) -> list[float]:
    """Float p_n read off the n-th power of the walk matrix restricted to a ball.

    A walk that is back at e after n steps stays within (n // 2) * reach of e, so
    the restriction to B((n_max // 2) * reach) loses none of the returning paths.
    """
    ctx = mu.context
    radius = (n_max // 2) * _max_step(mu)
    elements = ball(ctx, radius).elements
    if len(elements) > _DENSE_LIMIT:
        raise CapExceededError(
            f"matrix-power ball B({radius}) has {len(elements)} elements, above {_DENSE_LIMIT}",
            cap=_DENSE_LIMIT,
            partial=(len(elements),),
        )
    index = {g: i for i, g in enumerate(elements)}
    P = np.zeros((len(elements), len(elements)))
    for g, i in index.items():
        for s, a in zip(mu.support, mu.masses):
            j = index.get(ctx.mul(g, s))
            if j is not None:
                P[i, j] += a
    e = index[ctx.identity]
    return [float(np.linalg.matrix_power(P, n)[e, e]) for n in range(n_max + 1)]


def return_probabilities(
    mu: Measure, n_max: int, mode: ReturnMode | None = None
) -> ReturnTable:
    """Exact p_0..p_{n_max}.

    Uniform generator measures on F_k use the distance birth-death chain
    (``radial-chain``); everything else convolves mu over the group.
    ``matrix-power`` is a float cross-check built from the dense walk matrix.
    """
    if n_max < 0:
        raise UsageError(f"n_max must be >= 0, got {n_max}")
    if mu.is_graph:
        raise UsageError("return probabilities need a measure on a group")
    if mode is None:
        mode = "radial-chain" if _is_uniform_free_generators(mu) else "element-convolution"
    if mode == "radial-chain":
        if not _is_uniform_free_generators(mu):
            raise UsageError("radial-chain mode needs the uniform generator measure on F_k")
        assert isinstance(mu.context, FreeGroup)
        p: list[Fraction | float] = list(_radial_chain(mu.context.k, n_max))
        return ReturnTable(measure=mu, p=tuple(p), mode=mode, exact=True)
    if mode == "matrix-power":
        return ReturnTable(
            measure=mu, p=tuple(_matrix_power(mu, n_max)), mode=mode, exact=False
        )
    exact = mu.exact is not None
    p = _element_convolution(mu, n_max, exact)
    return ReturnTable(measure=mu, p=tuple(p), mode="element-convolution", exact=exact)


def rho_estimate(table: ReturnTable) -> RhoEstimate:
    """Ratio estimator sqrt(p_{2m+2} / p_{2m}) at the largest tabulated m."""
    if table.n_max < 20:
        raise UsageError(f"rho_estimate needs n_max >= 20, got {table.n_max}")
    top = table.n_max - table.n_max % 2
    p_top, p_prev = float(table.p[top]), float(table.p[top - 2])
    if p_prev <= 0 or p_top <= 0:
        raise UsageError("walk does not return at even times; rho is undefined")
    raw = tuple(
        (n, float(table.p[n]) ** (1.0 / n)) for n in range(2, top + 1, 2) if table.p[n] > 0
    )
    return RhoEstimate(rho=math.sqrt(p_top / p_prev), n=top, raw=raw)


def kesten_inequality_check(s_size: int, rho: float, tolerance: float = 1e-9) -> KestenVerdict:
    """1/|S| <= rho^2 for the uniform walk on a symmetric generating set S."""
    if s_size < 1:
        raise UsageError(f"generating set size must be >= 1, got {s_size}")
    inverse = 1.0 / s_size
    return KestenVerdict(
        inverse_size=inverse, rho_squared=rho * rho, passed=inverse <= rho * rho + tolerance
    )


def edge_boundary(ctx: GroupContext, F: Iterable[Element]) -> int:
    """Number of edges with exactly one endpoint in F."""
    members = set(F)
    return sum(1 for g in members for w in ctx.neighbours(g) if w not in members)


def cheeger_report(
    ctx: GroupContext,
    family: Sequence[tuple[str, Iterable[Element]]] | None = None,
    radii: Sequence[int] = (0, 1, 2, 3, 4),
    rho: float | None = None,
) -> CheegerReport:
    """|boundary F| / |F| over a family of finite sets, balls B(r) by default."""
    if family is None:
        family = [(f"B({r})", ball(ctx, r).elements) for r in radii]
    rows: list[CheegerRow] = []
    for label, F in family:
        members = set(F)
        if not members:
            raise UsageError(f"set {label} is empty")
        boundary = edge_boundary(ctx, members)
        ratio = boundary / len(members)
        rows.append(CheegerRow(label=label, size=len(members), boundary=boundary, ratio=ratio))
    degree = ctx.degree
    iota = min(row.ratio for row in rows)
    bound_raw = math.inf if iota == 0 else 1.0 / (degree * iota)
    bound_normalized = math.inf if iota == 0 else 1.0 / iota
    logger.info(
        "%s: iota <= %.6g, p_c bound raw %.6g, degree-normalised %.6g",
        ctx.spec,
        iota,
        bound_raw,
        bound_normalized,
    )
    kesten_lower = kesten_ok = None
    if rho is not None:
        kesten_lower = 1.0 - rho
        kesten_ok = iota / degree >= kesten_lower - 1e-12
        logger.info("%s: Kesten lower bound on iota/d = %.6g", ctx.spec, kesten_lower)
    return CheegerReport(
        iota_upper=iota,
        degree=degree,
        rows=tuple(rows),
        bound_raw=bound_raw,
        bound_degree_normalized=bound_normalized,
        kesten_lower=kesten_lower,
        kesten_consistent=kesten_ok,
    )
