"""Weighted self-avoiding walks: sigma_n(mu), connective-constant bounds and cross-checks.

A walk e = g_0, g_1, ..., g_n of distinct elements has weight
prod mu(g_{i-1}^-1 g_i); for symmetric mu this is the same as
prod mu(g_i g_{i-1}^-1). One depth-first enumeration fills every sigma_0..sigma_n.
"""

from __future__ import annotations

import logging
import math
import threading
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import lcm

from pdim_lab.common_utils.parallel import ordered_map
from pdim_lab.core.errors import CapExceededError, UsageError
from pdim_lab.core.groups import Element, GroupContext
from pdim_lab.core.measures import Measure, max_atom, uniform_on_set
from pdim_lab.core.percolation import LambdaCEstimate
from pdim_lab.settings import get_settings

logger = logging.getLogger(__name__)

_UNIT_ROUNDOFF = 2.0**-53

Value = Fraction | float
StepFn = Callable[[Element], Iterable[tuple[Element, int | float]]]


@dataclass(frozen=True)
class SawTable:
    """sigma_0..sigma_n for one measure.

    ``sigma`` holds Fractions in exact mode and floats otherwise; ``error_bounds``
    bounds the absolute floating error per n (all zero in exact mode).
    """

    measure: Measure
    sigma: tuple[Value, ...]
    exact: bool
    walks: tuple[int, ...]
    error_bounds: tuple[float, ...]

    @property
    def n_max(self) -> int:
        return len(self.sigma) - 1


@dataclass(frozen=True)
class NuBound:
    bounds: tuple[tuple[int, float], ...]
    best_n: int
    best: float


@dataclass(frozen=True)
class NumuRow:
    n: int
    sigma: Fraction
    scaled: Fraction
    saw_count: int
    ok: bool


@dataclass(frozen=True)
class LacocoVerdict:
    passed: bool
    vacuous: bool
    lambda_hat: float | None
    rows: tuple[tuple[int, float, bool], ...]


@dataclass(frozen=True)
class AtomDragReport:
    atom: Element
    delta: float
    bounds: tuple[tuple[int, float], ...]
    drag_bound: float


class _Neumaier:
    __slots__ = ("total", "compensation")

    def __init__(self) -> None:
        self.total = 0.0
        self.compensation = 0.0

    def add(self, x: float) -> None:
        t = self.total + x
        if abs(self.total) >= abs(x):
            self.compensation += (self.total - t) + x
        else:
            self.compensation += (x - t) + self.total
        self.total = t

    def merge(self, other: _Neumaier) -> None:
        self.add(other.total)
        self.compensation += other.compensation

    @property
    def value(self) -> float:
        return self.total + self.compensation


class _WalkBudget:
    """Walk count shared by every branch of one enumeration."""

    def __init__(self, cap: int) -> None:
        self.cap = cap
        self.used = 0
        self._lock = threading.Lock()

    def take(self, partial: Sequence[int]) -> None:
        with self._lock:
            self.used += 1
            over = self.used > self.cap
        if over:
            raise CapExceededError(
                f"walk enumeration exceeds cap {self.cap}", cap=self.cap, partial=tuple(partial)
            )


def _enumerate(
    root: Element, steps: StepFn, n_max: int, exact: bool, cap: int, workers: int
) -> tuple[list[int | _Neumaier], list[int]]:
    """Per-depth weight sums and walk counts over all SAWs from ``root`` up to ``n_max``."""

    def new_sums() -> list[int | _Neumaier]:
        return [0 if exact else _Neumaier() for _ in range(n_max + 1)]

    budget = _WalkBudget(cap)

    def branch(first: tuple[Element, int | float]) -> tuple[list[int | _Neumaier], list[int]]:
        sums = new_sums()
        counts = [0] * (n_max + 1)
        path = {root}

        def visit(v: Element, depth: int, weight: int | float) -> None:
            budget.take(counts)
            counts[depth] += 1
            if exact:
                sums[depth] += weight  # type: ignore[operator]
            else:
                sums[depth].add(weight)  # type: ignore[union-attr]
            if depth == n_max:
                return
            for u, b in steps(v):
                if u in path:
                    continue
                path.add(u)
                visit(u, depth + 1, weight * b)
                path.remove(u)

        w, a = first
        path.add(w)
        visit(w, 1, a)
        return sums, counts

    sums = new_sums()
    counts = [0] * (n_max + 1)
    counts[0] = 1
    budget.take(counts)
    if exact:
        sums[0] = 1
    else:
        sums[0].add(1.0)  # type: ignore[union-attr]
    if n_max == 0:
        return sums, counts

    firsts = [step for step in steps(root) if step[0] != root]
    for part_sums, part_counts in ordered_map(branch, firsts, workers):
        for d in range(1, n_max + 1):
            if exact:
                sums[d] += part_sums[d]  # type: ignore[operator]
            else:
                sums[d].merge(part_sums[d])  # type: ignore[union-attr,arg-type]
            counts[d] += part_counts[d]
    return sums, counts


def _rational_steps(mu: Measure) -> tuple[StepFn, int]:
    """Integer numerators over a common denominator D."""
    ctx = mu.context
    if mu.is_graph:
        denom = ctx.degree

        def graph_steps(v: Element) -> Iterable[tuple[Element, int]]:
            return ((w, 1) for w in ctx.neighbours(v))

        return graph_steps, denom
    assert mu.exact is not None
    denom = lcm(*(q.denominator for q in mu.exact))
    numerators = [(s, int(q * denom)) for s, q in zip(mu.support, mu.exact)]
    mul = ctx.mul

    def group_steps(v: Element) -> Iterable[tuple[Element, int]]:
        return ((mul(v, s), a) for s, a in numerators)

    return group_steps, denom


def saw_table(
    mu: Measure, n_max: int, exact: bool | None = None, workers: int = 1
) -> SawTable:
    """Tabulate sigma_0..sigma_{n_max}.

    Exact rational arithmetic is used automatically when every atom is rational
    and ``n_max`` is within the configured exact limit; ``exact=True`` forces it.

    Raises:
        UsageError: If n_max < 0, or exact mode is forced on a non-rational measure.
        CapExceededError: If the number of walks exceeds the walk cap.
    """
    if n_max < 0:
        raise UsageError(f"n must be >= 0, got {n_max}")
    settings = get_settings()
    if exact is None:
        exact = mu.is_rational and n_max <= settings.exact_n_max
    elif exact and not mu.is_rational:
        raise UsageError(f"exact mode needs rational atoms; {mu.provenance} has none")

    root = mu.context.identity
    if exact:
        steps, denom = _rational_steps(mu)
        sums, counts = _enumerate(root, steps, n_max, True, settings.walk_cap, workers)
        sigma: tuple[Value, ...] = tuple(
            Fraction(int(s), denom**n) for n, s in enumerate(sums)  # type: ignore[arg-type]
        )
        errors = tuple(0.0 for _ in sigma)
    else:
        sums, counts = _enumerate(root, mu.steps, n_max, False, settings.walk_cap, workers)
        values = [s.value for s in sums]  # type: ignore[union-attr]
        sigma = tuple(values)
        errors = tuple(
            v * (n + 2) * _UNIT_ROUNDOFF / (1 - (n + 2) * _UNIT_ROUNDOFF)
            for n, v in enumerate(values)
        )
    logger.debug("sigma table for %s to n=%d, exact=%s", mu.provenance, n_max, exact)
    return SawTable(
        measure=mu, sigma=sigma, exact=exact, walks=tuple(counts), error_bounds=errors
    )


def sigma_n(mu: Measure, n: int, exact: bool | None = None) -> Value:
    """Total weight of length-n self-avoiding walks from the identity."""
    return saw_table(mu, n, exact).sigma[n]


def saw_count(ctx: GroupContext, n: int, workers: int = 1) -> int:
    """Number of self-avoiding walks of length n from the root of the (Cayley) graph."""
    if n < 0:
        raise UsageError(f"n must be >= 0, got {n}")

    def unit_steps(v: Element) -> Iterable[tuple[Element, int]]:
        return ((w, 1) for w in ctx.neighbours(v))

    _, counts = _enumerate(ctx.identity, unit_steps, n, True, get_settings().walk_cap, workers)
    return counts[n]


def _set_saw_counts(ctx: GroupContext, S: Sequence[Element], n_max: int) -> list[int]:
    mul = ctx.mul

    def steps(v: Element) -> Iterable[tuple[Element, int]]:
        return ((mul(v, s), 1) for s in S)

    _, counts = _enumerate(ctx.identity, steps, n_max, True, get_settings().walk_cap, 1)
    return counts


def check_numu(ctx: GroupContext, S: Sequence[Element], n_max: int) -> list[NumuRow]:
    """Check sigma_n(uniform on S) * |S|^n == c_n(Cay(G, S)) exactly for n <= n_max."""
    mu = uniform_on_set(ctx, S)
    table = saw_table(mu, n_max, exact=True)
    size = len(mu.support)
    counts = _set_saw_counts(ctx, mu.support, n_max)
    rows: list[NumuRow] = []
    for n in range(n_max + 1):
        sigma = Fraction(table.sigma[n])
        scaled = sigma * size**n
        rows.append(
            NumuRow(n=n, sigma=sigma, scaled=scaled, saw_count=counts[n], ok=scaled == counts[n])
        )
    return rows


def _root(value: Value, n: int) -> float:
    return float(value) ** (1.0 / n) if value > 0 else 0.0


def nu_upper(table: SawTable) -> NuBound:
    """sigma_n^(1/n) for every tabulated n >= 1; each is an upper bound on nu(mu)."""
    if table.n_max < 1:
        raise UsageError("nu_upper needs sigma_n for some n >= 1")
    bounds = tuple((n, _root(table.sigma[n], n)) for n in range(1, table.n_max + 1))
    best_n, best = min(bounds, key=lambda item: (item[1], item[0]))
    return NuBound(bounds=bounds, best_n=best_n, best=best)


def check_lacoco(
    estimate: LambdaCEstimate, table: SawTable, tolerance: float = 0.02
) -> LacocoVerdict:
    """lambda_hat >= (1/sigma_n^(1/n)) (1 - tolerance) for every tabulated n; capped passes."""
    bounds = nu_upper(table).bounds
    if estimate.capped or estimate.lambda_hat is None:
        rows = tuple((n, 1.0 / b if b > 0 else math.inf, True) for n, b in bounds)
        return LacocoVerdict(passed=True, vacuous=True, lambda_hat=None, rows=rows)
    lam = estimate.lambda_hat
    out: list[tuple[int, float, bool]] = []
    for n, b in bounds:
        lower = 1.0 / b if b > 0 else math.inf
        out.append((n, lower, lam >= lower * (1 - tolerance)))
    return LacocoVerdict(
        passed=all(ok for _, _, ok in out), vacuous=False, lambda_hat=lam, rows=tuple(out)
    )


def atom_drag_report(mu: Measure, n_max: int, workers: int = 1) -> AtomDragReport:
    """Largest atom delta next to the finite-n bounds sigma_n^(1/n); 1 - delta/2 is the drag."""
    atom, delta = max_atom(mu)
    bounds = nu_upper(saw_table(mu, n_max, workers=workers)).bounds
    return AtomDragReport(atom=atom, delta=delta, bounds=bounds, drag_bound=1 - delta / 2)


def ratio_estimates(table: SawTable) -> list[tuple[int, float]]:
    """sigma_n / sigma_{n-1}; a diagnostic for nu, not a bound."""
    out: list[tuple[int, float]] = []
    for n in range(1, table.n_max + 1):
        prev = table.sigma[n - 1]
        out.append((n, float(table.sigma[n]) / float(prev) if prev else 0.0))
    return out


def submultiplicative_violations(table: SawTable) -> list[tuple[int, int]]:
    """Pairs (m, n) with sigma_{m+n} > sigma_m * sigma_n (beyond the floating error bound)."""
    bad: list[tuple[int, int]] = []
    for m, n in combinations_with_replacement(range(1, table.n_max + 1), 2):
        if m + n > table.n_max:
            continue
        lhs = table.sigma[m + n]
        rhs = table.sigma[m] * table.sigma[n]
        slack = 0.0
        if not table.exact:
            slack = table.error_bounds[m + n] + 4 * _UNIT_ROUNDOFF * float(rhs)
        if lhs > rhs + slack:
            bad.append((m, n))
    return bad
