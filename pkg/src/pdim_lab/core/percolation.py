"""Long-range percolation G^mu(lambda): cluster exploration, survival and lambda_c.

A pair {g, h} is joined by Poisson(lambda * mu(g^-1 h)) parallel edges; for
connectivity only presence matters, so each pair is open with probability
1 - exp(-lambda * mu(g^-1 h)). Every pair draws its uniform from a counter-based
stream keyed by (seed, trial, pair), which makes clusters independent of
exploration order and nested in lambda for a fixed seed.

Two threshold estimators share one bisection:

- ``growth`` (default): the pooled offspring ratio between successive
  generations of the identity cluster crosses 1. On a tree this ratio has mean
  (2k - 1)(1 - e^(-lambda/2k)) at every depth, so the crossing is lambda_c itself.
- ``theta``: the escape frequency to word length L crosses theta, a
  pseudo-critical point that tends to the lambda where survival equals theta.
"""

from __future__ import annotations

import logging
import math
from collections import Counter, deque
from collections.abc import Sequence
from dataclasses import dataclass, field, replace
from typing import Literal

import numpy as np
from networkx.utils import UnionFind
from scipy.optimize import brentq

from pdim_lab.common_utils.parallel import chunk_ranges, ordered_map
from pdim_lab.common_utils.rng import cached_key, pair_uniform, trial_generator, trial_stream
from pdim_lab.common_utils.stats import ratio_interval, wilson_interval
from pdim_lab.core.errors import UsageError
from pdim_lab.core.groups import Element, ball
from pdim_lab.core.measures import Measure
from pdim_lab.settings import get_settings

logger = logging.getLogger(__name__)

Estimator = Literal["growth", "theta"]
ExploreOrder = Literal["depth", "breadth"]


@dataclass(frozen=True)
class PercConfig:
    """Parameters of one percolation experiment.

    ``escape_radius`` is the window L: a cluster that reaches word length L
    counts as infinite, and the growth estimator follows at most L generations.
    ``growth_budget`` stops expanding generations once the cluster has that many
    vertices.
    """

    lam: float = 0.0
    escape_radius: int = 40
    size_cap: int = 200_000
    trials: int = 2000
    seed: int = 0
    theta: float = 0.5
    lambda_min: float = 1e-3
    lambda_max: float = 64.0
    relative_width: float = 0.01
    window_check: bool = True
    window_drift: float = 0.10
    workers: int = 1
    estimator: Estimator = "growth"
    growth_budget: int = 256

    def __post_init__(self) -> None:
        if self.lam < 0:
            raise UsageError(f"lambda must be >= 0, got {self.lam}")
        if self.escape_radius < 1:
            raise UsageError(f"escape radius L must be >= 1, got {self.escape_radius}")
        if self.trials < 1:
            raise UsageError(f"trials must be >= 1, got {self.trials}")
        if not 0 < self.theta < 1:
            raise UsageError(f"theta must be in (0, 1), got {self.theta}")
        if self.lambda_max < 1:
            raise UsageError(f"lambda_max must be >= 1, got {self.lambda_max}")
        if not 0 < self.lambda_min < self.lambda_max:
            raise UsageError("lambda_min must lie in (0, lambda_max)")
        if self.size_cap < 1:
            raise UsageError(f"size cap must be >= 1, got {self.size_cap}")
        if self.relative_width <= 0 or self.window_drift <= 0:
            raise UsageError("relative_width and window_drift must be > 0")
        if self.workers < 1:
            raise UsageError(f"workers must be >= 1, got {self.workers}")
        if self.estimator not in ("growth", "theta"):
            raise UsageError(f"unknown estimator {self.estimator!r}; use growth or theta")
        if self.growth_budget < 2:
            raise UsageError(f"growth budget must be >= 2, got {self.growth_budget}")

    @classmethod
    def from_settings(cls, **overrides: object) -> PercConfig:
        s = get_settings()
        values: dict[str, object] = {
            "escape_radius": s.escape_radius,
            "size_cap": s.size_cap,
            "trials": s.trials,
            "theta": s.theta,
            "lambda_min": s.lambda_min,
            "lambda_max": s.lambda_max,
            "relative_width": s.relative_width,
            "window_drift": s.window_drift,
            "workers": s.workers,
            "estimator": s.estimator,
            "growth_budget": s.growth_budget,
        }
        values.update(overrides)
        return cls(**values)  # type: ignore[arg-type]

    def with_lambda(self, lam: float) -> PercConfig:
        return replace(self, lam=lam)


@dataclass(frozen=True)
class ClusterStats:
    """Outcome of one exploration.

    ``escaped`` and ``reached_target`` do not depend on the exploration order.
    ``size`` and ``max_length`` do once the walk stops early at escape or at the
    size cap.
    """

    size: int
    max_length: int
    escaped: bool
    truncated: bool
    edge_examinations: int
    reached_target: bool = False


@dataclass(frozen=True)
class GenerationStats:
    """Generation counts of one trial.

    ``parents`` sums the sizes of expanded generations 1, 2, ...; ``children``
    sums the sizes of the generations they produced.
    """

    parents: int
    children: int
    generations: int
    size: int
    budget_stop: bool


@dataclass(frozen=True)
class SurvivalEstimate:
    """Escape (or connection) frequency over independent trials."""

    lam: float
    p_hat: float
    ci: tuple[float, float]
    successes: int
    trials: int
    truncated: int = 0

    @property
    def statistic(self) -> float:
        return self.p_hat


@dataclass(frozen=True)
class GrowthEstimate:
    """Pooled offspring ratio children / parents with a delta-method 95% CI."""

    lam: float
    ratio: float
    ci: tuple[float, float]
    parents: int
    children: int
    trials: int
    budget_stops: int = 0

    @property
    def statistic(self) -> float:
        return self.ratio


Evaluation = SurvivalEstimate | GrowthEstimate


@dataclass(frozen=True)
class LambdaCEstimate:
    """Bisection estimate of lambda_c.

    ``lambda_hat`` is None when capped. ``ci`` is bounded by the nearest evaluated lambdas
    whose intervals lie entirely on either side of the crossing level: 1 for the
    growth estimator, theta for the escape frequency.
    """

    lambda_hat: float | None
    bracket: tuple[float, float]
    ci: tuple[float, float]
    evaluations: tuple[Evaluation, ...]
    capped: bool
    escape_radius: int
    theta: float
    cap_reason: str | None = None
    window_lambda_hat: float | None = None
    caveat: str = ""
    estimator: Estimator = "growth"


@dataclass(frozen=True)
class GiantComponentResult:
    fraction: float
    histogram: dict[int, int] = field(default_factory=dict)


class TrialEdges:
    """Edge outcomes of one trial, memoised per unordered pair."""

    def __init__(self, lam: float, seed: int, trial_index: int) -> None:
        self._lam = lam
        self._stream = trial_stream(seed, trial_index)
        self._outcomes: dict[tuple[int, int], bool] = {}
        self.examinations = 0

    def uniform(self, g: Element, h: Element) -> float:
        return pair_uniform(self._stream, cached_key(g), cached_key(h))

    def present(self, g: Element, h: Element, mass: float) -> bool:
        a, b = cached_key(g), cached_key(h)
        pair = (a, b) if a <= b else (b, a)
        outcome = self._outcomes.get(pair)
        if outcome is None:
            self.examinations += 1
            outcome = pair_uniform(self._stream, a, b) < -math.expm1(-self._lam * mass)
            self._outcomes[pair] = outcome
        return outcome


def edge_presence_prob(mu: Measure, lam: float, g: Element, h: Element) -> float:
    """1 - exp(-lambda * mu(g^-1 h)); 0 off the support."""
    if lam < 0:
        raise UsageError(f"lambda must be >= 0, got {lam}")
    return -math.expm1(-lam * mu.pair_mass(g, h))


def sample_parallel_edge_count(
    mu: Measure, lam: float, g: Element, h: Element, rng: np.random.Generator
) -> int:
    """Poisson(lambda * mu(g^-1 h)) multiplicity; degree diagnostics only."""
    if lam < 0:
        raise UsageError(f"lambda must be >= 0, got {lam}")
    mean = lam * mu.pair_mass(g, h)
    return int(rng.poisson(mean)) if mean > 0 else 0


def expected_simple_degree(mu: Measure, lam: float) -> float:
    """Expected number of distinct neighbours of the identity."""
    if lam < 0:
        raise UsageError(f"lambda must be >= 0, got {lam}")
    return math.fsum(-math.expm1(-lam * m) for _, m in mu.steps(mu.context.identity))


def explore_cluster(
    mu: Measure,
    cfg: PercConfig,
    trial_index: int,
    target: Element | None = None,
    order: ExploreOrder = "depth",
) -> ClusterStats:
    """Explore the open cluster of the identity in one trial.

    Stops when a vertex of word length ``escape_radius`` is reached, when the
    cluster hits ``size_cap``, or when it is exhausted. With ``target`` the
    exploration is confined to the geodesic interval between the identity and
    ``target`` and stops once it is reached.

    ``order="depth"`` pops the frontier LIFO, which reaches the window without
    exhausting whole generations of a supercritical cluster; ``"breadth"`` pops
    FIFO. Edge outcomes are fixed per pair, so both orders agree on every escape
    and connection indicator; the recorded size at an early stop differs.
    """
    ctx = mu.context
    root = ctx.identity
    if cfg.lam == 0 or target == root:
        return ClusterStats(
            size=1,
            max_length=0,
            escaped=False,
            truncated=False,
            edge_examinations=0,
            reached_target=target == root,
        )

    edges = TrialEdges(cfg.lam, cfg.seed, trial_index)
    length = ctx.word_length
    span = length(target) if target is not None else 0
    L = cfg.escape_radius

    seen = {root}
    frontier: deque[Element] = deque([root])
    take = frontier.pop if order == "depth" else frontier.popleft
    max_length = 0
    escaped = truncated = reached = False
    while frontier and not (escaped or truncated or reached):
        v = take()
        for w, mass in mu.steps(v):
            if w in seen:
                continue
            lw = length(w)
            if target is not None and lw + ctx.distance(w, target) > span:
                continue
            if not edges.present(v, w, mass):
                continue
            seen.add(w)
            max_length = max(max_length, lw)
            if target is None:
                if lw >= L:
                    escaped = True
                    break
            elif w == target:
                reached = True
                break
            if len(seen) >= cfg.size_cap:
                truncated = True
                break
            frontier.append(w)

    return ClusterStats(
        size=len(seen),
        max_length=max_length,
        escaped=escaped,
        truncated=truncated,
        edge_examinations=edges.examinations,
        reached_target=reached,
    )


def explore_generations(mu: Measure, cfg: PercConfig, trial_index: int) -> GenerationStats:
    """Grow the identity cluster one generation at a time.

    Generation g + 1 holds the unseen vertices joined by an open edge to
    generation g. Generation g >= 1 is expanded while g < ``escape_radius`` and
    the cluster has fewer than ``growth_budget`` vertices; that decision only
    looks at generations 0..g, so children / parents stays an unbiased offspring
    mean on trees.
    """
    if cfg.lam == 0:
        return GenerationStats(parents=0, children=0, generations=0, size=1, budget_stop=False)

    edges = TrialEdges(cfg.lam, cfg.seed, trial_index)
    root = mu.context.identity
    seen = {root}
    layer = [root]
    parents = children = 0
    depth = 0
    budget_stop = False
    while layer and depth < cfg.escape_radius:
        if depth >= 1 and len(seen) >= cfg.growth_budget:
            budget_stop = True
            break
        nxt: list[Element] = []
        for v in layer:
            for w, mass in mu.steps(v):
                if w in seen:
                    continue
                if edges.present(v, w, mass):
                    seen.add(w)
                    nxt.append(w)
        if depth >= 1:
            # the identity is never a parent: it has one neighbour more than later vertices
            parents += len(layer)
            children += len(nxt)
        layer = nxt
        depth += 1

    return GenerationStats(
        parents=parents,
        children=children,
        generations=depth,
        size=len(seen),
        budget_stop=budget_stop,
    )


def open_cluster(
    mu: Measure, cfg: PercConfig, trial_index: int, radius: int
) -> frozenset[Element]:
    """Every vertex joined to the identity by an open path inside B(radius)."""
    if radius < 0:
        raise UsageError(f"radius must be >= 0, got {radius}")
    ctx = mu.context
    root = ctx.identity
    if cfg.lam == 0:
        return frozenset({root})
    edges = TrialEdges(cfg.lam, cfg.seed, trial_index)
    seen = {root}
    frontier: deque[Element] = deque([root])
    while frontier:
        v = frontier.popleft()
        for w, mass in mu.steps(v):
            if w in seen or ctx.word_length(w) > radius:
                continue
            if edges.present(v, w, mass):
                seen.add(w)
                frontier.append(w)
    return frozenset(seen)


def _count_trials(
    mu: Measure, cfg: PercConfig, target: Element | None
) -> tuple[int, int]:
    def run_chunk(indices: range) -> tuple[int, int]:
        hits = truncated = 0
        for t in indices:
            stats = explore_cluster(mu, cfg, t, target)
            if target is None:
                # a cluster that outgrows the size cap is counted as surviving
                hits += stats.escaped or stats.truncated
            else:
                hits += stats.reached_target
            truncated += stats.truncated
        return hits, truncated

    parts = ordered_map(run_chunk, chunk_ranges(cfg.trials, cfg.workers), cfg.workers)
    return sum(p[0] for p in parts), sum(p[1] for p in parts)


def survival_probability(mu: Measure, cfg: PercConfig) -> SurvivalEstimate:
    """Fraction of trials whose identity cluster escapes to word length L, with 95% Wilson CI."""
    if cfg.lam == 0:
        return SurvivalEstimate(
            lam=0.0, p_hat=0.0, ci=wilson_interval(0, cfg.trials), successes=0, trials=cfg.trials
        )
    hits, truncated = _count_trials(mu, cfg, None)
    if truncated:
        logger.info(
            "lambda=%.6g: %d of %d clusters hit the size cap", cfg.lam, truncated, cfg.trials
        )
    return SurvivalEstimate(
        lam=cfg.lam,
        p_hat=hits / cfg.trials,
        ci=wilson_interval(hits, cfg.trials),
        successes=hits,
        trials=cfg.trials,
        truncated=truncated,
    )


def offspring_ratio(mu: Measure, cfg: PercConfig) -> GrowthEstimate:
    """Pooled children / parents over ``cfg.trials`` generation explorations."""

    def run_chunk(indices: range) -> tuple[int, ...]:
        parents = children = s_cc = s_cp = s_pp = stops = 0
        for t in indices:
            g = explore_generations(mu, cfg, t)
            parents += g.parents
            children += g.children
            s_cc += g.children * g.children
            s_cp += g.children * g.parents
            s_pp += g.parents * g.parents
            stops += g.budget_stop
        return parents, children, s_cc, s_cp, s_pp, stops

    parts = ordered_map(run_chunk, chunk_ranges(cfg.trials, cfg.workers), cfg.workers)
    parents, children, s_cc, s_cp, s_pp, stops = (sum(col) for col in zip(*parts))
    if stops:
        logger.debug(
            "lambda=%.6g: %d of %d trials stopped at the growth budget", cfg.lam, stops, cfg.trials
        )
    return GrowthEstimate(
        lam=cfg.lam,
        ratio=children / parents if parents else 0.0,
        ci=ratio_interval(children, parents, s_cc, s_cp, s_pp),
        parents=parents,
        children=children,
        trials=cfg.trials,
        budget_stops=stops,
    )


def two_point_probability(
    mu: Measure, cfg: PercConfig, target: Element, confidence: float = 0.95
) -> SurvivalEstimate:
    """Probability that the identity connects to ``target`` inside their geodesic interval."""
    if not mu.context.contains(target):
        raise UsageError(f"{target!r} is not an element of {mu.context.spec}")
    hits, truncated = _count_trials(mu, cfg, target)
    return SurvivalEstimate(
        lam=cfg.lam,
        p_hat=hits / cfg.trials,
        ci=wilson_interval(hits, cfg.trials, confidence),
        successes=hits,
        trials=cfg.trials,
        truncated=truncated,
    )


@dataclass
class _Bisection:
    crossing: float | None
    bracket: tuple[float, float]
    evaluations: list[Evaluation]
    reason: str | None = None


def _level(cfg: PercConfig) -> float:
    return 1.0 if cfg.estimator == "growth" else cfg.theta


def _evaluate(mu: Measure, cfg: PercConfig) -> Evaluation:
    if cfg.estimator == "growth":
        return offspring_ratio(mu, cfg)
    return survival_probability(mu, cfg)


def _supercritical(est: Evaluation, cfg: PercConfig) -> bool:
    if isinstance(est, GrowthEstimate):
        # a ratio of exactly 1 is the saturated line, not growth
        return est.ratio > 1.0
    return est.p_hat >= cfg.theta


def _bisect(mu: Measure, cfg: PercConfig) -> _Bisection:
    evaluations: list[Evaluation] = []

    def supercritical_at(lam: float) -> bool:
        est = _evaluate(mu, cfg.with_lambda(lam))
        evaluations.append(est)
        logger.debug(
            "%s L=%d lambda=%.6g statistic=%.4f",
            cfg.estimator,
            cfg.escape_radius,
            lam,
            est.statistic,
        )
        return _supercritical(est, cfg)

    lo, hi = cfg.lambda_min, cfg.lambda_max
    if not supercritical_at(hi):
        if cfg.estimator == "growth":
            what = "offspring ratio stays at or below 1"
        else:
            what = "survival stays below theta"
        return _Bisection(None, (lo, hi), evaluations, f"{what} up to lambda_max={hi:g}")
    if supercritical_at(lo):
        return _Bisection(lo, (lo, lo), evaluations)
    while (hi - lo) / hi >= cfg.relative_width:
        mid = math.sqrt(lo * hi)
        if supercritical_at(mid):
            hi = mid
        else:
            lo = mid
    return _Bisection(math.sqrt(lo * hi), (lo, hi), evaluations)


def _separating_interval(
    evaluations: Sequence[Evaluation], level: float, lo: float, hi: float
) -> tuple[float, float]:
    below = [p.lam for p in evaluations if p.ci[1] < level]
    above = [p.lam for p in evaluations if p.ci[0] > level]
    return (max(below) if below else lo, min(above) if above else hi)


def lambda_c_estimate(mu: Measure, cfg: PercConfig) -> LambdaCEstimate:
    """Estimate lambda_c(mu) by bisection on the configured estimator at window L.

    The result is capped when the statistic never reaches its crossing level up
    to lambda_max, or (with ``window_check``) when the crossing at 2L drifts from
    the one at L by more than ``window_drift``: a crossing that keeps moving with
    the window signals lambda_c = infinity.
    """
    L = cfg.escape_radius
    if cfg.estimator == "growth":
        caveat = f"offspring-ratio crossing over at most L={L} generations"
    else:
        caveat = f"pseudo-critical theta-crossing at finite window L={L}"
    run = _bisect(mu, cfg)
    ci = _separating_interval(run.evaluations, _level(cfg), cfg.lambda_min, cfg.lambda_max)
    capped = LambdaCEstimate(
        lambda_hat=None,
        bracket=run.bracket,
        ci=ci,
        evaluations=tuple(run.evaluations),
        capped=True,
        escape_radius=L,
        theta=cfg.theta,
        cap_reason=run.reason,
        caveat=caveat,
        estimator=cfg.estimator,
    )
    if run.crossing is None:
        logger.info("lambda_c capped for %s: %s", mu.provenance, run.reason)
        return capped

    window_hat: float | None = None
    reason: str | None = None
    if cfg.window_check:
        wide = _bisect(mu, replace(cfg, escape_radius=2 * L))
        window_hat = wide.crossing
        if wide.crossing is None:
            reason = f"window 2L={2 * L}: {wide.reason}"
        else:
            drift = (wide.crossing - run.crossing) / run.crossing
            if drift > cfg.window_drift:
                reason = f"crossing drifts by {drift:.1%} between L={L} and 2L={2 * L}"
    if reason is not None:
        logger.info("lambda_c capped for %s: %s", mu.provenance, reason)
        return replace(capped, cap_reason=reason, window_lambda_hat=window_hat)
    return replace(
        capped,
        lambda_hat=run.crossing,
        capped=False,
        cap_reason=None,
        window_lambda_hat=window_hat,
    )


# -- exact tree oracles ------------------------------------------------------


def _tree_edge_prob(k: int, lam: float) -> float:
    if k < 2:
        raise UsageError(f"tree oracles need k >= 2, got {k}")
    if lam < 0:
        raise UsageError(f"lambda must be >= 0, got {lam}")
    return -math.expm1(-lam / (2 * k))


def tree_oracle_lambda_c(k: int) -> float:
    """Exact lambda_c of F_k with the uniform measure on its 2k generators."""
    if k < 2:
        raise UsageError(f"tree_oracle_lambda_c needs k >= 2, got {k}")
    return 2 * k * math.log((2 * k - 1) / (2 * k - 2))


def tree_escape_probability(k: int, lam: float, L: int) -> float:
    """P(identity cluster reaches word length L) on the 2k-regular tree."""
    if L < 1:
        raise UsageError(f"L must be >= 1, got {L}")
    p = _tree_edge_prob(k, lam)
    fail = 0.0
    for _ in range(L - 1):
        fail = (1 - p + p * fail) ** (2 * k - 1)
    return 1 - (1 - p + p * fail) ** (2 * k)


def tree_survival_probability(k: int, lam: float) -> float:
    """Galton-Watson survival: root Binomial(2k, p), then Binomial(2k-1, p) offspring."""
    p = _tree_edge_prob(k, lam)
    if (2 * k - 1) * p <= 1:
        return 0.0

    def gap(q: float) -> float:
        return (1 - p + p * q) ** (2 * k - 1) - q

    upper = 1 - 1e-12
    if gap(upper) >= 0:
        return 0.0
    extinct = brentq(gap, 0.0, upper, xtol=1e-15)
    return 1 - (1 - p + p * extinct) ** (2 * k)


def tree_theta_crossing(k: int, theta: float, L: int, lambda_max: float = 64.0) -> float:
    """The lambda at which the exact window-L escape probability on F_k equals theta."""
    if not 0 < theta < 1:
        raise UsageError(f"theta must be in (0, 1), got {theta}")
    return brentq(lambda lam: tree_escape_probability(k, lam, L) - theta, 1e-9, lambda_max)


# -- finite weighted graphs ------------------------------------------------------


def ball_weights(mu: Measure, n: int) -> tuple[tuple[Element, ...], np.ndarray]:
    """Pair-weight table mu(g^-1 h) on B(n)."""
    elements = ball(mu.context, n).elements
    index = {g: i for i, g in enumerate(elements)}
    weights = np.zeros((len(elements), len(elements)))
    for i, g in enumerate(elements):
        for w, m in mu.steps(g):
            j = index.get(w)
            if j is not None:
                weights[i, j] = m
    return elements, weights


def complete_graph_weights(n: int) -> np.ndarray:
    """Weight 1/(n-1) on every pair: the Erdos-Renyi scaling."""
    if n < 2:
        raise UsageError(f"need at least 2 vertices, got {n}")
    weights = np.full((n, n), 1.0 / (n - 1))
    np.fill_diagonal(weights, 0.0)
    return weights


def two_clique_weights(n: int) -> np.ndarray:
    """Two complete blocks of size n//2 and n - n//2 with no weight between them."""
    weights = np.zeros((n, n))
    half = n // 2
    for block in (slice(0, half), slice(half, n)):
        size = weights[block, block].shape[0]
        if size > 1:
            weights[block, block] = 1.0 / (size - 1)
    np.fill_diagonal(weights, 0.0)
    return weights


def giant_component(
    vertices: Sequence[object], weights: np.ndarray, lam: float, rng: np.random.Generator
) -> GiantComponentResult:
    """Sample the finite weighted graph once and label components with union-find."""
    n = len(vertices)
    if n == 0:
        raise UsageError("giant_component needs at least one vertex")
    w = np.asarray(weights, dtype=float)
    if w.shape != (n, n):
        raise UsageError(f"weight table must be {n}x{n}, got {w.shape}")
    if (w < 0).any() or not np.allclose(w, w.T):
        raise UsageError("weight table must be symmetric and non-negative")
    if lam < 0:
        raise UsageError(f"lambda must be >= 0, got {lam}")

    rows, cols = np.triu_indices(n, 1)
    probs = -np.expm1(-lam * w[rows, cols])
    present = rng.random(rows.shape[0]) < probs

    components = UnionFind(range(n))
    for a, b in zip(rows[present].tolist(), cols[present].tolist()):
        components.union(a, b)
    sizes = Counter(len(c) for c in components.to_sets())
    largest = max(sizes)
    return GiantComponentResult(fraction=largest / n, histogram=dict(sorted(sizes.items())))


def mean_giant_fraction(
    weights: np.ndarray, lam: float, samples: int, seed: int, workers: int = 1
) -> tuple[float, list[float]]:
    """Average largest-component fraction over independent samples."""
    if samples < 1:
        raise UsageError(f"samples must be >= 1, got {samples}")
    vertices = range(weights.shape[0])

    def one(index: int) -> float:
        return giant_component(vertices, weights, lam, trial_generator(seed, index)).fraction

    fractions = ordered_map(one, range(samples), workers)
    return math.fsum(fractions) / samples, fractions
