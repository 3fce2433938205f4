"""Sweep drivers for percolativity, the percolation/connective dimensions and growth fits.

Sweeps collect evidence over constructed measure families. They never claim a
dimension as a number; verdicts compare 95% intervals, not point values.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any

from pdim_lab.common_utils.parallel import ordered_map
from pdim_lab.common_utils.stats import ci_separated, linear_fit, rms
from pdim_lab.core.errors import CapExceededError, UsageError
from pdim_lab.core.groups import GroupContext, ball
from pdim_lab.core.measures import (
    Measure,
    decay_class,
    max_atom,
    poly_decay,
    stretched_exp_decay,
    uniform_on_ball,
)
from pdim_lab.core.percolation import PercConfig, lambda_c_estimate, tree_oracle_lambda_c
from pdim_lab.core.saw import nu_upper, saw_table
from pdim_lab.settings import get_settings

logger = logging.getLogger(__name__)

PERCOLATIVE = "consistent with percolative"


@dataclass(frozen=True)
class SweepPoint:
    params: dict[str, float]
    lambda_hat: float | None = None
    ci: tuple[float, float] | None = None
    capped: bool = False
    cap_reason: str | None = None
    delta_atom: float | None = None
    nu_upper: float | None = None
    seed: int | None = None
    exact: bool = False
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def as_dict(self) -> dict[str, Any]:
        return {
            "params": dict(self.params),
            "lambda_hat": self.lambda_hat,
            "ci": list(self.ci) if self.ci is not None else None,
            "capped": self.capped,
            "cap_reason": self.cap_reason,
            "delta_atom": self.delta_atom,
            "nu_upper": self.nu_upper,
            "seed": self.seed,
            "exact": self.exact,
            "error": self.error,
        }


@dataclass(frozen=True)
class GrowthFit:
    radii: tuple[int, ...]
    sphere_sizes: tuple[int, ...]
    ball_sizes: tuple[int, ...]
    d_hat: float
    residuals: tuple[float, ...]
    exponential: bool
    s_hat: float | None
    statement: str


@dataclass(frozen=True)
class SweepReport:
    group: str
    family: str
    points: tuple[SweepPoint, ...]
    verdicts: dict[str, Any] = field(default_factory=dict)
    growth: GrowthFit | None = None
    upper_bound: str | None = None

    def as_dict(self) -> dict[str, Any]:
        return {
            "group": self.group,
            "family": self.family,
            "points": [p.as_dict() for p in self.points],
            "verdicts": self.verdicts,
            "upper_bound": self.upper_bound,
        }


@dataclass(frozen=True)
class LBRow:
    n: int
    punctured_ball: int
    hypothesis: bool
    b_min: Fraction | float
    member: bool


@dataclass(frozen=True)
class LBCertificate:
    """Ball-uniform measures sit in M_s^(1/b) wherever |B(n)| - 1 > b n^s."""

    s: float
    b: float
    rows: tuple[LBRow, ...]
    holds: bool
    percolativity: str | None = None


def _estimate_point(
    build: Callable[[], Measure], params: dict[str, float], cfg: PercConfig
) -> SweepPoint:
    try:
        mu = build()
        est = lambda_c_estimate(mu, cfg)
    except CapExceededError as exc:
        logger.warning("sweep point %s failed: %s", params, exc)
        return SweepPoint(params=params, seed=cfg.seed, error=f"cap exceeded: {exc}")
    delta = max_atom(mu)[1] if not mu.is_graph else mu.edge_weight
    return SweepPoint(
        params=params,
        lambda_hat=est.lambda_hat,
        ci=est.ci,
        capped=est.capped,
        cap_reason=est.cap_reason,
        delta_atom=delta,
        seed=cfg.seed,
    )


def _run_points(
    jobs: Sequence[tuple[Callable[[], Measure], dict[str, float]]], cfg: PercConfig
) -> list[SweepPoint]:
    inner = replace(cfg, workers=1)
    return ordered_map(lambda job: _estimate_point(job[0], job[1], inner), jobs, cfg.workers)


def _separated_decrease(points: Sequence[SweepPoint]) -> bool:
    """Each point's interval lies strictly above the next one's."""
    if len(points) < 2 or any(p.ci is None or p.capped for p in points):
        return False
    return all(
        ci_separated(a.ci, b.ci)  # type: ignore[arg-type]
        for a, b in zip(points, points[1:])
    )


def percolativity_sweep(
    ctx: GroupContext, n_list: Sequence[int], cfg: PercConfig, band: float | None = None
) -> SweepReport:
    """lambda_c of uniform_on_ball(n) along n_list.

    The verdict is "consistent with percolative" when the estimates decrease with
    separated intervals and the last lower edge lies within ``band`` of 1.
    """
    n_list = list(n_list)
    if not n_list or any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise UsageError("n_list must be non-empty and strictly increasing")
    band = get_settings().proximity_band if band is None else band

    jobs = [((lambda n=n: uniform_on_ball(ctx, n)), {"n": n}) for n in n_list]
    points = _run_points(jobs, cfg)

    verdicts: dict[str, Any] = {"band": band, "window": cfg.escape_radius}
    failed = [p for p in points if not p.ok]
    if any(p.capped for p in points):
        verdicts["percolative"] = f"not percolative at window L={cfg.escape_radius}"
        verdicts["caveat"] = (
            "capped estimates read lambda_c as infinite; for bounded-range measures on a "
            "line this contradicts lim lambda_c(mu_n) = 1, so percolativity of such graphs "
            "is unresolved in the strict infinite-cluster sense"
        )
    elif failed:
        verdicts["percolative"] = "inconclusive: some points failed"
    else:
        decreasing = _separated_decrease(points)
        last = points[-1].ci
        near = last is not None and last[0] < 1 + band
        verdicts["decreasing"] = decreasing
        verdicts["near_one"] = near
        verdicts["percolative"] = PERCOLATIVE if decreasing and near else "inconclusive"
    return SweepReport(
        group=ctx.spec,
        family=f"uniform-ball over n={n_list}",
        points=tuple(points),
        verdicts=verdicts,
    )


def _frontier(grid: dict[float, list[SweepPoint]], band: float) -> dict[str, str]:
    summary: dict[str, str] = {}
    for s, pts in grid.items():
        key = f"s={s:g}"
        if any(not p.ok for p in pts):
            summary[key] = "inconclusive: some points failed"
        elif all(p.capped for p in pts):
            summary[key] = "capped at every R"
        elif _separated_decrease(pts):
            summary[key] = "decreasing toward 1"
        elif (
            all(not p.capped and p.ci is not None and p.ci[0] > 1 + band for p in pts)
            and pts[-1].delta_atom is not None
            and pts[0].delta_atom is not None
            and pts[-1].delta_atom >= pts[0].delta_atom / 2
        ):
            summary[key] = (
                f"obstructed: atom delta stays >= {pts[-1].delta_atom:.4g}, "
                f"lambda_c separated above {1 + band:g}"
            )
        else:
            summary[key] = "inconclusive"
    return summary


def _grid_sweep(
    ctx: GroupContext,
    family: str,
    builders: list[tuple[Callable[[], Measure], dict[str, float]]],
    cfg: PercConfig,
    band: float,
) -> SweepReport:
    points = _run_points(builders, cfg)
    grid: dict[float, list[SweepPoint]] = {}
    for p in points:
        grid.setdefault(p.params["s"], []).append(p)
    return SweepReport(
        group=ctx.spec,
        family=family,
        points=tuple(points),
        verdicts={"band": band, "frontier": _frontier(grid, band)},
    )


def _check_grid(s_list: Sequence[float], R_list: Sequence[int]) -> None:
    if not s_list or not R_list:
        raise UsageError("sweep grids must be non-empty")
    if any(R < 1 for R in R_list):
        raise UsageError("radii R must be >= 1")


def pdim_sweep(
    ctx: GroupContext,
    s_list: Sequence[float],
    R_list: Sequence[int],
    cfg: PercConfig,
    band: float | None = None,
) -> SweepReport:
    """lambda_c and max atom of poly_decay(s, R) over the (s, R) grid."""
    _check_grid(s_list, R_list)
    band = get_settings().proximity_band if band is None else band
    builders = [
        ((lambda s=s, R=R: poly_decay(ctx, s, R)), {"s": s, "R": R})
        for s in s_list
        for R in R_list
    ]
    family = f"poly-decay over s={list(s_list)}, R={list(R_list)}"
    return _grid_sweep(ctx, family, builders, cfg, band)


def epdim_sweep(
    ctx: GroupContext,
    r: float,
    s_list: Sequence[float],
    R_list: Sequence[int],
    cfg: PercConfig,
    band: float | None = None,
) -> SweepReport:
    """Same frontier analysis over stretched_exp_decay(r, s, R)."""
    _check_grid(s_list, R_list)
    if not 0 < r < 1:
        raise UsageError(f"r must be in (0, 1), got {r}")
    band = get_settings().proximity_band if band is None else band
    builders = [
        ((lambda s=s, R=R: stretched_exp_decay(ctx, r, s, R)), {"r": r, "s": s, "R": R})
        for s in s_list
        for R in R_list
    ]
    family = f"stretched-exp over r={r:g}, s={list(s_list)}, R={list(R_list)}"
    return _grid_sweep(ctx, family, builders, cfg, band)


def tree_oracle_family(k_list: Sequence[int]) -> SweepReport:
    """Exact lambda_c of F_k with uniform generator measures; a surrogate family inside F_2."""
    k_list = list(k_list)
    if not k_list or any(b <= a for a, b in zip(k_list, k_list[1:])):
        raise UsageError("k_list must be non-empty and strictly increasing")
    points = []
    for k in k_list:
        value = tree_oracle_lambda_c(k)
        points.append(
            SweepPoint(
                params={"k": k},
                lambda_hat=value,
                ci=(value, value),
                delta_atom=1 / (2 * k),
                exact=True,
            )
        )
    values = [p.lambda_hat for p in points]
    decreasing = all(a > b for a, b in zip(values, values[1:]))  # type: ignore[operator]
    return SweepReport(
        group="free:k",
        family=f"uniform generators over k={k_list}",
        points=tuple(points),
        verdicts={
            "decreasing": decreasing,
            "above_one": all(v > 1 for v in values),  # type: ignore[operator]
            "epdim": "values decrease toward 1" if decreasing else "inconclusive",
        },
    )


def nudim_sweep(
    ctx: GroupContext,
    s_list: Sequence[float],
    R_list: Sequence[int],
    n: int,
    band: float | None = None,
    workers: int = 1,
) -> SweepReport:
    """Best certified bound sigma_k^(1/k), k <= n, for poly_decay(s, R) over the grid."""
    _check_grid(s_list, R_list)
    if n < 1:
        raise UsageError(f"n must be >= 1, got {n}")
    band = get_settings().proximity_band if band is None else band

    def point(job: tuple[float, int]) -> SweepPoint:
        s, R = job
        params = {"s": s, "R": R}
        try:
            mu = poly_decay(ctx, s, R)
            table = saw_table(mu, n)
        except CapExceededError as exc:
            logger.warning("sweep point %s failed: %s", params, exc)
            return SweepPoint(params=params, error=f"cap exceeded: {exc}")
        return SweepPoint(
            params=params,
            nu_upper=nu_upper(table).best,
            delta_atom=max_atom(mu)[1],
            exact=table.exact,
        )

    points = ordered_map(point, [(s, R) for s in s_list for R in R_list], workers)
    frontier: dict[str, str] = {}
    for s in s_list:
        bounds = [p.nu_upper for p in points if p.params["s"] == s and p.nu_upper is not None]
        if not bounds:
            frontier[f"s={s:g}"] = "inconclusive: all points failed"
        elif 1 - max(bounds) >= band:
            frontier[f"s={s:g}"] = f"nu bounded by {max(bounds):.4g}, away from 1"
        else:
            frontier[f"s={s:g}"] = "nu bound within band of 1"
    return SweepReport(
        group=ctx.spec,
        family=f"poly-decay nu bounds over s={list(s_list)}, R={list(R_list)}, n={n}",
        points=tuple(points),
        verdicts={"band": band, "frontier": frontier},
    )


def _is_geometric(radii: Sequence[int]) -> bool:
    if any(r < 1 for r in radii):
        return False
    ratio = Fraction(radii[1], radii[0])
    if ratio <= 1:
        return False
    return all(Fraction(b, a) == ratio for a, b in zip(radii, radii[1:]))


def growth_fit(ctx: GroupContext, radii: Sequence[int]) -> GrowthFit:
    """Fit sphere growth on a geometric progression of radii.

    Polynomial growth gives d_hat = slope(log|S(n)| vs log n) + 1. When log|S(n)|
    is better explained linearly in n, the growth is flagged exponential and
    s_hat is the slope of log log|B(n)| against log n.
    """
    radii = list(radii)
    if len(radii) < 4:
        raise UsageError(f"growth_fit needs at least 4 radii, got {len(radii)}")
    if not _is_geometric(radii):
        raise UsageError(f"radii must form an increasing geometric progression: {radii}")

    profile = ball(ctx, radii[-1]).sphere_sizes
    spheres = [profile[n] for n in radii]
    if any(c == 0 for c in spheres):
        raise UsageError("a sphere in the progression is empty; the graph is finite there")
    balls = [sum(profile[: n + 1]) for n in radii]

    log_n = [math.log(n) for n in radii]
    log_s = [math.log(c) for c in spheres]
    slope, _, residuals = linear_fit(log_n, log_s)
    exp_slope, _, exp_residuals = linear_fit([float(n) for n in radii], log_s)
    exponential = exp_slope > 0 and rms(exp_residuals) < rms(residuals)

    d_hat = slope + 1
    s_hat: float | None = None
    if exponential:
        s_hat, _, _ = linear_fit(log_n, [math.log(math.log(b)) for b in balls])
        statement = (
            f"exponential growth (rate {math.exp(exp_slope):.4g} per step); "
            f"stretched-exponential fit s_hat={s_hat:.3f} bounds epdim <= {s_hat:.3f} + slack"
        )
        residuals = exp_residuals
    else:
        statement = f"polynomial growth: pdim <= {d_hat:.3f} + slack"
    logger.info("%s growth over %s: %s", ctx.spec, radii, statement)
    return GrowthFit(
        radii=tuple(radii),
        sphere_sizes=tuple(spheres),
        ball_sizes=tuple(balls),
        d_hat=d_hat,
        residuals=tuple(residuals),
        exponential=exponential,
        s_hat=s_hat,
        statement=statement,
    )


def lb_certificate(
    ctx: GroupContext,
    n_list: Sequence[int],
    s: float,
    b: float | None = None,
    percolativity: SweepReport | None = None,
) -> LBCertificate:
    """Check |B(n)| - 1 > b n^s and uniform_on_ball(n) in M_s^(1/b) for every n in n_list.

    Without ``b`` the largest admissible value along n_list is used, shrunk by 1e-9.
    """
    n_list = list(n_list)
    if not n_list or any(n < 1 for n in n_list):
        raise UsageError("n_list must be non-empty with n >= 1")
    if s <= 0:
        raise UsageError(f"s must be > 0, got {s}")
    integral = float(s).is_integer()
    sizes = {n: len(ball(ctx, n)) - 1 for n in n_list}
    if b is None:
        b = min(sizes[n] / n**s for n in n_list) * (1 - 1e-9)
    if b <= 0:
        raise UsageError(f"b must be > 0, got {b}")
    b_exact = Fraction(b)

    rows: list[LBRow] = []
    for n in n_list:
        punctured = sizes[n]
        report = decay_class(uniform_on_ball(ctx, n), s, "poly")
        if integral:
            hypothesis = punctured > b_exact * n ** int(s)
            b_min: Fraction | float = report.exact_constant or Fraction(n ** int(s), punctured)
            member = b_min < 1 / b_exact
        else:
            hypothesis = punctured > b * n**s
            b_min = report.constant
            member = b_min < 1 / b
        rows.append(
            LBRow(
                n=n, punctured_ball=punctured, hypothesis=hypothesis, b_min=b_min, member=member
            )
        )

    verdict = None
    if percolativity is not None:
        verdict = str(percolativity.verdicts.get("percolative"))
    return LBCertificate(
        s=s,
        b=b,
        rows=tuple(rows),
        holds=all(r.hypothesis and r.member for r in rows),
        percolativity=verdict,
    )
