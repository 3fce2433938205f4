"""pdim-lab batch runner.

Usage:
  pdim-lab ball --group heis --n 3
  pdim-lab lambda-c --group free:2 --measure uniform-ball:1 --L 40 --trials 20000 --seed 7
  pdim-lab saw --group zd:2 --measure uniform-ball:1 --nmax 4 --exact
  pdim-lab sweep --family percolativity --group zd:2 --radii 1,2,4 --out runs/z2.csv
  pdim-lab selftest

Exit status: 0 ok, 1 usage error, 2 cap exceeded, 3 selftest failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from typing import Any

from pdim_lab.cli._output import emit
from pdim_lab.cli.config import ExperimentConfig
from pdim_lab.common_utils.rng import trial_generator
from pdim_lab.core.dimension import (
    SweepReport,
    epdim_sweep,
    growth_fit,
    lb_certificate,
    nudim_sweep,
    pdim_sweep,
    percolativity_sweep,
    tree_oracle_family,
)
from pdim_lab.core.errors import CapExceededError, UsageError
from pdim_lab.core.groups import ball
from pdim_lab.core.measures import annulus_mass, decay_class, max_atom
from pdim_lab.core.percolation import (
    PercConfig,
    ball_weights,
    complete_graph_weights,
    expected_simple_degree,
    giant_component,
    lambda_c_estimate,
    mean_giant_fraction,
    two_clique_weights,
)
from pdim_lab.core.saw import nu_upper, saw_table
from pdim_lab.core.spectral import (
    cheeger_report,
    kesten_inequality_check,
    return_probabilities,
    rho_estimate,
)
from pdim_lab.parsers import parse_group, parse_measure
from pdim_lab.settings import get_settings

logger = logging.getLogger(__name__)

_FLAG_KEYS = {"lam": "lambda", "lambda_max": "lambda-max", "window_check": "window-check"}
_NOT_CONFIG = {"command", "config", "verbose", "quick"}


class _Parser(argparse.ArgumentParser):
    """Argument errors become UsageError so they map to exit status 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--group", help="group spec, e.g. zd:2, free:2, heis, lamp, canopy:60")
    parser.add_argument("--measure", help="measure spec, e.g. uniform-ball:1, poly:3,8")
    parser.add_argument("--lambda", dest="lam", type=float, help="intensity lambda")
    parser.add_argument("--L", type=int, help="escape radius (window)")
    parser.add_argument("--trials", type=int, help="Monte Carlo trials per bisection step")
    parser.add_argument("--theta", type=float, help="survival threshold for the crossing")
    parser.add_argument("--lambda-max", dest="lambda_max", type=float, help="lambda search cap")
    parser.add_argument(
        "--estimator",
        choices=["growth", "theta"],
        help="lambda_c estimator: offspring-ratio crossing or theta-crossing of escape",
    )
    parser.add_argument("--nmax", type=int, help="largest walk length")
    parser.add_argument("--seed", type=int, help="master seed")
    parser.add_argument("--threads", type=int, help="worker threads")
    parser.add_argument("--out", help="CSV output path (JSON report goes next to it)")
    parser.add_argument(
        "--exact", action="store_const", const=True, default=None, help="force exact arithmetic"
    )
    parser.add_argument("--config", help="key=value config file")
    parser.add_argument("--verbose", action="store_true", help="log at INFO level")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pdim-lab", description="Long-range percolation and SAW laboratory.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ball", help="ball and sphere sizes")
    _add_common(p)
    p.add_argument("--n", type=int, help="radius")

    p = sub.add_parser("measure", help="support, atoms, decay classes, annulus masses")
    _add_common(p)
    p.add_argument("--s", help="comma-separated decay exponents")
    p.add_argument("--M", type=int, help="inner annulus radius")

    p = sub.add_parser("lambda-c", help="estimate lambda_c by bisection")
    _add_common(p)
    p.add_argument(
        "--no-window-check",
        dest="window_check",
        action="store_const",
        const=False,
        default=None,
        help="skip the L versus 2L stability check",
    )

    p = sub.add_parser("saw", help="weighted self-avoiding walk table")
    _add_common(p)

    p = sub.add_parser("spectral", help="return probabilities, rho and isoperimetry")
    _add_common(p)

    p = sub.add_parser("sweep", help="dimension sweeps and growth fits")
    _add_common(p)
    p.add_argument(
        "--family", choices=["percolativity", "pdim", "epdim", "nudim", "tree", "growth", "lb"]
    )
    p.add_argument("--radii", help="comma-separated radii (ball radii, or k for --family tree)")
    p.add_argument("--s", help="comma-separated decay exponents")
    p.add_argument("--R", help="comma-separated truncation radii")
    p.add_argument("--r", type=float, help="stretched-exponential base in (0, 1)")

    p = sub.add_parser("giant", help="giant component of a finite weighted graph")
    _add_common(p)
    p.add_argument("--n", type=int, help="vertex count (or ball radius with --weights ball)")
    p.add_argument("--weights", choices=["complete", "two-clique", "ball"])
    p.add_argument("--samples", type=int, help="independent samples")

    p = sub.add_parser("selftest", help="run the oracle-backed acceptance suite")
    _add_common(p)
    p.add_argument("--quick", action="store_true", help="reduced trial counts, skip slow items")
    return parser


def _flags(args: argparse.Namespace) -> dict[str, Any]:
    return {
        _FLAG_KEYS.get(k, k): v
        for k, v in vars(args).items()
        if k not in _NOT_CONFIG and v is not None
    }


def _perc_config(cfg: ExperimentConfig) -> PercConfig:
    return PercConfig.from_settings(
        lam=cfg.lam or 0.0,
        escape_radius=cfg.L,
        trials=cfg.trials,
        theta=cfg.theta,
        lambda_max=cfg.lambda_max,
        seed=cfg.seed,
        workers=cfg.threads,
        window_check=cfg.window_check,
        estimator=cfg.estimator,
    )


def _report_paths(written: Sequence[object]) -> None:
    for path in written:
        print(f"Written: {path}")


def _cmd_ball(cfg: ExperimentConfig) -> int:
    if cfg.n is None:
        raise UsageError("ball needs --n")
    ctx = parse_group(cfg.group)
    b = ball(ctx, cfg.n)
    rows = []
    total = 0
    for radius, size in enumerate(b.sphere_sizes):
        total += size
        rows.append([ctx.spec, radius, size, total])
    _report_paths(emit(cfg, ["group", "radius", "sphere_size", "ball_size"], rows))
    return 0


def _cmd_measure(cfg: ExperimentConfig) -> int:
    ctx = parse_group(cfg.group)
    mu = parse_measure(ctx, cfg.measure)
    rows = []
    for i, g in enumerate(mu.support):
        exact = mu.exact[i] if mu.exact is not None else None
        rows.append([ctx.spec, cfg.measure, ctx.format_element(g), mu.masses[i], exact])
    report: dict[str, Any] = {"provenance": mu.provenance, "support_size": len(mu.support)}
    if mu.is_graph:
        report["edge_weight"] = mu.edge_weight
    else:
        atom, delta = max_atom(mu)
        report["max_atom"] = {"element": ctx.format_element(atom), "mass": delta}
        report["decay"] = [
            {
                "s": s,
                "b_min": decay_class(mu, s, "poly").constant,
                "r_min": decay_class(mu, s, "exp").constant,
            }
            for s in (cfg.s or [1.0])
        ]
        annuli = annulus_mass(mu, cfg.M)
        report["annuli"] = {
            "M": annuli.M,
            "masses": [m for _, m in annuli.masses],
            "inner_dominates": annuli.dominant,
        }
    if cfg.lam is not None:
        report["expected_simple_degree"] = expected_simple_degree(mu, cfg.lam)
    columns = ["group", "measure", "element", "mass", "exact_mass"]
    _report_paths(emit(cfg, columns, rows, report))
    return 0


def _cmd_lambda_c(cfg: ExperimentConfig) -> int:
    ctx = parse_group(cfg.group)
    mu = parse_measure(ctx, cfg.measure)
    est = lambda_c_estimate(mu, _perc_config(cfg))
    row = [
        ctx.spec,
        cfg.measure,
        cfg.L,
        cfg.trials,
        cfg.theta,
        est.lambda_hat,
        est.ci[0],
        est.ci[1],
        est.capped,
        cfg.seed,
    ]
    columns = [
        "group",
        "measure",
        "L",
        "trials",
        "theta",
        "lambda_hat",
        "ci_low",
        "ci_high",
        "capped",
        "seed",
    ]
    report = None
    if cfg.out is not None:
        report = {
            "lambda_hat": est.lambda_hat,
            "bracket": list(est.bracket),
            "capped": est.capped,
            "cap_reason": est.cap_reason,
            "window_lambda_hat": est.window_lambda_hat,
            "caveat": est.caveat,
            "estimator": est.estimator,
            "evaluations": [
                {"lambda": e.lam, "statistic": e.statistic, "ci": list(e.ci)}
                for e in est.evaluations
            ],
        }
    _report_paths(emit(cfg, columns, [row], report))
    return 0


def _cmd_saw(cfg: ExperimentConfig) -> int:
    ctx = parse_group(cfg.group)
    mu = parse_measure(ctx, cfg.measure)
    table = saw_table(mu, cfg.nmax, exact=True if cfg.exact else None, workers=cfg.threads)
    bounds = dict(nu_upper(table).bounds) if cfg.nmax >= 1 else {}
    rows = [
        [ctx.spec, cfg.measure, n, table.sigma[n], table.exact, bounds.get(n)]
        for n in range(cfg.nmax + 1)
    ]
    columns = ["group", "measure", "n", "sigma_n", "exact_flag", "nu_upper"]
    _report_paths(emit(cfg, columns, rows))
    return 0


def _cmd_spectral(cfg: ExperimentConfig) -> int:
    ctx = parse_group(cfg.group)
    mu = parse_measure(ctx, cfg.measure)
    table = return_probabilities(mu, cfg.nmax)
    rows = [[ctx.spec, cfg.measure, n, p, table.mode] for n, p in enumerate(table.p)]
    report: dict[str, Any] = {"mode": table.mode, "rho": None}
    rho = None
    if table.n_max >= 20:
        est = rho_estimate(table)
        rho = est.rho
        kesten = kesten_inequality_check(len(mu.support), rho)
        report["rho"] = rho
        report["rho_raw"] = [list(item) for item in est.raw]
        report["kesten"] = {
            "inverse_size": kesten.inverse_size,
            "rho_squared": kesten.rho_squared,
            "passed": kesten.passed,
        }
    cheeger = cheeger_report(ctx, rho=rho)
    report["cheeger"] = {
        "iota_upper": cheeger.iota_upper,
        "raw": cheeger.bound_raw,
        "degree_normalized": cheeger.bound_degree_normalized,
        "kesten_lower": cheeger.kesten_lower,
        "rows": [[r.label, r.size, r.boundary, r.ratio] for r in cheeger.rows],
    }
    _report_paths(emit(cfg, ["group", "measure", "n", "p_n", "mode"], rows, report))
    return 0


_SWEEP_COLUMNS = [
    "group",
    "family",
    "params",
    "lambda_hat",
    "ci_low",
    "ci_high",
    "capped",
    "delta_atom",
    "nu_upper",
    "seed",
]


def _sweep_rows(report: SweepReport) -> list[list[Any]]:
    rows = []
    for p in report.points:
        params = ";".join(f"{k}={v:g}" for k, v in p.params.items())
        low, high = p.ci if p.ci is not None else (None, None)
        rows.append(
            [
                report.group,
                report.family,
                params,
                p.lambda_hat,
                low,
                high,
                p.capped,
                p.delta_atom,
                p.nu_upper,
                p.seed,
            ]
        )
    return rows


def _cmd_sweep(cfg: ExperimentConfig) -> int:
    if cfg.family == "tree":
        report = tree_oracle_family(cfg.radii or [2, 3, 4, 5, 6, 8, 16])
        _report_paths(emit(cfg, _SWEEP_COLUMNS, _sweep_rows(report), report.as_dict()))
        return 0

    ctx = parse_group(cfg.group)
    if cfg.family == "growth":
        fit = growth_fit(ctx, cfg.radii or [2, 4, 8, 16])
        rows = [
            [ctx.spec, n, sphere, size]
            for n, sphere, size in zip(fit.radii, fit.sphere_sizes, fit.ball_sizes)
        ]
        report = {
            "d_hat": fit.d_hat,
            "exponential": fit.exponential,
            "s_hat": fit.s_hat,
            "residuals": list(fit.residuals),
            "statement": fit.statement,
        }
        print(fit.statement)
        columns = ["group", "radius", "sphere_size", "ball_size"]
        _report_paths(emit(cfg, columns, rows, report))
        return 0
    if cfg.family == "lb":
        if len(cfg.s) != 1:
            raise UsageError("--family lb needs exactly one exponent in --s")
        cert = lb_certificate(ctx, cfg.radii or [2, 4, 8], cfg.s[0])
        rows = [
            [ctx.spec, r.n, r.punctured_ball, r.hypothesis, r.b_min, r.member] for r in cert.rows
        ]
        columns = ["group", "n", "punctured_ball", "hypothesis", "b_min", "member"]
        report = {"s": cert.s, "b": cert.b, "holds": cert.holds}
        _report_paths(emit(cfg, columns, rows, report))
        return 0

    pc = _perc_config(cfg)
    if cfg.family == "percolativity":
        sweep = percolativity_sweep(ctx, cfg.radii or [1, 2, 4], pc)
    else:
        if not cfg.s or not cfg.R:
            raise UsageError(f"--family {cfg.family} needs --s and --R")
        if cfg.family == "pdim":
            sweep = pdim_sweep(ctx, cfg.s, cfg.R, pc)
        elif cfg.family == "epdim":
            if cfg.r is None:
                raise UsageError("--family epdim needs --r")
            sweep = epdim_sweep(ctx, cfg.r, cfg.s, cfg.R, pc)
        else:
            sweep = nudim_sweep(ctx, cfg.s, cfg.R, max(cfg.nmax, 1), workers=cfg.threads)
    for key, value in sweep.verdicts.items():
        print(f"[verdict] {key}: {value}")
    _report_paths(emit(cfg, _SWEEP_COLUMNS, _sweep_rows(sweep), sweep.as_dict()))
    return 0


def _cmd_giant(cfg: ExperimentConfig) -> int:
    lam = 2.0 if cfg.lam is None else cfg.lam
    if cfg.weights == "ball":
        ctx = parse_group(cfg.group)
        _, weights = ball_weights(parse_measure(ctx, cfg.measure), cfg.n or 2)
    elif cfg.weights == "two-clique":
        weights = two_clique_weights(cfg.n or 1000)
    else:
        weights = complete_graph_weights(cfg.n or 1000)
    mean, fractions = mean_giant_fraction(weights, lam, cfg.samples, cfg.seed, cfg.threads)
    size = weights.shape[0]
    rows = [
        [cfg.weights, size, lam, i, fraction, cfg.seed] for i, fraction in enumerate(fractions)
    ]
    first = giant_component(range(size), weights, lam, trial_generator(cfg.seed, 0))
    report = {"mean_fraction": mean, "histogram_sample_0": first.histogram}
    print(f"mean largest-component fraction: {mean:.6f} over {cfg.samples} samples")
    columns = ["weights", "vertices", "lambda", "sample", "fraction", "seed"]
    _report_paths(emit(cfg, columns, rows, report))
    return 0


def _cmd_selftest(cfg: ExperimentConfig, quick: bool = False) -> int:
    from pdim_lab.cli.selftest import run_selftest

    results = run_selftest(quick=quick, seed=cfg.seed, workers=cfg.threads)
    failed = [r for r in results if not r.passed]
    for r in results:
        status = "SKIP" if r.skipped else ("PASS" if r.passed else "FAIL")
        print(f"[{status}] {r.number:>2} {r.name}: {r.detail}")
    if failed:
        print(f"Selftest failed: {len(failed)} / {len(results)} criteria")
        return 3
    print(f"Selftest passed: {len(results)} criteria")
    return 0


_HANDLERS: dict[str, Callable[[ExperimentConfig], int]] = {
    "ball": _cmd_ball,
    "measure": _cmd_measure,
    "lambda-c": _cmd_lambda_c,
    "saw": _cmd_saw,
    "spectral": _cmd_spectral,
    "sweep": _cmd_sweep,
    "giant": _cmd_giant,
}


def _configure_logging(verbose: bool) -> None:
    level = "INFO" if verbose else get_settings().log_level
    logging.basicConfig(
        level=level.upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def run(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv``, execute the subcommand and return the exit status."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _configure_logging(args.verbose)
        cfg = ExperimentConfig.resolve(args.command, _flags(args), args.config)
        if cfg.command == "selftest":
            return _cmd_selftest(cfg, quick=args.quick)
        return _HANDLERS[cfg.command](cfg)
    except CapExceededError as exc:
        print(f"error: {exc} (partial counts: {list(exc.partial)})", file=sys.stderr)
        return 2
    except (UsageError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> int:
    return run(sys.argv[1:])


if __name__ == "__main__":
    raise SystemExit(main())
