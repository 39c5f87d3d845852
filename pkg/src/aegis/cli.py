"""Command-line entry point: solve, sweep, sample, and verify.

Every command is a pure function of (config file, flags, seed): reruns
with the same inputs produce byte-identical CSV files.  Exit codes: 0 on
success, 1 when a verification battery reports a violation, 2 on
configuration errors, 3 on numeric failures.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from collections import Counter
from pathlib import Path

import numpy as np

from . import config as cfg
from .errors import AegisError, ConfigError
from .losses import fosd_shift, sample_losses
from .solver import demand_curve, expected_utility, final_wealth, optimal_theta
from .verification import Verdict, run_battery
from . import reporting

__all__ = ["main"]


def _load_doc(args) -> cfg.ConfigDoc:
    if args.config is None:
        raise ConfigError("this command requires --config")
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    return cfg.parse_config(text)


def _out_path(args, run: cfg.RunSettings | None) -> str | None:
    if args.out is not None:
        return args.out
    return run.output_path if run is not None else None


def _maybe_figure(args, out: str | None) -> str | None:
    if out is None or args.no_figures:
        return None
    return reporting.figure_path_for(out)


def cmd_solve(args) -> int:
    doc = _load_doc(args)
    run = cfg.load_run_settings(doc)
    scenario = cfg.load_scenario(doc)
    result = optimal_theta(scenario)
    out = _out_path(args, run)
    reporting.write_csv(
        out,
        ["theta_star", "eu", "boundary"],
        [[result.theta_star, result.eu_at_star, result.boundary]],
    )
    figure = _maybe_figure(args, out)
    if figure is not None:
        thetas = np.linspace(0.0, 1.0, 101)
        eus = [expected_utility(scenario, float(t)) for t in thetas]
        reporting.save_objective_curve(
            thetas, eus, result.theta_star, result.eu_at_star, figure
        )
    return 0


def cmd_sweep(args) -> int:
    doc = _load_doc(args)
    run = cfg.load_run_settings(doc)
    lambda_grid = run.lambda_grid
    t_grid = run.t_grid
    if args.grid is not None:
        override = cfg.parse_grid(args.grid, "--grid")
        if t_grid is not None and lambda_grid is None:
            t_grid = override
        else:
            lambda_grid = override
    if (lambda_grid is None) == (t_grid is None):
        raise ConfigError(
            "sweep needs exactly one of run.lambda_grid or run.t_grid (or --grid)"
        )
    out = _out_path(args, run)

    if lambda_grid is not None:
        grid = sorted(lambda_grid)
        if grid[0] < 1.0:
            raise ConfigError(
                "gross loadings must be >= 1", key="run.lambda_grid"
            )
        ss = cfg.load_sensitivity_scenario(doc, grid[0])
        points = demand_curve(ss, grid)
        reporting.write_csv(
            out,
            ["lambda_prime", "theta_star", "eu", "boundary", "foc_residual"],
            [
                [p.lambda_prime, p.theta_star, p.eu, p.boundary, p.foc_residual]
                for p in points
            ],
        )
        figure = _maybe_figure(args, out)
        if figure is not None:
            reporting.save_sweep_curve(
                [p.lambda_prime for p in points],
                [p.theta_star for p in points],
                "gross loading lambda'",
                figure,
                log_x=True,
            )
        return 0

    grid = sorted(t_grid)
    if grid and grid[0] < 0.0:
        raise ConfigError("shift parameters must be >= 0", key="run.t_grid")
    scenario = cfg.load_scenario(doc)
    rows = []
    thetas = []
    for t in grid:
        shifted = dataclasses.replace(
            scenario,
            losses=dataclasses.replace(
                scenario.losses, f_ns=fosd_shift(scenario.losses.f_ns, t)
            ),
        )
        res = optimal_theta(shifted)
        thetas.append(res.theta_star)
        rows.append(
            [t, res.theta_star, res.eu_at_star, res.boundary, res.foc_at_star, shifted.premium]
        )
    reporting.write_csv(
        out,
        ["t", "theta_star", "eu", "boundary", "foc_residual", "premium"],
        rows,
    )
    figure = _maybe_figure(args, out)
    if figure is not None:
        reporting.save_sweep_curve(grid, thetas, "stochastic enlargement t", figure)
    return 0


def cmd_sample(args) -> int:
    doc = _load_doc(args)
    run = cfg.load_run_settings(doc)
    scenario = cfg.load_scenario(doc)
    n = args.n if args.n is not None else run.samples
    if n is None or n < 1:
        raise ConfigError("sample needs n >= 1 (--n or run.samples)", key="run.samples")
    seed = args.seed if args.seed is not None else run.rng_seed
    if seed is None:
        raise ConfigError("sample needs a seed (--seed or run.rng_seed)", key="run.rng_seed")
    rng = np.random.default_rng(seed)
    l_s, l_ns = sample_losses(scenario.losses, n, rng)
    theta = scenario.contract.theta
    wealth = np.asarray(final_wealth(scenario, l_s, l_ns, theta))
    utility = np.asarray(scenario.utility.evaluate(wealth))
    out = _out_path(args, run)
    reporting.write_csv(
        out,
        ["draw_index", "l_s", "l_ns", "final_wealth", "utility"],
        (
            [i, l_s[i], l_ns[i], wealth[i], utility[i]]
            for i in range(n)
        ),
    )
    figure = _maybe_figure(args, out)
    if figure is not None:
        reporting.save_sample_histogram(wealth, figure)
    return 0


def cmd_verify(args) -> int:
    doc = _load_doc(args) if args.config is not None else None
    run = cfg.load_run_settings(doc) if doc is not None else None
    battery = cfg.load_battery(doc)
    reports = run_battery(battery)
    out = _out_path(args, run)
    reporting.write_csv(
        out,
        [
            "theorem_id",
            "scenario_digest",
            "premise_held",
            "conclusion_held",
            "verdict",
            "witnesses",
            "error",
        ],
        (
            [
                r.theorem_id,
                r.scenario_digest,
                r.premise_held,
                r.conclusion_held,
                r.verdict,
                "|".join(
                    f"{name}={reporting.format_cell(value)}" for name, value in r.witnesses
                ),
                r.error,
            ]
            for r in reports
        ),
    )
    figure = _maybe_figure(args, out)
    if figure is not None:
        reporting.save_battery_summary(reports, figure)

    counts = Counter((r.theorem_id.value, r.verdict.value) for r in reports)
    violations = sum(1 for r in reports if r.verdict is Verdict.VIOLATION)
    lines = ["theorem  consistent  premise_not_met  violation"]
    for tid in ("T1", "T2", "T3", "T4", "P1", "T5"):
        lines.append(
            f"{tid:<8} {counts.get((tid, 'consistent'), 0):>10}"
            f" {counts.get((tid, 'premise_not_met'), 0):>16}"
            f" {counts.get((tid, 'violation'), 0):>10}"
        )
    lines.append(f"total reports: {len(reports)}, violations: {violations}")
    print("\n".join(lines))
    return 1 if violations else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aegis",
        description=(
            "Scenario runner for co-insurance demand under mixed insurable "
            "and non-insurable risk"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="scenario configuration file")
        p.add_argument("--out", help="output CSV path (default: run.output_path or stdout)")
        p.add_argument("--seed", type=int, help="override run.rng_seed")
        p.add_argument(
            "--no-figures", action="store_true", help="skip rendering figures"
        )

    p_solve = sub.add_parser("solve", help="optimal liability level for one scenario")
    add_common(p_solve)
    p_solve.set_defaults(func=cmd_solve)

    p_sweep = sub.add_parser(
        "sweep", help="demand curve over a loading grid or a risk-shift grid"
    )
    add_common(p_sweep)
    p_sweep.add_argument("--grid", help="override the sweep grid, e.g. 1.01:1.5:20:log")
    p_sweep.set_defaults(func=cmd_sweep)

    p_sample = sub.add_parser("sample", help="seeded Monte Carlo draws as CSV")
    add_common(p_sample)
    p_sample.add_argument("--n", type=int, help="number of draws (or run.samples)")
    p_sample.set_defaults(func=cmd_sample)

    p_verify = sub.add_parser(
        "verify", help="run the verification battery (default if no --config)"
    )
    add_common(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except AegisError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
