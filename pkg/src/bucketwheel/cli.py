"""Command-line front end.

Four subcommands cover the batch workflows:

* ``run``   — one closed-loop simulation; writes trajectory.csv, summary.csv,
  and a gnuplot script figures.plot next to them.
* ``sweep`` — Monte Carlo over disturbance seeds; writes sweep.csv.
* ``tune``  — gain search; writes tuned_gains.toml and tuning_trace.csv.
* ``isru``  — water yield and power budget arithmetic; prints a report.

Exit codes: 0 success, 1 invalid config or arguments, 2 numerical failure
during integration, 3 file I/O error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import fields, replace
from pathlib import Path

from . import __version__
from .config import (
    ConfigError,
    default_scenario,
    load_scenario,
    load_tuning_spec,
    write_gains,
)
from .integrator import IntegrationError
from .isru import POWER_BUDGET, power_check, report_csv, report_text
from .sim import RunSummary, Scenario, monte_carlo, run, summarize
from .tuning import TuningError, tune, write_trace

__all__ = ["main"]

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NUMERICAL = 2
EXIT_IO = 3

_SUMMARY_FIELDS = tuple(f.name for f in fields(RunSummary))


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad arguments; remap to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _load(args) -> Scenario:
    scenario = load_scenario(args.config) if args.config else default_scenario()
    if getattr(args, "disturbance", None) is not None:
        enabled = args.disturbance == "on"
        scenario = replace(scenario, disturbance=replace(scenario.disturbance,
                                                         enabled=enabled))
    if getattr(args, "seed", None) is not None:
        scenario = scenario.with_seed(args.seed)
    return scenario


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    return "%.17g" % value


def _summary_csv(path: Path, summary: RunSummary) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(_SUMMARY_FIELDS) + "\n")
        fh.write(",".join(_format_value(getattr(summary, n))
                          for n in _SUMMARY_FIELDS) + "\n")


_FIGURES_PLOT = """\
# gnuplot script for the trajectory written alongside this file.
# Usage: gnuplot figures.plot   (produces three PNG files)
set datafile separator ","
set terminal pngcairo size 900,600
set key autotitle columnhead
set xlabel "t [s]"

set output "wheel_speeds.png"
set ylabel "wheel speed [rad/s]"
plot "trajectory.csv" using 1:7 with lines title "omega1", \\
     "trajectory.csv" using 1:(-$9) with lines title "-omega2"

set output "height.png"
set ylabel "height y [m]"
plot "trajectory.csv" using 1:3 with lines title "y"

set output "drift.png"
set ylabel "drift x [m]"
plot "trajectory.csv" using 1:2 with lines title "x"
"""


def _cmd_run(args) -> int:
    scenario = _load(args)
    trajectory = run(scenario)
    summary = summarize(trajectory, scenario.gains)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    trajectory.to_csv(out / "trajectory.csv")
    _summary_csv(out / "summary.csv", summary)
    (out / "figures.plot").write_text(_FIGURES_PLOT)

    for name in _SUMMARY_FIELDS:
        value = getattr(summary, name)
        print(f"{name} = {'yes' if value else 'no'}" if isinstance(value, bool)
              else f"{name} = {value:.17g}")
    print(f"wrote {out / 'trajectory.csv'}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    if args.runs < 1:
        raise ConfigError(f"--runs must be >= 1, got {args.runs}")
    scenario = _load(args)
    if not scenario.disturbance.enabled:
        scenario = replace(scenario,
                           disturbance=replace(scenario.disturbance, enabled=True))
    result = monte_carlo(scenario, args.runs, base_seed=args.seed)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "sweep.csv"
    with open(path, "w", newline="\n") as fh:
        fh.write("seed," + ",".join(_SUMMARY_FIELDS) + ",failed\n")
        for seed, summary, error in zip(result.seeds, result.summaries, result.errors):
            if summary is None:
                fh.write("%d," % seed + ",".join(["nan"] * len(_SUMMARY_FIELDS)) + ",1\n")
            else:
                fh.write("%d," % seed
                         + ",".join(_format_value(getattr(summary, n))
                                    for n in _SUMMARY_FIELDS) + ",0\n")
        means = []
        for name in _SUMMARY_FIELDS:
            if name == "liftoff":
                means.append("%.17g" % result.liftoff_frequency)
            else:
                means.append("%.17g" % result.stats[name][1] if name in result.stats else "nan")
        fh.write("mean," + ",".join(means) + ",%d\n" % result.n_failed)

    for name, (lo, mean, hi) in result.stats.items():
        print(f"{name}: min {lo:.6g}  mean {mean:.6g}  max {hi:.6g}")
    print(f"liftoff_frequency = {result.liftoff_frequency:.6g}")
    print(f"failed runs = {result.n_failed} / {len(result.seeds)}")
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_tune(args) -> int:
    scenario = _load(args)
    spec = load_tuning_spec(args.spec)
    result = tune(scenario, spec)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_gains(out / "tuned_gains.toml", result.best_gains)
    write_trace(out / "tuning_trace.csv", result.trace)

    print(f"rollouts = {result.n_rollouts}")
    print(f"best_cost = {result.best_cost:.17g}")
    for f in fields(result.best_gains):
        print(f"{f.name} = {getattr(result.best_gains, f.name):.17g}")
    print(f"wrote {out / 'tuned_gains.toml'}")
    return EXIT_OK


def _cmd_isru(args) -> int:
    scenario = _load(args)
    report = power_check(scenario.params.soil, args.rate,
                         mech_power=args.mech_power, power_budget=args.budget)
    if args.csv:
        print(report_csv(report), end="")
    else:
        print(report_text(report), end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bucketwheel",
                     description="Milligravity bucket-wheel excavator simulator.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate one scenario")
    p_run.add_argument("--config", help="scenario TOML (default: package defaults)")
    p_run.add_argument("--seed", type=int, help="override the disturbance seed")
    p_run.add_argument("--disturbance", choices=("on", "off"),
                       help="force the disturbance on or off")
    p_run.add_argument("--out", default="out", help="output directory (default: out)")
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="Monte Carlo over disturbance seeds")
    p_sweep.add_argument("--config", help="scenario TOML (default: package defaults)")
    p_sweep.add_argument("--runs", type=int, required=True, help="number of seeds")
    p_sweep.add_argument("--seed", type=int, default=0,
                         help="first seed; runs use seed .. seed+runs-1")
    p_sweep.add_argument("--out", default="out", help="output directory (default: out)")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_tune = sub.add_parser("tune", help="search gains by closed-loop rollouts")
    p_tune.add_argument("--config", help="scenario TOML (default: package defaults)")
    p_tune.add_argument("--spec", required=True, help="tuning TOML with [tuning] table")
    p_tune.add_argument("--out", default="out", help="output directory (default: out)")
    p_tune.set_defaults(func=_cmd_tune)

    p_isru = sub.add_parser("isru", help="water yield and power budget report")
    p_isru.add_argument("--config", help="scenario TOML (default: package defaults)")
    p_isru.add_argument("--rate", type=float, required=True,
                        help="regolith processing rate, kg/s")
    p_isru.add_argument("--mech-power", type=float, default=0.0,
                        help="mechanical power draw, W (default: 0)")
    p_isru.add_argument("--budget", type=float, default=POWER_BUDGET,
                        help=f"power budget, W (default: {POWER_BUDGET:g})")
    p_isru.add_argument("--csv", action="store_true", help="emit CSV instead of text")
    p_isru.set_defaults(func=_cmd_isru)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"bucketwheel: config error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (IntegrationError, TuningError) as exc:
        print(f"bucketwheel: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"bucketwheel: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"bucketwheel: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
