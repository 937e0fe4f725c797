"""Command line front end.

Three subcommands: ``estimate`` runs one estimator over numbers from a
file or stdin, ``simulate`` runs a JSON-described experiment, and
``paper-figures`` runs the full benchmark grid.  Exit codes: 0 success,
2 configuration error, 1 runtime failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .estimators import EstimatorSpec, Sample, estimate
from .harness import (
    FIGURE_DEFAULT_REPLICATIONS,
    FIGURE_DEFAULT_SEED,
    ConfigError,
    emit_results,
    figure_grid_table,
    parse_config,
    run_experiment,
)


def _read_numbers(handle) -> np.ndarray:
    values = []
    for lineno, line in enumerate(handle, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            values.append(float(text))
        except ValueError:
            raise RuntimeError(f"input line {lineno} is not a number: {text!r}") from None
    if not values:
        raise RuntimeError("no numbers in input")
    return np.array(values)


def _resolve_jobs(args) -> int:
    if args.jobs is not None:
        jobs = args.jobs
    else:
        raw = os.environ.get("ROBUSTMEAN_JOBS", "1")
        try:
            jobs = int(raw)
        except ValueError:
            raise ConfigError([f"ROBUSTMEAN_JOBS: not an integer: {raw!r}"]) from None
    if jobs < 1:
        raise ConfigError(["jobs: must be at least 1"])
    return jobs


def _emit(table, args) -> None:
    if args.out is None:
        emit_results(table, args.format, sys.stdout)
    else:
        emit_results(table, args.format, args.out)


def _cmd_estimate(args) -> int:
    if args.estimator in ("weighted", "mom") and args.k is None:
        raise ConfigError(["k: required for the blockwise estimators"])
    try:
        spec = EstimatorSpec(
            kind=args.estimator,
            k=1 if args.k is None else args.k,
            p=args.p,
            epsilon=args.epsilon,
            contamination_bound=args.contamination_bound,
        )
    except ValueError as exc:
        raise ConfigError([str(exc)]) from None
    if args.input is None:
        values = _read_numbers(sys.stdin)
    else:
        with open(args.input, "r", encoding="utf-8") as handle:
            values = _read_numbers(handle)
    print(format(estimate(Sample(values), spec), ".17g"))
    return 0


def _cmd_simulate(args) -> int:
    jobs = _resolve_jobs(args)
    text = Path(args.config).read_text(encoding="utf-8")
    table = run_experiment(parse_config(text), parallelism=jobs)
    _emit(table, args)
    return 0


def _cmd_figures(args) -> int:
    jobs = _resolve_jobs(args)
    if args.reps < 1:
        raise ConfigError(["reps: must be at least 1"])
    table = figure_grid_table(replications=args.reps, base_seed=args.seed, parallelism=jobs)
    _emit(table, args)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="robustmean",
        description="Blockwise robust mean estimation and its simulation harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="estimate the mean of newline-delimited numbers")
    est.add_argument("input", nargs="?", default=None, help="input file; stdin when omitted. '#' starts a comment")
    est.add_argument("--estimator", required=True, choices=("weighted", "mom", "trimmed", "adaptive"))
    est.add_argument("--k", type=int, default=None, help="block count (weighted, mom)")
    est.add_argument("--p", type=float, default=2.0, help="weight exponent (weighted, adaptive)")
    est.add_argument("--epsilon", type=float, default=0.0, help="assumed contamination fraction (trimmed)")
    est.add_argument("--C", dest="contamination_bound", type=float, default=0.5,
                     help="assumed corrupted-block bound (adaptive)")
    est.set_defaults(run=_cmd_estimate)

    sim = sub.add_parser("simulate", help="run a JSON-configured experiment")
    sim.add_argument("--config", required=True, help="path to the JSON experiment description")
    sim.add_argument("--out", default=None, help="output path; stdout when omitted")
    sim.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    sim.add_argument("--jobs", type=int, default=None, help="workers; defaults to ROBUSTMEAN_JOBS or 1")
    sim.set_defaults(run=_cmd_simulate)

    fig = sub.add_parser("paper-figures", help="run the full benchmark grid")
    fig.add_argument("--reps", type=int, default=FIGURE_DEFAULT_REPLICATIONS)
    fig.add_argument("--out", default=None, help="output path; stdout when omitted")
    fig.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    fig.add_argument("--jobs", type=int, default=None, help="workers; defaults to ROBUSTMEAN_JOBS or 1")
    fig.add_argument("--seed", type=int, default=FIGURE_DEFAULT_SEED)
    fig.set_defaults(run=_cmd_figures)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits itself on usage errors and --help
        return int(exc.code or 0)
    try:
        return args.run(args)
    except ConfigError as exc:
        for problem in exc.errors:
            print(f"config error: {problem}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - anything else is a runtime failure
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
