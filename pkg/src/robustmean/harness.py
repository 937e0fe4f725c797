"""Monte-Carlo harness: experiment configs, deterministic replication, emitters.

A replication draws one sample, corrupts it once, and feeds the same
values to every (estimator, block count) cell.  RNG streams are derived
from (base_seed, purpose, replication), and each replication writes into
its own slot, so results are byte-identical at any worker count.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .datagen import ContaminationSpec, DistributionSpec, contaminate, sample
from .estimators import (
    EstimatorSpec,
    block_summaries,
    estimate,
    median_of_means,
    partition,
    weighted_mean,
)
from .seeding import substream_seed

SCHEMA_VERSION = 1

# the benchmark grid exercised by the `paper-figures` subcommand
FIGURE_SAMPLE_SIZE = 2500
FIGURE_K_GRID = (25, 50, 75, 100, 125, 150, 175, 200)
FIGURE_OUTLIER_GRID = (0, 50, 100, 150)
FIGURE_OUTLIER_VALUE = 1000.0
FIGURE_DEFAULT_SEED = 20081217
FIGURE_DEFAULT_REPLICATIONS = 1000

CSV_COLUMNS = (
    "estimator",
    "p",
    "k",
    "O",
    "N",
    "replications",
    "mean_error",
    "mean_abs_error",
    "rescaled_sd",
    "max_abs_error",
    "base_seed",
)


class ConfigError(Exception):
    """Invalid experiment configuration; ``errors`` lists every violation."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class ExperimentSpec:
    """One simulation: a distribution, a contamination level, and a cell grid."""

    n: int
    distribution: DistributionSpec
    contamination: ContaminationSpec
    k_grid: tuple[int, ...]
    estimators: tuple[EstimatorSpec, ...]
    replications: int
    base_seed: int


@dataclass(frozen=True)
class AggregateMetrics:
    """Error summaries over the replications of one cell.

    ``rescaled_sd`` is sqrt(n) times the spread of the estimates, the
    scale on which a CLT-like estimator shows a constant.  The spread
    uses the 1/R normalisation so a single replication reports 0.
    """

    mean_error: float
    mean_abs_error: float
    rescaled_sd: float
    max_abs_error: float
    replications: int


@dataclass(frozen=True)
class ResultRow:
    estimator: str
    p: float | None
    k: int
    outliers: int
    n: int
    metrics: AggregateMetrics
    base_seed: int


def _row_key(row: ResultRow) -> tuple:
    return (row.estimator, row.k, row.outliers, -math.inf if row.p is None else row.p)


@dataclass(frozen=True)
class ExperimentTable:
    """Result rows plus a small lookup helper for tests and reports."""

    rows: tuple[ResultRow, ...]

    def metrics(
        self,
        estimator: str,
        k: int | None = None,
        outliers: int | None = None,
        p: float | None = None,
    ) -> AggregateMetrics:
        hits = [
            row
            for row in self.rows
            if row.estimator == estimator
            and (k is None or row.k == k)
            and (outliers is None or row.outliers == outliers)
            and (p is None or row.p == p)
        ]
        if len(hits) != 1:
            raise KeyError(
                f"{len(hits)} rows match estimator={estimator!r}, k={k}, outliers={outliers}, p={p}"
            )
        return hits[0].metrics


def validate_spec(spec: ExperimentSpec) -> list[str]:
    """Every violated field, one message each; empty when the spec is sound."""
    problems: list[str] = []
    if not isinstance(spec.n, int) or spec.n < 1:
        problems.append("N: must be a positive integer")
    if not isinstance(spec.replications, int) or spec.replications < 1:
        problems.append("replications: must be a positive integer")
    if not isinstance(spec.base_seed, int) or not 0 <= spec.base_seed < 2**64:
        problems.append("base_seed: must be an integer in [0, 2**64)")
    if not spec.k_grid:
        problems.append("k_grid: must not be empty")
    elif isinstance(spec.n, int) and spec.n >= 1:
        for k in spec.k_grid:
            if not isinstance(k, int) or not 1 <= k <= spec.n:
                problems.append(f"k_grid: k={k} outside 1..{spec.n}")
    if not spec.estimators:
        problems.append("estimators: must not be empty")
    if isinstance(spec.n, int) and spec.contamination.count >= spec.n:
        problems.append("contamination.count: must be smaller than N")
    return problems


def run_experiment(spec: ExperimentSpec, parallelism: int = 1) -> ExperimentTable:
    """Evaluate every (estimator, k) cell over shared replications.

    The grid supplies k, so the ``k`` field on each estimator spec is
    ignored here.  Estimators that do not use a block count produce the
    same value in every k cell of their row group.
    """
    problems = validate_spec(spec)
    if problems:
        raise ConfigError(problems)
    if parallelism < 1:
        raise ConfigError(["parallelism: must be at least 1"])

    cells = [(est, k) for est in spec.estimators for k in spec.k_grid]
    errors = np.empty((spec.replications, len(cells)))
    true_mean = spec.distribution.true_mean

    def run_one(r: int) -> None:
        raw = sample(spec.distribution, spec.n, substream_seed(spec.base_seed, "sample", r))
        corrupted = contaminate(raw, spec.contamination, substream_seed(spec.base_seed, "contaminate", r))
        cache = {k: block_summaries(corrupted, partition(spec.n, k)) for k in set(spec.k_grid)}
        blockfree: dict[EstimatorSpec, float] = {}
        for c, (est, k) in enumerate(cells):
            if est.kind == "weighted":
                value = weighted_mean(cache[k], est.p)
            elif est.kind == "mom":
                value = median_of_means(cache[k])
            else:
                if est not in blockfree:
                    blockfree[est] = estimate(corrupted, est)
                value = blockfree[est]
            errors[r, c] = value - true_mean

    if parallelism == 1:
        for r in range(spec.replications):
            run_one(r)
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            list(pool.map(run_one, range(spec.replications)))

    rows = []
    for c, (est, k) in enumerate(cells):
        col = errors[:, c]
        metrics = AggregateMetrics(
            mean_error=float(col.mean()),
            mean_abs_error=float(np.abs(col).mean()),
            rescaled_sd=float(math.sqrt(spec.n) * col.std()),
            max_abs_error=float(np.abs(col).max()),
            replications=spec.replications,
        )
        rows.append(
            ResultRow(
                estimator=est.kind,
                p=est.p if est.kind in ("weighted", "adaptive") else None,
                k=k,
                outliers=spec.contamination.count,
                n=spec.n,
                metrics=metrics,
                base_seed=spec.base_seed,
            )
        )
    return ExperimentTable(tuple(sorted(rows, key=_row_key)))


def figure_grid_table(
    replications: int = FIGURE_DEFAULT_REPLICATIONS,
    base_seed: int = FIGURE_DEFAULT_SEED,
    parallelism: int = 1,
) -> ExperimentTable:
    """The full benchmark grid: four contamination levels by eight block counts.

    Median-of-means, the weighted estimator at p=1 and p=2, and the
    trimmed oracle (epsilon = O/N) on the standardised half-t(4) family
    at N=2500.
    """
    rows: list[ResultRow] = []
    dist = DistributionSpec.half_t(4.0)
    for count in FIGURE_OUTLIER_GRID:
        estimators = (
            EstimatorSpec("mom"),
            EstimatorSpec("weighted", p=1.0),
            EstimatorSpec("weighted", p=2.0),
            EstimatorSpec("trimmed", epsilon=count / FIGURE_SAMPLE_SIZE),
        )
        spec = ExperimentSpec(
            n=FIGURE_SAMPLE_SIZE,
            distribution=dist,
            contamination=ContaminationSpec(count, FIGURE_OUTLIER_VALUE),
            k_grid=FIGURE_K_GRID,
            estimators=estimators,
            replications=replications,
            base_seed=base_seed,
        )
        rows.extend(run_experiment(spec, parallelism).rows)
    return ExperimentTable(tuple(sorted(rows, key=_row_key)))


def _format_float(value: float) -> str:
    return format(value, ".17g")


def _row_fields(row: ResultRow) -> dict:
    m = row.metrics
    return {
        "estimator": row.estimator,
        "p": row.p,
        "k": row.k,
        "O": row.outliers,
        "N": row.n,
        "replications": m.replications,
        "mean_error": m.mean_error,
        "mean_abs_error": m.mean_abs_error,
        "rescaled_sd": m.rescaled_sd,
        "max_abs_error": m.max_abs_error,
        "base_seed": row.base_seed,
    }


def _write_rows(rows: list[ResultRow], handle, fmt: str) -> None:
    if fmt == "csv":
        handle.write(",".join(CSV_COLUMNS) + "\n")
        for row in rows:
            fields = _row_fields(row)
            cells = [
                fields["estimator"],
                "" if fields["p"] is None else _format_float(fields["p"]),
                str(fields["k"]),
                str(fields["O"]),
                str(fields["N"]),
                str(fields["replications"]),
                _format_float(fields["mean_error"]),
                _format_float(fields["mean_abs_error"]),
                _format_float(fields["rescaled_sd"]),
                _format_float(fields["max_abs_error"]),
                str(fields["base_seed"]),
            ]
            handle.write(",".join(cells) + "\n")
    else:
        for row in rows:
            handle.write(json.dumps(_row_fields(row)) + "\n")


def emit_results(table: ExperimentTable, fmt: str, destination) -> None:
    """Write the table sorted by (estimator, k, O); floats carry 17 significant digits.

    ``destination`` is a path or an open text handle.  ``fmt`` is "csv"
    or "jsonl"; both carry identical field content.
    """
    if fmt not in ("csv", "jsonl"):
        raise ConfigError([f"format: must be csv or jsonl, got {fmt!r}"])
    if not table.rows:
        raise ValueError("refusing to emit an empty table")
    rows = sorted(table.rows, key=_row_key)
    if hasattr(destination, "write"):
        _write_rows(rows, destination, fmt)
    else:
        with open(destination, "w", encoding="ascii", newline="") as handle:
            _write_rows(rows, handle, fmt)


_DISTRIBUTION_KEYS = {
    "normal": {"kind", "mean", "sd"},
    "student_t": {"kind", "df"},
    "half_t": {"kind", "df"},
    "pareto": {"kind", "shape", "scale"},
}

_ESTIMATOR_KEYS = {
    "weighted": {"kind", "p"},
    "mom": {"kind"},
    "trimmed": {"kind", "epsilon"},
    "adaptive": {"kind", "p", "contamination_bound"},
}

_TOP_KEYS = {
    "schema_version",
    "N",
    "distribution",
    "contamination",
    "k_grid",
    "estimators",
    "replications",
    "base_seed",
}


def _require_int(payload: dict, key: str, problems: list[str]) -> int:
    value = payload.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        problems.append(f"{key}: must be an integer")
        return 1
    return value


def _parse_distribution(payload, problems: list[str]) -> DistributionSpec:
    fallback = DistributionSpec.normal()
    if not isinstance(payload, dict):
        problems.append("distribution: must be an object")
        return fallback
    kind = payload.get("kind")
    if kind not in _DISTRIBUTION_KEYS:
        problems.append(f"distribution.kind: must be one of {sorted(_DISTRIBUTION_KEYS)}")
        return fallback
    for key in sorted(set(payload) - _DISTRIBUTION_KEYS[kind]):
        problems.append(f"distribution.{key}: unknown field for kind {kind!r}")
    kwargs = {key: value for key, value in payload.items() if key in _DISTRIBUTION_KEYS[kind] and key != "kind"}
    try:
        return DistributionSpec(kind, **kwargs)
    except (TypeError, ValueError) as exc:
        problems.append(f"distribution: {exc}")
        return fallback


def _parse_contamination(payload, problems: list[str]) -> ContaminationSpec:
    if payload is None:
        return ContaminationSpec(0)
    if not isinstance(payload, dict):
        problems.append("contamination: must be an object")
        return ContaminationSpec(0)
    for key in sorted(set(payload) - {"count", "value"}):
        problems.append(f"contamination.{key}: unknown field")
    try:
        return ContaminationSpec(
            count=payload.get("count", 0),
            value=float(payload.get("value", 1000.0)),
        )
    except (TypeError, ValueError) as exc:
        problems.append(f"contamination: {exc}")
        return ContaminationSpec(0)


def _parse_estimators(payload, problems: list[str]) -> tuple[EstimatorSpec, ...]:
    if not isinstance(payload, list) or not payload:
        problems.append("estimators: must be a non-empty array")
        return ()
    specs = []
    for index, entry in enumerate(payload):
        label = f"estimators[{index}]"
        if not isinstance(entry, dict):
            problems.append(f"{label}: must be an object")
            continue
        kind = entry.get("kind")
        if kind not in _ESTIMATOR_KEYS:
            problems.append(f"{label}.kind: must be one of {sorted(_ESTIMATOR_KEYS)}")
            continue
        bad = False
        for key in sorted(set(entry) - _ESTIMATOR_KEYS[kind]):
            problems.append(f"{label}.{key}: unknown field for kind {kind!r}")
            bad = True
        if bad:
            continue
        kwargs = {key: value for key, value in entry.items() if key != "kind"}
        try:
            specs.append(EstimatorSpec(kind, **kwargs))
        except (TypeError, ValueError) as exc:
            problems.append(f"{label}: {exc}")
    return tuple(specs)


def parse_config(text: str) -> ExperimentSpec:
    """Parse a JSON experiment description, rejecting anything unrecognised.

    Collects every problem before raising, so one round trip reports all
    violated fields.
    """
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"config: not valid JSON ({exc})"]) from exc
    if not isinstance(payload, dict):
        raise ConfigError(["config: must be a JSON object"])

    problems: list[str] = []
    for key in sorted(set(payload) - _TOP_KEYS):
        problems.append(f"{key}: unknown field")
    for key in ("schema_version", "N", "distribution", "k_grid", "estimators", "replications", "base_seed"):
        if key not in payload:
            problems.append(f"{key}: required field is missing")

    if "schema_version" in payload and payload["schema_version"] != SCHEMA_VERSION:
        problems.append(f"schema_version: expected {SCHEMA_VERSION}, got {payload['schema_version']!r}")

    n = _require_int(payload, "N", problems) if "N" in payload else 1
    replications = _require_int(payload, "replications", problems) if "replications" in payload else 1
    base_seed = _require_int(payload, "base_seed", problems) if "base_seed" in payload else 0

    k_grid: tuple[int, ...] = ()
    if "k_grid" in payload:
        raw_grid = payload["k_grid"]
        if not isinstance(raw_grid, list) or not raw_grid or not all(
            isinstance(k, int) and not isinstance(k, bool) for k in raw_grid
        ):
            problems.append("k_grid: must be a non-empty array of integers")
        else:
            k_grid = tuple(raw_grid)

    distribution = _parse_distribution(payload.get("distribution"), problems) if "distribution" in payload else DistributionSpec.normal()
    contamination = _parse_contamination(payload.get("contamination"), problems)
    estimators = _parse_estimators(payload.get("estimators"), problems) if "estimators" in payload else ()

    if problems:
        raise ConfigError(problems)

    spec = ExperimentSpec(
        n=n,
        distribution=distribution,
        contamination=contamination,
        k_grid=k_grid,
        estimators=estimators,
        replications=replications,
        base_seed=base_seed,
    )
    problems = validate_spec(spec)
    if problems:
        raise ConfigError(problems)
    return spec
