"""Blockwise robust mean estimation for heavy-tailed, contaminated data."""

from .adaptive import (
    AdaptiveConfig,
    ScaleEstimate,
    adaptive_estimate,
    adaptive_k,
    event_check,
    event_check_plain,
    harmonic_mean_inverse,
    robust_sigma,
)
from .datagen import ContaminationSpec, DistributionSpec, abs_t_mean, abs_t_sd, contaminate, sample
from .diagnostics import SelfNormalizedStats, outlier_magnitude, self_normalized, tail_quantile_check
from .estimators import (
    BlockPartition,
    BlockSummary,
    EstimatorSpec,
    Sample,
    block_summaries,
    block_weights,
    estimate,
    median_of_means,
    partition,
    trimmed_mean,
    weighted_mean,
)
from .harness import (
    CSV_COLUMNS,
    FIGURE_DEFAULT_REPLICATIONS,
    FIGURE_DEFAULT_SEED,
    FIGURE_K_GRID,
    FIGURE_OUTLIER_GRID,
    FIGURE_OUTLIER_VALUE,
    FIGURE_SAMPLE_SIZE,
    SCHEMA_VERSION,
    AggregateMetrics,
    ConfigError,
    ExperimentSpec,
    ExperimentTable,
    ResultRow,
    emit_results,
    figure_grid_table,
    parse_config,
    run_experiment,
    validate_spec,
)
from .seeding import generator, substream_seed

__version__ = "0.1.0"

__all__ = [
    "CSV_COLUMNS",
    "FIGURE_DEFAULT_REPLICATIONS",
    "FIGURE_DEFAULT_SEED",
    "FIGURE_K_GRID",
    "FIGURE_OUTLIER_GRID",
    "FIGURE_OUTLIER_VALUE",
    "FIGURE_SAMPLE_SIZE",
    "SCHEMA_VERSION",
    "AdaptiveConfig",
    "AggregateMetrics",
    "BlockPartition",
    "BlockSummary",
    "ConfigError",
    "ContaminationSpec",
    "DistributionSpec",
    "EstimatorSpec",
    "ExperimentSpec",
    "ExperimentTable",
    "ResultRow",
    "Sample",
    "ScaleEstimate",
    "SelfNormalizedStats",
    "abs_t_mean",
    "abs_t_sd",
    "adaptive_estimate",
    "adaptive_k",
    "block_summaries",
    "block_weights",
    "contaminate",
    "emit_results",
    "estimate",
    "event_check",
    "event_check_plain",
    "figure_grid_table",
    "generator",
    "harmonic_mean_inverse",
    "median_of_means",
    "outlier_magnitude",
    "parse_config",
    "partition",
    "robust_sigma",
    "run_experiment",
    "sample",
    "self_normalized",
    "substream_seed",
    "tail_quantile_check",
    "trimmed_mean",
    "validate_spec",
    "weighted_mean",
]
