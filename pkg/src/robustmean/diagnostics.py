"""Block-level diagnostics used to probe the estimator numerically."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .estimators import BlockPartition, Sample


@dataclass(frozen=True, eq=False)
class SelfNormalizedStats:
    """Per-block studentised statistics around a known centre.

    ``rms_dev`` is the root mean square deviation about the true mean;
    ``self_norm`` is the block deviation divided by ``rms_dev`` and lies
    in [-1, 1] by Cauchy-Schwarz; ``t_stat`` is the block deviation
    divided by the within-block sd.  A degenerate denominator makes the
    affected ratio 0.
    """

    t_stat: np.ndarray
    self_norm: np.ndarray
    rms_dev: np.ndarray


def self_normalized(sample: Sample, part: BlockPartition, true_mean: float) -> SelfNormalizedStats:
    x = sample.values
    if part.n != x.size:
        raise ValueError("partition does not cover this sample")
    k = part.k
    t_stat = np.zeros(k)
    self_norm = np.zeros(k)
    rms_dev = np.zeros(k)
    for j, (lo, hi) in enumerate(part.blocks()):
        block = x[lo:hi]
        dev = float(block.mean()) - true_mean
        sd = math.sqrt(float(np.square(block - block.mean()).mean()))
        rms = math.sqrt(float(np.square(block - true_mean).mean()))
        rms_dev[j] = rms
        if sd > 0.0:
            t_stat[j] = dev / sd
        if rms > 0.0:
            self_norm[j] = dev / rms
    return SelfNormalizedStats(t_stat, self_norm, rms_dev)


def outlier_magnitude(sample: Sample, part: BlockPartition, true_sigma: float) -> float | None:
    """1 plus the smallest normalised inlier/outlier gap over corrupted blocks.

    Reads the contamination mask, so it only applies to samples that
    went through ``contaminate``.  Returns None when no block mixes
    inliers and outliers, in particular when nothing is corrupted.
    """
    if true_sigma <= 0:
        raise ValueError("true_sigma must be positive")
    if sample.outlier_mask is None:
        raise ValueError("sample carries no outlier mask")
    if part.n != sample.n:
        raise ValueError("partition does not cover this sample")
    x = sample.values
    mask = sample.outlier_mask
    smallest = math.inf
    for lo, hi in part.blocks():
        hits = mask[lo:hi]
        count = int(hits.sum())
        if count == 0 or count == hi - lo:
            # the gap needs both sub-means to exist
            continue
        block = x[lo:hi]
        gap = float(block[~hits].mean()) - float(block[hits].mean())
        smallest = min(smallest, count * gap * gap / ((hi - lo) * true_sigma * true_sigma))
    if math.isinf(smallest):
        return None
    return 1.0 + smallest


def tail_quantile_check(
    errors: np.ndarray,
    sigma: float,
    n: int,
    s_grid: np.ndarray,
    scan_constant: float = 1.0,
) -> np.ndarray:
    """Empirical frequency of |error| exceeding ``c * sigma * sqrt(s/n)`` per s.

    Compare against tail bounds of the form ``2 * exp(-s)``.
    """
    if sigma <= 0 or n < 1:
        raise ValueError("sigma must be positive and n at least 1")
    errors = np.abs(np.asarray(errors, dtype=np.float64))
    return np.array(
        [float(np.mean(errors > scan_constant * sigma * math.sqrt(s / n))) for s in np.asarray(s_grid)]
    )
