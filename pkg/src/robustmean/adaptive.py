"""Data-driven block count selection with a contamination-resistant scale.

The weighted block estimator needs a block count, and the right count
depends on how many entries are corrupted.  When that number is unknown,
doubling the block count until the blocks look calm is a workable
substitute: the scan stops at the first count whose harmonic mean
dispersion drops below a threshold tied to a crude but hard-to-corrupt
scale estimate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .estimators import BlockSummary, Sample, block_summaries, partition, weighted_mean


@dataclass(frozen=True)
class AdaptiveConfig:
    """Knobs for the block-count scan.

    ``threshold_constant`` multiplies the robust scale inside the
    stopping rule.  ``plain_threshold_constant`` is the tighter analogue
    used by :func:`event_check_plain` when the true scale is known; it
    exists for diagnostics and is not used by the scan itself.
    """

    p: float = 2.0
    contamination_bound: float = 0.5
    threshold_constant: float = 80.0
    plain_threshold_constant: float = 4.0

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("p must be >= 1")
        if not 0.0 < self.contamination_bound < 1.0:
            raise ValueError("contamination_bound must lie in (0, 1)")
        if self.threshold_constant <= 0 or self.plain_threshold_constant <= 0:
            raise ValueError("threshold constants must be positive")


@dataclass(frozen=True)
class ScaleEstimate:
    sigma_tilde: float
    groups_used: int


def robust_sigma(sample: Sample) -> ScaleEstimate:
    """Median over groups of 100 of the mean absolute gap between paired neighbours.

    Consecutive observations are paired off, 50 pairs per group; the +b
    part of any shift cancels inside each pair, so only spread survives.
    Needs at least 400 observations (four groups); a trailing remainder
    shorter than a group is dropped.
    """
    x = sample.values
    groups = x.size // 100
    if groups < 4:
        raise ValueError("robust_sigma needs at least 400 observations")
    pairs = x[: groups * 100].reshape(groups, 50, 2)
    gaps = np.abs(pairs[:, :, 1] - pairs[:, :, 0]).mean(axis=1)
    return ScaleEstimate(float(np.median(gaps)), groups)


def harmonic_mean_inverse(summaries: list[BlockSummary], p: float) -> float:
    """Harmonic mean of the block dispersions raised to ``p``.

    One calm block keeps this small no matter how loud the others are;
    a block with zero dispersion drives it all the way to 0.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    if not summaries:
        raise ValueError("no blocks")
    sds = np.array([s.sd for s in summaries])
    ref = sds.min()
    if ref == 0.0:
        return 0.0
    # ref-normalised ratios stay in (0, 1], so nothing overflows
    ratios = (ref / sds) ** p
    return float(ref**p * sds.size / ratios.sum())


def _calm(summaries: list[BlockSummary], p: float, scale: float, constant: float, bound: float) -> bool:
    return harmonic_mean_inverse(summaries, p) <= (constant * scale / (1.0 - bound)) ** p


def event_check(summaries: list[BlockSummary], p: float, sigma_tilde: float, config: AdaptiveConfig) -> bool:
    """Stopping rule of the scan: dispersions are calm relative to ``sigma_tilde``."""
    return _calm(summaries, p, sigma_tilde, config.threshold_constant, config.contamination_bound)


def event_check_plain(summaries: list[BlockSummary], p: float, sigma: float, config: AdaptiveConfig) -> bool:
    """The same rule against a known true scale, with the tighter constant."""
    return _calm(summaries, p, sigma, config.plain_threshold_constant, config.contamination_bound)


def adaptive_k(sample: Sample, config: AdaptiveConfig, sigma_tilde: float) -> int:
    """First power-of-two block count that passes :func:`event_check`.

    Scans k = 2, 4, ... up to the largest power of two not exceeding the
    sample size, rebuilding the partition and summaries at every step.
    Falls back to 2 when no count passes.
    """
    n = sample.n
    if n < 2:
        raise ValueError("need at least two observations")
    for i in range(1, n.bit_length()):
        k = 1 << i
        summaries = block_summaries(sample, partition(n, k))
        if event_check(summaries, config.p, sigma_tilde, config):
            return k
    return 2


def adaptive_estimate(sample: Sample, config: AdaptiveConfig) -> float:
    """Weighted block mean at the scanned block count.

    Fully data-driven: the scale comes from :func:`robust_sigma`, so the
    caller supplies nothing beyond the sample and the knobs.
    """
    scale = robust_sigma(sample)
    k = adaptive_k(sample, config, scale.sigma_tilde)
    return weighted_mean(block_summaries(sample, partition(sample.n, k)), config.p)
