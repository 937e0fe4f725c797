#!/usr/bin/env python3
"""Gaussian efficiency of the blockwise estimators.

On clean normal data sqrt(N) times the error of the weighted estimator
should behave like a standard normal, while median-of-means pays the
sqrt(pi/2) median premium.  Prints the rescaled standard deviation for a
range of block counts so the finite-k effects are visible.

Example:
    python3 scripts/efficiency_check.py --n 2500 --reps 500
"""

import argparse
import math

import numpy as np

from robustmean import (
    DistributionSpec,
    block_summaries,
    median_of_means,
    partition,
    sample,
    substream_seed,
    weighted_mean,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=2500)
    parser.add_argument("--reps", type=int, default=500)
    parser.add_argument("--seed", type=int, default=424242)
    parser.add_argument("--k", type=int, nargs="+", default=[10, 25, 50, 100])
    args = parser.parse_args()

    dist = DistributionSpec.normal()
    root_n = math.sqrt(args.n)
    print(f"N={args.n}, {args.reps} reps; rescaled sd targets: weighted 1.0, mom {math.sqrt(math.pi / 2):.4f}")
    print(f"{'k':>5}{'weighted p=1':>14}{'weighted p=2':>14}{'mom':>14}")
    for k in args.k:
        part = partition(args.n, k)
        errors = {"w1": [], "w2": [], "mom": []}
        for rep in range(args.reps):
            s = sample(dist, args.n, substream_seed(args.seed, "sample", rep))
            summaries = block_summaries(s, part)
            errors["w1"].append(weighted_mean(summaries, 1.0))
            errors["w2"].append(weighted_mean(summaries, 2.0))
            errors["mom"].append(median_of_means(summaries))
        sds = {key: root_n * float(np.std(vals)) for key, vals in errors.items()}
        print(f"{k:>5}{sds['w1']:>14.4f}{sds['w2']:>14.4f}{sds['mom']:>14.4f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
