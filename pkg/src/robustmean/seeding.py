"""Deterministic RNG substream derivation.

Every random draw in the harness comes from a generator seeded with an
integer derived here.  Hashing (base_seed, tag, index) gives independent
streams that do not depend on scheduling, thread count, or platform.
"""

import hashlib

import numpy as np


def substream_seed(base_seed: int, tag: str, index: int) -> int:
    """64-bit seed for the substream named by ``tag`` at position ``index``."""
    digest = hashlib.sha256(f"{base_seed}:{tag}:{index}".encode("ascii")).digest()
    return int.from_bytes(digest[:8], "little")


def generator(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)
