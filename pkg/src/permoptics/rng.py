"""Counter-based random streams and block-exact Bernoulli counting.

Every random draw in the package comes from a Philox counter-based generator
keyed by (seed, stream tag), so identical seeds are bit-identical across runs.

Bernoulli trial runs are tiled into fixed-size blocks of 2**26 trials; block b
draws from its own stream keyed by (seed, b).  A partitioned run only decides
which worker owns which whole blocks, so the merged success count is
bit-identical for every partition count and scheduler interleaving.

Successes inside a block are counted by geometric gap inversion: one uniform
per success (plus one terminal draw), which keeps runs at click probabilities
around 1e-12 affordable.
"""

from __future__ import annotations

import math

import numpy as np

U64 = (1 << 64) - 1

BLOCK_TRIALS = 1 << 26
GENERATOR_ID = "philox4x64-block26-geometric/1"

_MAX_GAP_BATCH = 4_000_000


def philox_generator(seed: int, stream: int) -> np.random.Generator:
    """Philox stream keyed by (seed, stream); distinct keys never collide."""
    key = np.array([seed & U64, stream & U64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def derive_seed(*parts: int) -> int:
    """Mix integers into a 64-bit sub-seed (splitmix-style finalizer)."""
    x = 0x9E3779B97F4A7C15
    for part in parts:
        x = (x ^ (part & U64)) & U64
        x = (x * 0xBF58476D1CE4E5B9) & U64
        x ^= x >> 27
        x = (x * 0x94D049BB133111EB) & U64
        x ^= x >> 31
    return x


def block_count(n_trials: int) -> int:
    return max(1, -(-n_trials // BLOCK_TRIALS))


def partition_block_ranges(n_trials: int, partitions: int) -> list[tuple[int, int]]:
    """Split the block index space into ``partitions`` contiguous ranges."""
    if partitions < 1:
        raise ValueError("partitions must be at least 1")
    nb = block_count(n_trials)
    bounds = [nb * j // partitions for j in range(partitions + 1)]
    return [(bounds[j], bounds[j + 1]) for j in range(partitions)]


def block_trial_span(n_trials: int, block: int) -> int:
    """Number of trials covered by block index ``block``."""
    lo = block * BLOCK_TRIALS
    hi = min(n_trials, lo + BLOCK_TRIALS)
    return max(0, hi - lo)


def _block_successes(gen: np.random.Generator, trials: int, p: float) -> int:
    if trials <= 0 or p <= 0.0:
        return 0
    if p >= 1.0:
        return trials
    log_q = math.log1p(-p)
    target = float(trials)
    successes = 0
    position = 0.0
    while position <= target:
        remaining = max(1.0, (target - position) * p)
        batch = int(min(_MAX_GAP_BATCH, remaining * 1.2 + 8.0 * math.sqrt(remaining) + 16.0))
        u = gen.random(batch)
        gaps = 1.0 + np.floor(np.log1p(-u) / log_q)
        positions = position + np.cumsum(gaps)
        successes += int(np.count_nonzero(positions <= target))
        position = float(positions[-1])
    return successes


def count_successes(
    p: float,
    n_trials: int,
    seed: int,
    block_range: tuple[int, int] | None = None,
) -> tuple[int, int]:
    """Count Bernoulli(p) successes over the run's trials.

    With ``block_range=(lo, hi)`` only blocks in [lo, hi) are evaluated (the
    partitioned path).  Returns (successes, trials_covered).
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability out of range: {p}")
    if n_trials < 0:
        raise ValueError("trial count must be nonnegative")
    lo, hi = block_range if block_range is not None else (0, block_count(n_trials))
    successes = 0
    trials_covered = 0
    for block in range(lo, hi):
        span = block_trial_span(n_trials, block)
        if span == 0:
            continue
        gen = philox_generator(seed, block)
        successes += _block_successes(gen, span, p)
        trials_covered += span
    return successes, trials_covered
