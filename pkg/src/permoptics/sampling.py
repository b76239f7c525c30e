"""Seeded Monte Carlo emulation of the coincidence-counting experiment.

Each estimation run draws Bernoulli trials at the exact click probability of a
configuration (the binomial model of the experiment), pools the successes into
a proportion estimate with a normal-approximation confidence interval, and
inverts the click relation to a permanent estimate.

Runs are deterministic in (seed, partitions) and partition-merge exact: see
``rng`` for the block construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import rng
from .matrices import Unitary
from .photonics import ThermalBank, click_probability_interfering, single_photon_click_probability
from .resources import critical_value, margin_of_error

SMALL_COUNT_THRESHOLD = 10.0


@dataclass(frozen=True)
class SamplingPlan:
    """Trial budget, master seed, partition count, and confidence level."""

    n_samples: int
    seed: int
    partitions: int = 1
    confidence: float = 0.95

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be at least 1")
        if self.partitions < 1:
            raise ValueError("partitions must be at least 1")
        if not 0.0 < self.confidence < 1.0:
            raise ValueError("confidence must lie in (0, 1)")


@dataclass(frozen=True)
class SamplingResult:
    """Bernoulli-trial statistics plus the derived permanent estimate.

    ``perm_scale`` is the factor linking the click probability to the
    permanent (the all-mode vacuum weight for thermal runs, 1 for
    single-photon runs): permanent = p / perm_scale.
    """

    n: int
    k: int
    p_hat: float
    stderr: float
    ci: tuple[float, float]
    confidence: float
    perm_scale: float
    perm_estimate: float
    perm_stderr: float
    perm_ci: tuple[float, float]
    seed: int
    partitions: int
    generator: str
    small_count_warning: bool
    p_true: float | None = None

    @classmethod
    def from_counts(
        cls,
        k: int,
        n: int,
        confidence: float,
        seed: int,
        partitions: int,
        perm_scale: float = 1.0,
        p_true: float | None = None,
    ) -> "SamplingResult":
        if not 0 <= k <= n:
            raise ValueError(f"invalid counts k={k}, n={n}")
        p_hat = k / n if n else 0.0
        stderr = math.sqrt(p_hat * (1.0 - p_hat) / n) if n else 0.0
        z = critical_value(confidence)
        lo = max(0.0, p_hat - z * stderr)
        hi = min(1.0, p_hat + z * stderr)
        if k == 0 and n > 0:
            # The Wald interval collapses to [0, 0] with no successes, which
            # has zero coverage for any p > 0; use the exact zero-success
            # upper bound instead.
            hi = min(1.0, 1.0 - (1.0 - confidence) ** (1.0 / n))
        small = n > 0 and (n * p_hat < SMALL_COUNT_THRESHOLD or n * (1.0 - p_hat) < SMALL_COUNT_THRESHOLD)
        return cls(
            n=n,
            k=k,
            p_hat=p_hat,
            stderr=stderr,
            ci=(lo, hi),
            confidence=confidence,
            perm_scale=perm_scale,
            perm_estimate=p_hat / perm_scale,
            perm_stderr=stderr / perm_scale,
            perm_ci=(lo / perm_scale, hi / perm_scale),
            seed=seed,
            partitions=partitions,
            generator=rng.GENERATOR_ID,
            small_count_warning=small,
            p_true=p_true,
        )

    def as_record(self, config_hash: str = "") -> dict:
        return {
            "config_hash": config_hash,
            "seed": self.seed,
            "partitions": self.partitions,
            "n": self.n,
            "k": self.k,
            "p_hat": self.p_hat,
            "ci": list(self.ci),
            "perm_estimate": self.perm_estimate,
            "perm_ci": list(self.perm_ci),
            "generator": self.generator,
        }


def bernoulli_partition_results(
    p: float, plan: SamplingPlan, perm_scale: float = 1.0
) -> list[SamplingResult]:
    """Per-partition results; pooling them reproduces the monolithic run.

    Partitions own disjoint block ranges, so they run concurrently; the
    outcome is positional and independent of scheduling.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability out of range: {p}")
    ranges = rng.partition_block_ranges(plan.n_samples, plan.partitions)

    def count(block_range):
        return rng.count_successes(p, plan.n_samples, plan.seed, block_range)

    if plan.partitions > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=min(plan.partitions, 8)) as pool:
            counts = list(pool.map(count, ranges))
    else:
        counts = [count(block_range) for block_range in ranges]
    return [
        SamplingResult.from_counts(
            k,
            covered,
            plan.confidence,
            seed=plan.seed,
            partitions=1,
            perm_scale=perm_scale,
            p_true=p,
        )
        for k, covered in counts
    ]


def bernoulli_estimate(p: float, plan: SamplingPlan, perm_scale: float = 1.0) -> SamplingResult:
    """Seeded Bernoulli run at probability ``p`` under the given plan."""
    parts = bernoulli_partition_results(p, plan, perm_scale)
    merged = merge(parts)
    return replace(merged, seed=plan.seed, partitions=plan.partitions)


def merge(results: list[SamplingResult]) -> SamplingResult:
    """Pool results that estimate the same probability.

    Exactly equivalent to a single run over the concatenated trial stream;
    associative and commutative, so any scheduler interleaving agrees.
    """
    if not results:
        raise ValueError("cannot merge an empty list of results")
    first = results[0]
    for r in results[1:]:
        if (
            r.confidence != first.confidence
            or r.perm_scale != first.perm_scale
            or r.generator != first.generator
            or r.p_true != first.p_true
        ):
            raise ValueError("cannot merge results from different contexts")
    k = sum(r.k for r in results)
    n = sum(r.n for r in results)
    return SamplingResult.from_counts(
        k,
        n,
        first.confidence,
        seed=first.seed,
        partitions=sum(r.partitions for r in results),
        perm_scale=first.perm_scale,
        p_true=first.p_true,
    )


def estimate_permanent_thermal(
    u: Unitary, bank: ThermalBank, plan: SamplingPlan
) -> SamplingResult:
    """Simulate the thermal coincidence experiment and invert to a permanent.

    Trials fire at the exact all-click probability; the estimate divides out
    the vacuum product, so perm_estimate targets Perm[U diag(mu) U^dag].
    """
    p = click_probability_interfering(u, bank)
    return bernoulli_estimate(p, plan, perm_scale=bank.vacuum_product)


def estimate_permanent_unitary(u: Unitary, plan: SamplingPlan) -> SamplingResult:
    """Single-photon flavor: Bernoulli at |Perm U|^2, no rescaling."""
    p = single_photon_click_probability(u)
    return bernoulli_estimate(p, plan, perm_scale=1.0)


def error_sweep_at_p(
    p: float,
    n_grid,
    repeats: int,
    deltas,
    seed: int,
) -> list[dict]:
    """Empirical error quantiles against the closed-form prediction.

    For each trial count N, runs ``repeats`` independent seeded estimations at
    probability ``p`` and reports, per confidence level, the delta-quantile of
    the relative error |p_hat - p| / p next to the predicted margin.
    """
    if repeats < 1:
        raise ValueError("repeats must be at least 1")
    if p <= 0.0:
        raise ValueError("sweep probability must be positive")
    rows = []
    for n_index, n in enumerate(n_grid):
        n = int(n)
        rel_errors = np.empty(repeats)
        for rep in range(repeats):
            sub_seed = rng.derive_seed(seed, n_index, rep)
            k, _ = rng.count_successes(p, n, sub_seed)
            rel_errors[rep] = abs(k / n - p) / p
        for delta in deltas:
            rows.append(
                {
                    "n": n,
                    "delta": delta,
                    "eps_empirical": float(np.quantile(rel_errors, delta)),
                    "eps_theory": margin_of_error(p, n, delta),
                    "repeats": repeats,
                    "p": p,
                }
            )
    for row in rows:
        row["ratio"] = row["eps_empirical"] / row["eps_theory"]
    return rows


def empirical_error_sweep(
    u: Unitary,
    bank: ThermalBank,
    n_grid,
    repeats: int,
    seed: int,
    delta: float = 0.95,
) -> list[dict]:
    """Error sweep at the exact click probability of a configuration."""
    p = click_probability_interfering(u, bank)
    return error_sweep_at_p(p, n_grid, repeats, [delta], seed)


def loglog_slope(ns, eps) -> float:
    """Least-squares slope of log(eps) against log(N)."""
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.asarray(eps, dtype=float))
    return float(np.polyfit(x, y, 1)[0])
