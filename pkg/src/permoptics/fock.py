"""Brute-force Fock-space oracle for thermal click probabilities.

Independent check of the permanent-based click formula: enumerate photon-number
inputs weighted by their thermal probabilities and propagate each Fock state
through the interferometer with repeated-submatrix transition amplitudes.  The
probability mass of every configuration the enumeration drops (photon numbers
above the cutoff, or totals above the threshold-enumeration guard) is returned
as a rigorous truncation bound.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .matrices import Unitary
from .permanent import permanent_ryser
from .photonics import ThermalBank, thermal_pmf

ORACLE_MAX_DIM = 4
ORACLE_MAX_CUTOFF = 8

DETECTION_KINDS = ("exact_single_photon", "threshold")


@dataclass(frozen=True)
class DetectionModel:
    """Detector semantics plus the oracle's Fock-space truncation.

    ``exact_single_photon``: every detector sees exactly one photon.
    ``threshold``: every detector sees at least one photon (non-resolving).
    ``max_total_photons`` caps the per-configuration photon total enumerated in
    threshold mode; heavier configurations are charged to the truncation bound
    instead of exploding the permanent sizes.
    """

    kind: str = "exact_single_photon"
    fock_cutoff: int = 4
    max_total_photons: int = 12

    def __post_init__(self):
        if self.kind not in DETECTION_KINDS:
            raise ValueError(f"unknown detection kind {self.kind!r}")
        if self.fock_cutoff < 1:
            raise ValueError("fock_cutoff must be at least 1")
        if self.max_total_photons < 1:
            raise ValueError("max_total_photons must be at least 1")


def _repeat_indices(config) -> list[int]:
    out: list[int] = []
    for mode, count in enumerate(config):
        out.extend([mode] * count)
    return out


def _transition_probability(
    u: np.ndarray,
    in_config: tuple[int, ...],
    out_config: tuple[int, ...],
    memo: dict,
) -> float:
    """|amplitude|^2 for Fock input -> Fock output through ``u``."""
    key = (in_config, out_config)
    cached = memo.get(key)
    if cached is not None:
        return cached
    cols = _repeat_indices(in_config)
    rows = _repeat_indices(out_config)
    sub = u[np.ix_(rows, cols)]
    amp = permanent_ryser(sub)
    norm = math.prod(math.factorial(n) for n in in_config)
    norm *= math.prod(math.factorial(n) for n in out_config)
    prob = abs(amp) ** 2 / norm
    memo[key] = prob
    return prob


def _compositions_min_one(total: int, parts: int):
    """All output patterns with ``parts`` detectors each seeing >= 1 photon."""
    for extra in itertools.combinations_with_replacement(range(parts), total - parts):
        pattern = [1] * parts
        for mode in extra:
            pattern[mode] += 1
        yield tuple(pattern)


def fock_oracle_probability(
    u: Unitary, bank: ThermalBank, model: DetectionModel
) -> tuple[float, float]:
    """All-detector click probability by direct Fock enumeration.

    Returns (probability, truncation_bound); the true value differs from the
    returned probability by at most the bound.  Guards: dim <= 4, cutoff <= 8.
    """
    dim = u.dim
    if dim != bank.dim:
        raise ValueError(f"dimension mismatch: unitary {dim}, bank {bank.dim}")
    if dim > ORACLE_MAX_DIM:
        raise ValueError(f"oracle guard: dimension {dim} > {ORACLE_MAX_DIM}")
    if model.fock_cutoff > ORACLE_MAX_CUTOFF:
        raise ValueError(f"oracle guard: cutoff {model.fock_cutoff} > {ORACLE_MAX_CUTOFF}")

    cutoff = model.fock_cutoff
    mus = bank.mus
    # Mass of inputs with any mode above the cutoff: 1 - prod_i P(n_i <= cutoff).
    truncation = 1.0 - math.prod(1.0 - mu ** (cutoff + 1) for mu in mus)

    pmf_table = [[thermal_pmf(mu, n) for n in range(cutoff + 1)] for mu in mus]
    memo: dict = {}
    matrix = u.matrix
    probability = 0.0
    for config in itertools.product(range(cutoff + 1), repeat=dim):
        total = sum(config)
        if model.kind == "exact_single_photon":
            if total != dim:
                continue
            weight = math.prod(pmf_table[i][n] for i, n in enumerate(config))
            probability += weight * _transition_probability(
                matrix, config, (1,) * dim, memo
            )
        else:
            if total < dim:
                continue
            weight = math.prod(pmf_table[i][n] for i, n in enumerate(config))
            if total > model.max_total_photons:
                truncation += weight
                continue
            click_prob = sum(
                _transition_probability(matrix, config, out_config, memo)
                for out_config in _compositions_min_one(total, dim)
            )
            probability += weight * click_prob
    return probability, truncation
