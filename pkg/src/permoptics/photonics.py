"""Click probabilities and count rates for thermal light in an interferometer.

The interfering model maps an M-mode configuration to the probability that
every detector fires on exactly one photon:

    p = Perm[U diag(mu) U^dag] * prod_i (1 - mu_i)

The no-interference model replaces multimode interference by independent
classical transfer |U_ji|^2 with thermal bunching enhancement factors, which
is what a fully time-distinguishable experiment measures.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .matrices import Hpsm, Unitary, hpsm_from
from .permanent import permanent_exact

MU_SMALL_REGIME = 0.05

CONVENTIONS = ("factorial_rule", "paper_literal")

# Enhancement factor for a multiplicity pattern of source assignments under
# the alternate published pairing; it swaps the (2,1,1) and (2,2) cases
# relative to the factorial rule.
_LITERAL_FACTORS = {
    2: {(2,): 2.0, (1, 1): 1.0},
    4: {(4,): 24.0, (3, 1): 6.0, (2, 1, 1): 4.0, (2, 2): 2.0, (1, 1, 1, 1): 1.0},
}


@dataclass(frozen=True, eq=False)
class ThermalBank:
    """Per-input-mode mean-photon parameters and channel efficiencies.

    mu_i parametrizes the geometric photon-number distribution
    p(n) = (1 - mu) mu^n, so the mean photon number is mu / (1 - mu).
    eta_i is the overall channel-plus-detector survival probability.
    """

    mus: np.ndarray
    etas: np.ndarray | None = None

    def __post_init__(self):
        mus = np.atleast_1d(np.asarray(self.mus, dtype=float))
        if mus.ndim != 1 or mus.size < 1:
            raise ValueError("mus must be a nonempty vector")
        if np.any(mus < 0.0) or np.any(mus >= 1.0):
            raise ValueError("mean-photon parameters must satisfy 0 <= mu < 1")
        etas = self.etas
        if etas is None:
            etas = np.ones_like(mus)
        else:
            etas = np.atleast_1d(np.asarray(etas, dtype=float))
            if etas.shape != mus.shape:
                raise ValueError("etas must match mus in length")
            if np.any(etas <= 0.0) or np.any(etas > 1.0):
                raise ValueError("efficiencies must satisfy 0 < eta <= 1")
        object.__setattr__(self, "mus", mus)
        object.__setattr__(self, "etas", etas)

    @property
    def dim(self) -> int:
        return self.mus.size

    @property
    def mean_photons(self) -> np.ndarray:
        return self.mus / (1.0 - self.mus)

    @property
    def vacuum_product(self) -> float:
        """prod_i (1 - mu_i), the all-mode vacuum weight."""
        return float(np.prod(1.0 - self.mus))


@dataclass(frozen=True, eq=False)
class CountRates:
    """Simulated singles and coincidence counts for one accumulation run."""

    rep_rate_hz: float
    accum_s: float
    singles: np.ndarray  # singles[i, j]: counts at detector j from input i
    coincidences: float
    approximation_flagged: bool = field(default=False)

    def __post_init__(self):
        singles = np.asarray(self.singles, dtype=float)
        object.__setattr__(self, "singles", singles)
        if self.rep_rate_hz <= 0.0 or self.accum_s <= 0.0:
            raise ValueError("repetition rate and accumulation time must be positive")
        budget = self.rep_rate_hz * self.accum_s
        if np.any(singles < 0.0) or self.coincidences < 0.0:
            raise ValueError("counts must be nonnegative")
        if np.any(singles > budget * (1.0 + 1e-12)):
            raise ValueError("a singles count exceeds the pulse budget f*t")


def thermal_pmf(mu: float, n: int) -> float:
    """Geometric photon-number weight (1 - mu) * mu^n."""
    if not 0.0 <= mu < 1.0:
        raise ValueError(f"mu out of range [0, 1): {mu}")
    if n < 0:
        raise ValueError("photon number must be nonnegative")
    return (1.0 - mu) * mu**n


def _check_dims(u: Unitary, bank: ThermalBank):
    if u.dim != bank.dim:
        raise ValueError(f"dimension mismatch: unitary {u.dim}, bank {bank.dim}")


def _as_probability(value: float, context: str) -> float:
    if value < -1e-12 or value > 1.0 + 1e-12:
        raise ArithmeticError(f"{context} out of [0, 1]: {value}")
    return min(1.0, max(0.0, value))


def interferometer_hpsm(u: Unitary, bank: ThermalBank) -> Hpsm:
    return hpsm_from(u, bank.mus)


def click_probability_interfering(u: Unitary, bank: ThermalBank) -> float:
    """Probability that all M detectors fire on one photon, interfering pulses."""
    _check_dims(u, bank)
    perm = interferometer_hpsm(u, bank).permanent()
    return _as_probability(perm * bank.vacuum_product, "interfering click probability")


def _enhancement(assignment: tuple[int, ...], dim: int, convention: str) -> float:
    counts = tuple(sorted((assignment.count(s) for s in set(assignment)), reverse=True))
    if convention == "factorial_rule":
        return float(math.prod(math.factorial(c) for c in counts))
    if convention == "paper_literal":
        try:
            return _LITERAL_FACTORS[dim][counts]
        except KeyError:
            raise ValueError(
                f"paper_literal convention only covers M in {sorted(_LITERAL_FACTORS)}"
            ) from None
    raise ValueError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")


def click_probability_no_interference(
    u: Unitary, bank: ThermalBank, convention: str = "factorial_rule"
) -> float:
    """Leading-order all-detector click probability for distinguishable pulses.

    Sums over ordered assignments of a source mode to each detector:
    prod_d |U_{d, s_d}|^2 * prod <n_{s_d}>, weighted by the thermal bunching
    enhancement of repeated sources.  The per-source weight is the mean photon
    number mu/(1 - mu); this is the variant that reproduces the bundled
    reference values (at mu << 1 it coincides with weighting by mu itself).

    Under ``factorial_rule`` the enhancement is prod_s (multiplicity of s)!;
    ``paper_literal`` applies the alternate published 4-mode case factors
    verbatim (they swap two cases, see README).  Valid for weak pulses only;
    raises if the leading-order sum leaves [0, 1].
    """
    _check_dims(u, bank)
    if convention == "paper_literal" and u.dim not in _LITERAL_FACTORS:
        raise ValueError(
            f"paper_literal convention only covers M in {sorted(_LITERAL_FACTORS)}"
        )
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")
    weights = np.abs(u.matrix) ** 2
    photon_means = bank.mean_photons
    dim = u.dim
    total = 0.0
    for assignment in itertools.product(range(dim), repeat=dim):
        term = _enhancement(assignment, dim, convention)
        for detector, source in enumerate(assignment):
            term *= weights[detector, source] * photon_means[source]
        total += term
    return _as_probability(total, "no-interference click probability")


def no_interference_permanent_estimate(
    u: Unitary, bank: ThermalBank, convention: str = "factorial_rule"
) -> float:
    """The (incorrect) permanent a distinguishable-pulse run would report."""
    p_no = click_probability_no_interference(u, bank, convention)
    return p_no / bank.vacuum_product


def single_photon_click_probability(u: Unitary) -> float:
    """|Perm U|^2: one photon per input, all detectors fire."""
    value = abs(permanent_exact(u.matrix)) ** 2
    return _as_probability(value, "single-photon click probability")


def thermal_visibility(u: Unitary, bank: ThermalBank, convention: str = "factorial_rule") -> float:
    """Ideal dip visibility (p_no - p_int) / p_no between the two endpoints.

    Both endpoints are leading-order coincidence rates in mean-photon units:
    the permanent of U diag(<n>) U^dag for interfering pulses against the
    bunching sum for distinguishable ones, so shared brightness prefactors
    cancel in the ratio.  A balanced two-mode splitter with equal mus gives
    exactly 1/3 for any mu.
    """
    p_no = click_probability_no_interference(u, bank, convention)
    if p_no <= 0.0:
        raise ValueError("no-interference probability vanished; visibility undefined")
    rate_matrix = u.matrix @ np.diag(bank.mean_photons) @ u.matrix.conj().T
    p_int = permanent_exact(rate_matrix).real
    return (p_no - p_int) / p_no


def apply_loss(bank: ThermalBank) -> ThermalBank:
    """Push each mode through its loss channel; thermal stays thermal.

    The mean photon number scales by eta, so
    mu -> eta mu / (1 - mu + eta mu).
    """
    n_eff = bank.etas * bank.mean_photons
    mus_eff = n_eff / (1.0 + n_eff)
    return ThermalBank(mus=mus_eff, etas=np.ones_like(mus_eff))


def precompensate_loss(bank: ThermalBank, target_mus) -> np.ndarray:
    """Source mean-photon parameters that land on ``target_mus`` after loss.

    Raises if a target needs a source with mu >= 1 (unreachable brightness).
    """
    target = np.atleast_1d(np.asarray(target_mus, dtype=float))
    if target.shape != bank.mus.shape:
        raise ValueError("target length must match the bank dimension")
    if np.any(target < 0.0) or np.any(target >= 1.0):
        raise ValueError("target mean-photon parameters must satisfy 0 <= mu < 1")
    n_target = target / (1.0 - target)
    n_source = n_target / bank.etas
    source = n_source / (1.0 + n_source)
    if not np.all(np.isfinite(source)) or np.any(source >= 1.0):
        raise ValueError("unachievable target: required source mu >= 1")
    return source


def simulate_count_rates(
    u: Unitary, bank: ThermalBank, rep_rate_hz: float, accum_s: float
) -> CountRates:
    """Expected singles and coincidence counts over an accumulation window.

    singles[i, j] = f * t * mu_ij with mu_ij the thermal parameter implied by
    routing |U_ji|^2 of input i's mean photons to detector j.  Configurations
    outside the weak-pulse regime (any mu > 0.05) are flagged: there the
    singles-sum identity sum_j mu_ij ~ mu_i degrades.
    """
    _check_dims(u, bank)
    if rep_rate_hz <= 0.0 or accum_s <= 0.0:
        raise ValueError("repetition rate and accumulation time must be positive")
    weights = np.abs(u.matrix) ** 2  # weights[j, i]: input i -> detector j
    n_in = bank.mean_photons
    n_out = weights.T * n_in[:, None]  # [i, j]
    mu_out = n_out / (1.0 + n_out)
    budget = rep_rate_hz * accum_s
    singles = budget * mu_out
    coincidences = budget * click_probability_interfering(u, bank)
    flagged = bool(np.any(bank.mus > MU_SMALL_REGIME))
    return CountRates(
        rep_rate_hz=rep_rate_hz,
        accum_s=accum_s,
        singles=singles,
        coincidences=coincidences,
        approximation_flagged=flagged,
    )


def reconstruct_unitary_moduli(counts: CountRates) -> np.ndarray:
    """Recover |U_ji| = sqrt(C_ij / C_i) from singles counts.

    Phases are not recoverable from count rates and are left unassigned;
    columns of the result have unit norm by construction.
    """
    singles = counts.singles
    totals = singles.sum(axis=1)
    if np.any(totals <= 0.0):
        raise ValueError("an input mode has zero total counts; moduli undefined")
    moduli = np.sqrt(singles / totals[:, None])  # [i, j] = |U_ji|
    return moduli.T
