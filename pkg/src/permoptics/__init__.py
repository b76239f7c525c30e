"""permoptics: desk-scale linear-optics permanent estimation.

Exact permanent kernels, the thermal-light click-probability model with a
brute-force Fock oracle, seeded Monte Carlo estimation of permanents from
coincidence statistics, and closed-form sample-complexity analysis.
"""

__version__ = "0.1.0"

from .fock import DetectionModel, fock_oracle_probability
from .matrices import (
    Hpsm,
    Unitary,
    apply_phase_gauge,
    haar_unitaries,
    haar_unitary,
    hpsm_from,
    scale_hpsm,
    spectral_decompose,
)
from .network import BeamSplitterStage, balanced_two_mode, four_mode_cascade, network_to_unitary
from .permanent import (
    DimensionLimitError,
    permanent_exact,
    permanent_glynn,
    permanent_naive,
    permanent_ryser,
)
from .photonics import (
    CountRates,
    ThermalBank,
    apply_loss,
    click_probability_interfering,
    click_probability_no_interference,
    no_interference_permanent_estimate,
    precompensate_loss,
    reconstruct_unitary_moduli,
    simulate_count_rates,
    single_photon_click_probability,
    thermal_pmf,
    thermal_visibility,
)
from .resources import (
    ResourceEstimate,
    ResourceQuery,
    cost_comparison,
    haar_average_asymptote,
    haar_average_permanent,
    inverse_erf,
    margin_of_error,
    max_click_probability,
    resolve,
    samples_almost_multiplicative_thermal,
    samples_almost_multiplicative_unitary,
    samples_multiplicative_thermal,
    samples_multiplicative_unitary,
)
from .sampling import (
    SamplingPlan,
    SamplingResult,
    bernoulli_estimate,
    empirical_error_sweep,
    error_sweep_at_p,
    estimate_permanent_thermal,
    estimate_permanent_unitary,
    merge,
)

__all__ = [
    "__version__",
    "BeamSplitterStage",
    "CountRates",
    "DetectionModel",
    "DimensionLimitError",
    "Hpsm",
    "ResourceEstimate",
    "ResourceQuery",
    "SamplingPlan",
    "SamplingResult",
    "ThermalBank",
    "Unitary",
    "apply_loss",
    "apply_phase_gauge",
    "balanced_two_mode",
    "bernoulli_estimate",
    "click_probability_interfering",
    "click_probability_no_interference",
    "cost_comparison",
    "empirical_error_sweep",
    "error_sweep_at_p",
    "estimate_permanent_thermal",
    "estimate_permanent_unitary",
    "fock_oracle_probability",
    "four_mode_cascade",
    "haar_average_asymptote",
    "haar_average_permanent",
    "haar_unitaries",
    "haar_unitary",
    "hpsm_from",
    "inverse_erf",
    "margin_of_error",
    "max_click_probability",
    "merge",
    "network_to_unitary",
    "no_interference_permanent_estimate",
    "permanent_exact",
    "permanent_glynn",
    "permanent_naive",
    "permanent_ryser",
    "precompensate_loss",
    "reconstruct_unitary_moduli",
    "resolve",
    "samples_almost_multiplicative_thermal",
    "samples_almost_multiplicative_unitary",
    "samples_multiplicative_thermal",
    "samples_multiplicative_unitary",
    "scale_hpsm",
    "simulate_count_rates",
    "single_photon_click_probability",
    "spectral_decompose",
    "thermal_pmf",
    "thermal_visibility",
]
