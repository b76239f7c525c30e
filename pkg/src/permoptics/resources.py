"""Sample-complexity formulas and probability bounds.

Everything here is closed-form arithmetic on the binomial-sampling error model:
required trial counts for multiplicative and almost-multiplicative error
targets, the inverse margin-of-error relation, the Haar-averaged squared
permanent of a unitary, the maximum attainable all-click probability, and the
photonic-versus-classical cost comparison.

The inverse error function is built in: an algebraic initial approximation
refined by Halley steps against a series/continued-fraction error function, so
the module has no special-function dependencies.  All entry points accept
scalars or numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

FLAVORS = (
    "multiplicative_thermal",
    "multiplicative_unitary",
    "almost_multiplicative_thermal",
    "almost_multiplicative_unitary",
)

_SQRT_PI = math.sqrt(math.pi)
_ERF_SERIES_TERMS = 96
_ERFC_CF_DEPTH = 120
_WINITZKI_A = 0.147


def _erf_series(y: np.ndarray) -> np.ndarray:
    """Taylor series for erf, adequate for |y| <= 2."""
    y2 = y * y
    term = np.array(y, dtype=float, copy=True)
    acc = np.array(y, dtype=float, copy=True)
    for k in range(1, _ERF_SERIES_TERMS):
        term = term * (-y2) / k
        acc = acc + term / (2 * k + 1)
    return acc * (2.0 / _SQRT_PI)


def _erfc_continued_fraction(y: np.ndarray) -> np.ndarray:
    """erfc for y > 2 via the Laplace continued fraction.

    erfc(y) = exp(-y^2)/sqrt(pi) * 1/(y + (1/2)/(y + 1/(y + (3/2)/(y + ...))))
    evaluated bottom-up at fixed depth; converges fast for y >= 2.
    """
    tail = np.zeros_like(y)
    for k in range(_ERFC_CF_DEPTH, 0, -1):
        tail = (0.5 * k) / (y + tail)
    return np.exp(-y * y) / _SQRT_PI / (y + tail)


def erf_value(y):
    """Error function on scalars or arrays (series core, fraction tail)."""
    arr = np.asarray(y, dtype=float)
    out = np.empty_like(arr)
    small = np.abs(arr) <= 2.0
    if np.any(small):
        out[small] = _erf_series(arr[small])
    if np.any(~small):
        big = arr[~small]
        out[~small] = np.sign(big) * (1.0 - _erfc_continued_fraction(np.abs(big)))
    return float(out) if np.isscalar(y) or arr.ndim == 0 else out


def inverse_erf(x):
    """Inverse error function, |x| < 1; round-trips erf to ~1e-15.

    Initial algebraic approximation, then three Halley refinements of
    f(z) = erf(z) - x.
    """
    arr = np.asarray(x, dtype=float)
    scalar = np.isscalar(x) or arr.ndim == 0
    arr = np.atleast_1d(arr)
    if np.any(np.abs(arr) >= 1.0) or not np.all(np.isfinite(arr)):
        raise ValueError("inverse_erf argument must satisfy |x| < 1")
    with np.errstate(divide="ignore"):
        log1m = np.log1p(-arr * arr)
    t = 2.0 / (math.pi * _WINITZKI_A) + 0.5 * log1m
    z = np.sign(arr) * np.sqrt(np.sqrt(t * t - log1m / _WINITZKI_A) - t)
    for _ in range(3):
        residual = erf_value(z) - arr
        ratio = residual * (_SQRT_PI / 2.0) * np.exp(z * z)
        z = z - ratio / (1.0 + ratio * z)
    return float(z[0]) if scalar else z


def critical_value(delta: float) -> float:
    """z-score at confidence delta: sqrt(2) * inverse_erf(delta)."""
    if not 0.0 <= delta < 1.0:
        raise ValueError(f"confidence must lie in [0, 1): {delta}")
    return math.sqrt(2.0) * float(inverse_erf(delta))


@dataclass(frozen=True)
class ResourceEstimate:
    """Required trial count for an error target.

    ``n_required`` is the ceiling integer, or math.inf when the target is
    unreachable (zero success probability, degenerate rescaling factor).
    ``n_raw`` keeps the unrounded value.
    """

    n_required: float
    n_raw: float
    z_c: float
    formula_id: str
    note: str = ""

    @property
    def finite(self) -> bool:
        return math.isfinite(self.n_required)

    def as_dict(self) -> dict:
        return {
            "n_required": int(self.n_required) if self.finite else None,
            "n_raw": self.n_raw if math.isfinite(self.n_raw) else None,
            "infinite": not self.finite,
            "z_c": self.z_c,
            "formula_id": self.formula_id,
            "note": self.note,
        }


@dataclass(frozen=True)
class ResourceQuery:
    """One sample-count question: probability, error target, confidence."""

    epsilon: float
    delta: float
    flavor: str
    p: float | None = None
    perm_u2: float | None = None
    mus: tuple[float, ...] | None = None
    mu_max: float | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}; expected one of {FLAVORS}")
        if self.epsilon <= 0.0:
            raise ValueError("epsilon must be positive")
        if not 0.0 <= self.delta < 1.0:
            raise ValueError("delta must lie in [0, 1)")


def _finish(raw: float, z: float, formula_id: str, note: str = "") -> ResourceEstimate:
    if not math.isfinite(raw):
        return ResourceEstimate(math.inf, math.inf, z, formula_id, note or "unbounded")
    n = float(math.ceil(raw - 1e-9)) if raw > 0 else 0.0
    return ResourceEstimate(n, raw, z, formula_id, note)


def samples_multiplicative_thermal(p: float, epsilon: float, delta: float) -> ResourceEstimate:
    """Trials for relative error epsilon on a thermal-light run.

    N = 2 (erfinv delta)^2 (1 - p) / (epsilon^2 p); infinite when p = 0.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability out of range: {p}")
    z = critical_value(delta)
    inv = float(inverse_erf(delta))
    if p == 0.0:
        return _finish(math.inf, z, "multiplicative_thermal", "p = 0 cannot be resolved")
    raw = 2.0 * inv * inv * (1.0 - p) / (epsilon * epsilon * p)
    return _finish(raw, z, "multiplicative_thermal")


def samples_multiplicative_unitary(perm_u2: float, epsilon: float, delta: float) -> ResourceEstimate:
    """Same bound with the single-photon success probability |Perm U|^2."""
    est = samples_multiplicative_thermal(perm_u2, epsilon, delta)
    return ResourceEstimate(est.n_required, est.n_raw, est.z_c, "multiplicative_unitary", est.note)


def margin_of_error(p: float, n: int, delta: float) -> float:
    """Relative error reached after n trials; inverse of the trial-count formula."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 0.0 < p <= 1.0:
        raise ValueError(f"probability must lie in (0, 1]: {p}")
    inv = float(inverse_erf(delta))
    return inv * math.sqrt(2.0 * (1.0 - p) / (n * p))


def samples_almost_multiplicative_thermal(
    mus, p: float, epsilon: float, delta: float, scale: float | None = None
) -> ResourceEstimate:
    """Trials for an absolute error of epsilon * sqrt(permanent) after rescaling.

    The spectrum is rescaled by ``scale`` (default: its maximum).  Taken
    literally the bound diverges whenever some mu equals the scale, because the
    rescaled mode saturates mu = 1; such cases report an infinite count with a
    note.  Passing ``scale`` > max(mus) keeps every factor positive.
    """
    mus = np.atleast_1d(np.asarray(mus, dtype=float))
    if mus.size < 1:
        raise ValueError("mus must be nonempty")
    if np.any(mus < 0.0):
        raise ValueError("mean-photon parameters must be nonnegative")
    mu_max = float(mus.max()) if scale is None else float(scale)
    if mu_max <= 0.0:
        raise ValueError("scale must be positive")
    if mu_max < mus.max() - 1e-15:
        raise ValueError("scale must be at least max(mus)")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability out of range: {p}")
    z = critical_value(delta)
    inv = float(inverse_erf(delta))
    factors = 1.0 - mus / mu_max
    if np.any(factors <= 0.0):
        return _finish(
            math.inf,
            z,
            "almost_multiplicative_thermal",
            "a rescaled mode saturates mu = 1; the error bound diverges",
        )
    m = mus.size
    raw = 2.0 * inv * inv * (1.0 - p) * mu_max**m / (epsilon * epsilon * float(np.prod(factors)))
    return _finish(raw, z, "almost_multiplicative_thermal")


def samples_almost_multiplicative_unitary(
    perm_u2: float, epsilon: float, delta: float
) -> ResourceEstimate:
    """Trials for the single-photon flavor at error epsilon * sqrt(target).

    N = 2 (erfinv delta)^2 (1 - |Perm U|^2) / epsilon^2, which never exceeds
    2 (erfinv delta / epsilon)^2 whatever the dimension.
    """
    if not 0.0 <= perm_u2 <= 1.0:
        raise ValueError(f"|Perm U|^2 out of range: {perm_u2}")
    z = critical_value(delta)
    inv = float(inverse_erf(delta))
    raw = 2.0 * inv * inv * (1.0 - perm_u2) / (epsilon * epsilon)
    return _finish(raw, z, "almost_multiplicative_unitary")


def almost_multiplicative_unitary_bound(epsilon: float, delta: float) -> float:
    """Dimension-independent ceiling 2 (erfinv delta / epsilon)^2."""
    inv = float(inverse_erf(delta))
    return 2.0 * (inv / epsilon) ** 2


def resolve(query: ResourceQuery) -> ResourceEstimate:
    """Dispatch a ResourceQuery to the matching formula."""
    if query.flavor == "multiplicative_thermal":
        if query.p is None:
            raise ValueError("multiplicative_thermal needs p")
        return samples_multiplicative_thermal(query.p, query.epsilon, query.delta)
    if query.flavor == "multiplicative_unitary":
        if query.perm_u2 is None:
            raise ValueError("multiplicative_unitary needs perm_u2")
        return samples_multiplicative_unitary(query.perm_u2, query.epsilon, query.delta)
    if query.flavor == "almost_multiplicative_thermal":
        if query.mus is None or query.p is None:
            raise ValueError("almost_multiplicative_thermal needs mus and p")
        return samples_almost_multiplicative_thermal(
            query.mus, query.p, query.epsilon, query.delta, scale=query.mu_max
        )
    if query.perm_u2 is None:
        raise ValueError("almost_multiplicative_unitary needs perm_u2")
    return samples_almost_multiplicative_unitary(query.perm_u2, query.epsilon, query.delta)


def haar_average_permanent(dim: int) -> float:
    """Haar-averaged |Perm U|^2: (M-1)! M! / (2M-1)!, evaluated exactly."""
    if dim < 1:
        raise ValueError("dimension must be at least 1")
    num = math.factorial(dim - 1) * math.factorial(dim)
    den = math.factorial(2 * dim - 1)
    return num / den


def haar_average_asymptote(dim: int) -> float:
    """Large-M asymptote sqrt(4 pi M) / 4^M of the Haar average."""
    if dim < 1:
        raise ValueError("dimension must be at least 1")
    return math.sqrt(4.0 * math.pi * dim) / 4.0**dim


def max_click_probability(dim: int) -> float:
    """Largest attainable all-click probability: (1/(1+M))^(1+M) * M!.

    Reached by a uniform-modulus interferometer fed by a single thermal source
    at mu = M/(M+1); always below e^{-M}.
    """
    if dim < 1:
        raise ValueError("dimension must be at least 1")
    return math.factorial(dim) / float((dim + 1) ** (dim + 1))


def cost_comparison(dim: int, eta: float = 1.0) -> dict:
    """Photonic-versus-classical scaling table for dimensions 1..dim.

    Photonic sampling cost for the Haar-average target grows like
    4^M / sqrt(M) (times eta^-M with lossy channels); the classical exact
    kernel costs M^2 2^M.  The ratio 2^M / (M^2 sqrt(M) eta^M) diverges, so
    the photonic estimator never overtakes the classical kernel at scale;
    no crossover in its favor exists.
    """
    if dim < 1:
        raise ValueError("dimension must be at least 1")
    if not 0.0 < eta <= 1.0:
        raise ValueError("eta must lie in (0, 1]")
    ms = np.arange(1, dim + 1, dtype=float)
    photonic = 4.0**ms / np.sqrt(ms) * eta ** (-ms)
    classical = ms**2 * 2.0**ms
    return {
        "dims": ms.astype(int).tolist(),
        "photonic_cost": photonic.tolist(),
        "classical_cost": classical.tolist(),
        "ratio": (photonic / classical).tolist(),
        "photonic_scaling": "4^M / sqrt(M) * eta^-M",
        "classical_scaling": "M^2 * 2^M",
        "crossover": None,
    }
