"""Complex matrix domain types and operations.

Covers the dense-matrix layer of the simulator: unitary validation (with a
relaxed tolerance tier for printed, 3-decimal "experimental" matrices),
construction of Hermitian positive semidefinite matrices from a basis and a
mean-photon spectrum, a cyclic Jacobi eigensolver, seeded Haar sampling, phase
gauges, and spectral rescaling.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .permanent import permanent_exact
from .rng import philox_generator

EXACT_UNITARY_TOL = 1e-10
# Wide enough for matrices printed to 3 decimals with detector-noise entries;
# the bundled reference data reaches a defect of 5.2e-2.
EXPERIMENTAL_UNITARY_TOL = 6e-2
HERMITIAN_TOL = 1e-10
PSD_FLAG_TOL = -1e-10
RECONSTRUCTION_TOL = 1e-10

_HAAR_STREAM_TAG = 0x48AA5


class PsdViolationWarning(UserWarning):
    """Spectral decomposition found an eigenvalue below the PSD floor."""


def ensure_complex_matrix(matrix) -> np.ndarray:
    """Validate and return a finite square complex matrix."""
    a = np.array(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] < 1:
        raise ValueError("matrix dimension must be at least 1")
    if not np.isfinite(a).all():
        raise ValueError("matrix entries must be finite")
    return a


def unitarity_defect(matrix: np.ndarray) -> float:
    """Max-norm deviation of U^dag U from the identity."""
    a = np.asarray(matrix, dtype=complex)
    gram = a.conj().T @ a
    return float(np.abs(gram - np.eye(a.shape[0])).max())


@dataclass(frozen=True, eq=False)
class Unitary:
    """A square matrix certified unitary within ``tol``.

    ``tol`` records the laxity tier: 1e-10 for constructed matrices, 5e-3 for
    matrices ingested from printed 3-decimal data.  Ingested matrices are kept
    verbatim, never renormalized.
    """

    matrix: np.ndarray
    tol: float = EXACT_UNITARY_TOL

    def __post_init__(self):
        a = ensure_complex_matrix(self.matrix)
        object.__setattr__(self, "matrix", a)
        defect = unitarity_defect(a)
        if defect > self.tol:
            raise ValueError(
                f"matrix is not unitary within {self.tol:g} (defect {defect:.3e})"
            )
        col_norms = np.abs(np.linalg.norm(a, axis=0) ** 2 - 1.0)
        if col_norms.max() > self.tol:
            raise ValueError(
                f"column norms deviate from 1 by {col_norms.max():.3e} > {self.tol:g}"
            )

    @classmethod
    def exact(cls, matrix) -> "Unitary":
        return cls(matrix, EXACT_UNITARY_TOL)

    @classmethod
    def experimental(cls, matrix) -> "Unitary":
        return cls(matrix, EXPERIMENTAL_UNITARY_TOL)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def defect(self) -> float:
        return unitarity_defect(self.matrix)


@dataclass(frozen=True, eq=False)
class Hpsm:
    """Hermitian positive semidefinite matrix with its spectral data.

    ``matrix`` is built as basis * diag(spectrum) * basis^dag; the spectrum
    entries are the per-mode mean-photon parameters and must be nonnegative.
    """

    matrix: np.ndarray
    basis: Unitary
    spectrum: np.ndarray

    def __post_init__(self):
        a = ensure_complex_matrix(self.matrix)
        mus = np.asarray(self.spectrum, dtype=float)
        object.__setattr__(self, "matrix", a)
        object.__setattr__(self, "spectrum", mus)
        if mus.ndim != 1 or mus.size != a.shape[0]:
            raise ValueError("spectrum length must match the matrix dimension")
        if self.basis.dim != a.shape[0]:
            raise ValueError("basis dimension must match the matrix dimension")
        herm = float(np.abs(a - a.conj().T).max())
        if herm > HERMITIAN_TOL:
            raise ValueError(f"matrix is not Hermitian (deviation {herm:.3e})")
        if mus.min() < 0.0:
            raise ValueError(f"negative spectrum entry {mus.min():g}")
        rebuilt = self.basis.matrix @ np.diag(mus) @ self.basis.matrix.conj().T
        err = float(np.abs(rebuilt - a).max())
        scale = max(1.0, float(np.abs(a).max()))
        if err > RECONSTRUCTION_TOL * scale:
            raise ValueError(f"matrix does not reconstruct from (basis, spectrum): {err:.3e}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def permanent(self, method: str = "ryser") -> float:
        """Real part of the permanent; imaginary dust is checked and dropped."""
        value = permanent_exact(self.matrix, method)
        if abs(value.imag) > 1e-9 * max(abs(value), 1e-300):
            raise ArithmeticError(f"permanent of an HPSM came out non-real: {value}")
        return float(value.real)


def hpsm_from(basis: Unitary, mus) -> Hpsm:
    """Build A = U diag(mus) U^dag, Hermitian-symmetrized.

    Raises on negative mean-photon parameters or a length mismatch.
    """
    mus = np.asarray(mus, dtype=float)
    if mus.ndim != 1 or mus.size != basis.dim:
        raise ValueError(
            f"spectrum length {mus.size} does not match dimension {basis.dim}"
        )
    if mus.size and mus.min() < 0.0:
        raise ValueError(f"negative mean-photon parameter {mus.min():g}")
    u = basis.matrix
    a = u @ np.diag(mus) @ u.conj().T
    a = 0.5 * (a + a.conj().T)
    return Hpsm(matrix=a, basis=basis, spectrum=mus)


def _jacobi_hermitian(matrix: np.ndarray, tol: float = 1e-12, sweep_cap: int = 100):
    """Cyclic Jacobi rotations for a Hermitian matrix.

    Returns (eigenvalues, eigenvectors-as-columns), unsorted.  Convergence is
    declared when the off-diagonal Frobenius norm drops below ``tol`` relative
    to max(1, largest entry magnitude).
    """
    a = matrix.astype(complex).copy()
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.abs(a).max()))
    threshold = tol * scale

    def off_norm() -> float:
        off = a - np.diag(np.diag(a))
        return float(np.sqrt((np.abs(off) ** 2).sum()))

    for _ in range(sweep_cap):
        if off_norm() <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= threshold / (n * n):
                    continue
                phase = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                theta = 0.5 * math.atan2(2.0 * mag, aqq - app)
                c = math.cos(theta)
                s = math.sin(theta)
                # 2x2 rotation J = [[c, s], [-s*conj(phase), c*conj(phase)]]
                jpp, jpq = c, s
                jqp, jqq = -s * phase.conjugate(), c * phase.conjugate()
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = jpp * col_p + jqp * col_q
                a[:, q] = jpq * col_p + jqq * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = np.conj(jpp) * row_p + np.conj(jqp) * row_q
                a[q, :] = np.conj(jpq) * row_p + np.conj(jqq) * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                col_p = v[:, p].copy()
                col_q = v[:, q].copy()
                v[:, p] = jpp * col_p + jqp * col_q
                v[:, q] = jpq * col_p + jqq * col_q
    else:
        if off_norm() > threshold:
            raise ArithmeticError(
                f"Jacobi eigensolver did not converge within {sweep_cap} sweeps"
            )
    return np.real(np.diag(a)), v


def spectral_decompose(matrix, hermitian_tol: float = 1e-8):
    """Eigendecompose a Hermitian matrix into (basis, eigenvalues).

    Eigenvalues come back sorted descending (ties broken by original index);
    eigenvalues below -1e-10 trigger a PsdViolationWarning.
    """
    a = ensure_complex_matrix(matrix)
    herm = float(np.abs(a - a.conj().T).max())
    scale = max(1.0, float(np.abs(a).max()))
    if herm > hermitian_tol * scale:
        raise ValueError(f"matrix is not Hermitian within {hermitian_tol:g} ({herm:.3e})")
    a = 0.5 * (a + a.conj().T)
    values, vectors = _jacobi_hermitian(a)
    order = sorted(range(len(values)), key=lambda i: (-values[i], i))
    values = values[order]
    vectors = vectors[:, order]
    if values.min() < PSD_FLAG_TOL * scale:
        warnings.warn(
            f"eigenvalue {values.min():.3e} violates positive semidefiniteness",
            PsdViolationWarning,
            stacklevel=2,
        )
    return Unitary.exact(vectors), values


def haar_unitaries(dim: int, count: int, seed: int) -> np.ndarray:
    """Sample ``count`` Haar-distributed unitaries, shape (count, dim, dim).

    Construction: complex Gaussian matrix, QR orthonormalization, then each
    column is multiplied by the unit phase of the matching R diagonal entry so
    the factorization is the unique one with a positive R diagonal.  The
    uncorrected QR output is not Haar.
    """
    if dim < 1:
        raise ValueError("dimension must be at least 1")
    if count < 1:
        raise ValueError("count must be at least 1")
    gen = philox_generator(seed, _HAAR_STREAM_TAG)
    z = gen.standard_normal((count, dim, dim)) + 1j * gen.standard_normal((count, dim, dim))
    z /= math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    phases = d / np.abs(d)
    return q * phases[:, None, :]


def haar_unitary(dim: int, seed: int) -> Unitary:
    """One seeded Haar-random unitary; identical seeds give identical bits."""
    return Unitary.exact(haar_unitaries(dim, 1, seed)[0])


def apply_phase_gauge(u: Unitary, alpha, beta) -> Unitary:
    """Apply the gauge U -> V U W with V = diag(e^{i alpha}), W = diag(e^{i beta}).

    The permanent of U diag(mu) U^dag is invariant under this transformation.
    """
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    if alpha.shape != (u.dim,) or beta.shape != (u.dim,):
        raise ValueError("phase vectors must have length equal to the dimension")
    gauged = np.exp(1j * alpha)[:, None] * u.matrix * np.exp(1j * beta)[None, :]
    return Unitary(gauged, tol=u.tol)


def scale_hpsm(h: Hpsm):
    """Rescale by the top eigenvalue so the spectrum lies in [0, 1].

    Returns (scaled Hpsm, mu_max); Perm[A] = mu_max^M * Perm[A / mu_max].
    """
    mu_max = float(h.spectrum.max())
    if mu_max <= 0.0:
        raise ValueError("cannot scale: largest mean-photon parameter is zero")
    scaled = Hpsm(
        matrix=h.matrix / mu_max,
        basis=h.basis,
        spectrum=h.spectrum / mu_max,
    )
    return scaled, mu_max
