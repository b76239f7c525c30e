import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from permoptics.instances import get_instance
from permoptics.matrices import (
    PsdViolationWarning,
    Unitary,
    apply_phase_gauge,
    haar_unitaries,
    haar_unitary,
    hpsm_from,
    scale_hpsm,
    spectral_decompose,
    unitarity_defect,
)
from permoptics.permanent import permanent_ryser


def random_hpsm(dim, seed, mu_scale=1.0):
    u = haar_unitary(dim, seed)
    gen = np.random.default_rng(seed)
    mus = mu_scale * gen.random(dim)
    return hpsm_from(u, mus), u, mus


class TestUnitary:
    def test_exact_tier_accepts_constructed(self):
        u = haar_unitary(3, 99)
        assert u.tol == pytest.approx(1e-10)
        assert u.defect <= 1e-12

    def test_rejects_experimental_at_exact_tier(self):
        printed = get_instance("two-mode-balanced").unitary
        with pytest.raises(ValueError):
            Unitary.exact(printed)
        ingested = Unitary.experimental(printed)
        # kept verbatim, never renormalized
        assert np.array_equal(ingested.matrix, printed.astype(complex))

    def test_laxity_recorded(self):
        inst = get_instance("four-mode-a")
        u = inst.basis()
        assert u.tol > 1e-3
        assert unitarity_defect(inst.unitary) <= u.tol


class TestHpsmFrom:
    def test_identity_basis(self):
        h = hpsm_from(Unitary.exact(np.eye(2)), [0.3, 0.7])
        assert np.allclose(h.matrix, np.diag([0.3, 0.7]))

    def test_printed_two_mode(self):
        inst = get_instance("two-mode-balanced")
        h = hpsm_from(inst.basis(), inst.mus)
        printed = 1e-3 * np.array([[1.02, 0.02], [0.02, 1.02]])
        assert np.abs(h.matrix - printed).max() <= 0.01e-3

    def test_printed_four_mode(self):
        inst = get_instance("four-mode-a")
        h = hpsm_from(inst.basis(), inst.mus)
        printed = 1e-3 * np.array(
            [
                [1.95, -0.15, 0.17, 0.12],
                [-0.15, 1.99, 0.12, -0.72],
                [0.17, 0.12, 1.94, -0.43],
                [0.12, -0.72, -0.43, 2.42],
            ]
        )
        assert np.abs(h.matrix - printed).max() <= 0.02e-3

    def test_validation(self):
        u = Unitary.exact(np.eye(2))
        with pytest.raises(ValueError):
            hpsm_from(u, [-0.1, 0.2])
        with pytest.raises(ValueError):
            hpsm_from(u, [0.1, 0.2, 0.3])

    def test_hermitian_output(self):
        h, _, _ = random_hpsm(4, 5)
        assert np.abs(h.matrix - h.matrix.conj().T).max() <= 1e-15


class TestSpectralDecompose:
    def test_diagonal(self):
        basis, values = spectral_decompose(np.diag([2.0, 1.0]))
        assert values == pytest.approx([2.0, 1.0])
        # identity up to column phases
        assert np.allclose(np.abs(basis.matrix), np.eye(2), atol=1e-12)

    def test_printed_two_mode_spectrum(self):
        inst = get_instance("two-mode-balanced")
        h = hpsm_from(inst.basis(), inst.mus)
        _, values = spectral_decompose(h.matrix)
        assert values == pytest.approx([1.04e-3, 1.00e-3], abs=0.01e-3)

    @pytest.mark.parametrize("dim", [2, 3, 5, 8])
    def test_roundtrip_matches_construction(self, dim):
        h, _, mus = random_hpsm(dim, 7 * dim + 1)
        basis, values = spectral_decompose(h.matrix)
        assert np.allclose(np.sort(values), np.sort(mus), atol=1e-9)
        rebuilt = basis.matrix @ np.diag(values) @ basis.matrix.conj().T
        assert np.abs(rebuilt - h.matrix).max() <= 1e-8

    @pytest.mark.parametrize("dim", [2, 4, 6])
    def test_against_library_eigensolver(self, dim):
        # independent oracle: LAPACK via numpy
        h, _, _ = random_hpsm(dim, 31 + dim)
        _, values = spectral_decompose(h.matrix)
        reference = np.sort(np.linalg.eigvalsh(h.matrix))[::-1]
        assert np.allclose(values, reference, atol=1e-10)

    def test_descending_order(self):
        h, _, _ = random_hpsm(6, 17)
        _, values = spectral_decompose(h.matrix)
        assert np.all(np.diff(values) <= 1e-15)

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            spectral_decompose(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_flags_psd_violation(self):
        with pytest.warns(PsdViolationWarning):
            spectral_decompose(np.diag([1.0, -0.5]))


class TestHaar:
    def test_single_mode_is_pure_phase(self):
        u = haar_unitary(1, 3)
        assert abs(abs(u.matrix[0, 0]) - 1.0) <= 1e-12

    def test_unitarity(self):
        for seed in range(5):
            assert haar_unitary(4, seed).defect <= 1e-12

    def test_seed_reproducibility(self):
        a = haar_unitary(5, 1349).matrix
        b = haar_unitary(5, 1349).matrix
        assert np.array_equal(a, b)
        c = haar_unitary(5, 1350).matrix
        assert not np.array_equal(a, c)

    def test_first_entry_moment(self):
        # Haar moment E|U_11|^2 = 1/M
        draws = haar_unitaries(4, 10**5, seed=42)
        values = np.abs(draws[:, 0, 0]) ** 2
        stderr = values.std(ddof=1) / np.sqrt(values.size)
        assert abs(values.mean() - 0.25) <= 3 * stderr


class TestPhaseGauge:
    def test_zero_phases_identity(self):
        u = haar_unitary(3, 8)
        gauged = apply_phase_gauge(u, np.zeros(3), np.zeros(3))
        assert np.allclose(gauged.matrix, u.matrix, atol=0)

    def test_pi_rows_negate(self):
        u = haar_unitary(3, 9)
        gauged = apply_phase_gauge(u, np.full(3, np.pi), np.zeros(3))
        assert np.allclose(gauged.matrix, -u.matrix, atol=1e-15)

    def test_length_mismatch(self):
        u = haar_unitary(3, 10)
        with pytest.raises(ValueError):
            apply_phase_gauge(u, np.zeros(2), np.zeros(3))

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**31), dim=st.integers(2, 4))
    def test_permanent_gauge_invariance(self, seed, dim):
        u = haar_unitary(dim, seed)
        gen = np.random.default_rng(seed ^ 0xFEED)
        mus = gen.random(dim)
        alpha = gen.uniform(-np.pi, np.pi, dim)
        beta = gen.uniform(-np.pi, np.pi, dim)
        gauged = apply_phase_gauge(u, alpha, beta)
        base = hpsm_from(u, mus).permanent()
        assert hpsm_from(gauged, mus).permanent() == pytest.approx(base, rel=1e-12)


class TestScaleHpsm:
    def test_two_identity(self):
        h = hpsm_from(Unitary.exact(np.eye(2)), [2.0, 2.0])
        scaled, mu_max = scale_hpsm(h)
        assert mu_max == pytest.approx(2.0)
        assert np.allclose(scaled.matrix, np.eye(2))
        assert h.permanent() == pytest.approx(4.0)
        assert mu_max**2 * scaled.permanent() == pytest.approx(4.0)

    def test_diag_three_one(self):
        h = hpsm_from(Unitary.exact(np.eye(2)), [3.0, 1.0])
        scaled, mu_max = scale_hpsm(h)
        assert mu_max == pytest.approx(3.0)
        assert np.allclose(scaled.matrix, np.diag([1.0, 1 / 3]))
        assert mu_max**2 * scaled.permanent() == pytest.approx(3.0, rel=1e-12)

    def test_scaling_identity_random(self):
        h, _, _ = random_hpsm(4, 21, mu_scale=3.0)
        scaled, mu_max = scale_hpsm(h)
        assert scaled.spectrum.max() == pytest.approx(1.0)
        assert mu_max**4 * scaled.permanent() == pytest.approx(h.permanent(), rel=1e-10)

    def test_zero_matrix_rejected(self):
        h = hpsm_from(Unitary.exact(np.eye(2)), [0.0, 0.0])
        with pytest.raises(ValueError):
            scale_hpsm(h)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**31), dim=st.integers(1, 4))
def test_hpsm_permanent_real_nonnegative(seed, dim):
    u = haar_unitary(dim, seed)
    mus = np.random.default_rng(seed).random(dim)
    value = permanent_ryser(hpsm_from(u, mus).matrix)
    assert abs(value.imag) <= 1e-12 * max(abs(value), 1e-300)
    assert value.real >= -1e-15
