import cmath
import math

import numpy as np
import pytest

from permoptics.network import (
    BeamSplitterStage,
    balanced_two_mode,
    four_mode_cascade,
    network_to_unitary,
)


def printed_cascade_matrix(ts, phis):
    """Direct evaluation of the published 4x4 chain matrix (test oracle)."""
    t1, t2, t3 = ts
    r1, r2, r3 = (math.sqrt(1 - t * t) for t in ts)
    p1, p2, p3 = phis
    e = lambda x: cmath.exp(1j * x)
    pi = math.pi
    return np.array(
        [
            [r1 * e(p1), t1, 0, 0],
            [t1 * r2 * e(p2), r1 * r2 * e(pi - p1 + p2), r3 * t2 * e(p3), t3 * t2],
            [t1 * t2, r1 * t2 * e(pi - p1), r3 * r2 * e(pi - p2 + p3), t3 * r2 * e(pi - p2)],
            [0, 0, t3, r3 * e(pi - p3)],
        ],
        dtype=complex,
    )


def test_single_balanced_stage():
    u = balanced_two_mode()
    r = t = 1 / math.sqrt(2)
    expected = np.array([[-r, t], [t, r]])
    assert np.allclose(u.matrix, expected, atol=1e-15)
    assert u.defect <= 1e-12


def test_fully_transmissive_first_stage():
    # t1 = 1 degenerates the first splitter into a crossing
    chain = four_mode_cascade([1.0, 0.5, 0.7])
    u = network_to_unitary(chain, 4).matrix
    expected = printed_cascade_matrix([1.0, 0.5, 0.7], [math.pi] * 3)
    assert np.allclose(u, expected, atol=1e-12)
    assert np.allclose(np.abs(u[0]), [0, 1, 0, 0], atol=1e-12)


def test_cascade_matches_printed_form_default_phases():
    ts = [0.6, 0.8, 0.3]
    u = network_to_unitary(four_mode_cascade(ts), 4).matrix
    assert np.abs(u - printed_cascade_matrix(ts, [math.pi] * 3)).max() <= 1e-12


def test_cascade_matches_printed_form_random_parameters():
    gen = np.random.default_rng(2718)
    for _ in range(25):
        ts = gen.uniform(0.05, 0.95, 3)
        phis = gen.uniform(-math.pi, math.pi, 3)
        chain = four_mode_cascade(ts, phis)
        u = network_to_unitary(chain, 4).matrix
        oracle = printed_cascade_matrix(ts, phis)
        assert np.abs(u - oracle).max() <= 1e-12
        assert np.abs(u.conj().T @ u - np.eye(4)).max() <= 1e-12


def test_stage_validation():
    with pytest.raises(ValueError):
        BeamSplitterStage((1, 1), 0.5, math.sqrt(0.75))
    with pytest.raises(ValueError):
        BeamSplitterStage((1, 2), 0.5, 0.5)  # closure violated
    with pytest.raises(ValueError):
        network_to_unitary([BeamSplitterStage.from_transmissivity((1, 5), 0.5)], 4)


def test_closure_tolerance():
    stage = BeamSplitterStage((1, 2), 0.6, 0.8)
    assert stage.transmissivity**2 + stage.reflectivity**2 == pytest.approx(1.0, abs=1e-12)
