import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scw_interface.interface import DetectorSpec
from scw_interface.tomography import (
    LABELS,
    TomographyRecord,
    basis_state_pipeline,
    fidelity,
    is_density_matrix,
    mle_reconstruct,
    projector,
    rho_from_json,
    rho_to_json,
    simulate_counts,
)

S2 = 1 / math.sqrt(2)


def records(counts, duration=1.0):
    return [TomographyRecord(lab, c, duration) for lab, c in zip(LABELS, counts)]


def test_projectors():
    assert np.allclose(projector("H"), [[1, 0], [0, 0]])
    assert np.allclose(projector("D"), np.full((2, 2), 0.5))
    assert np.allclose(projector("R"), [[0.5, -0.5j], [0.5j, 0.5]])
    for lab in LABELS:
        P = projector(lab)
        assert np.allclose(P @ P, P)
        assert np.trace(P).real == pytest.approx(1.0)
    with pytest.raises(ValueError):
        projector("X")


def test_record_validation():
    with pytest.raises(ValueError):
        TomographyRecord("H", -1, 1.0)
    with pytest.raises(ValueError):
        TomographyRecord("H", 1, 0.0)


def test_simulated_counts():
    det = DetectorSpec(gamma=0.0)
    recs = simulate_counts((1, 0), det, 10.0, seed=3)
    by = {r.projector: r.counts for r in recs}
    assert by["V"] == 0
    assert [r.projector for r in recs] == list(LABELS)
    assert simulate_counts((1, 0), det, 10.0, seed=3) == recs
    with pytest.raises(ValueError):
        simulate_counts((1, 1), det, 1.0, seed=0)


def test_simulated_mean_counts_symmetric():
    det = DetectorSpec(gamma=0.0)
    d = np.array([[r.counts for r in simulate_counts((1, 0), det, 10.0, seed=s)] for s in range(200)])
    mean_D, mean_A = d[:, 2].mean(), d[:, 3].mean()
    assert abs(mean_D - mean_A) < 5 * math.sqrt(mean_D / 200) * math.sqrt(2)


@pytest.mark.parametrize(
    "counts, target",
    [
        ([1000, 0, 500, 500, 500, 500], "H"),
        ([500, 500, 1000, 0, 500, 500], "D"),
    ],
)
def test_mle_exact_pure_states(counts, target):
    rho = mle_reconstruct(records(counts))
    assert np.abs(rho - projector(target)).max() < 1e-6
    assert is_density_matrix(rho)


def test_mle_errors():
    with pytest.raises(ValueError):
        mle_reconstruct([TomographyRecord("H", 5, 1.0), TomographyRecord("V", 5, 1.0), TomographyRecord("D", 5, 1.0)])
    with pytest.raises(ValueError):
        mle_reconstruct(records([0] * 6))


def test_mle_uses_rates_not_raw_counts():
    recs = records([1000, 0, 500, 500, 500, 500])
    recs[0] = TomographyRecord("H", 2000, 2.0)
    assert np.abs(mle_reconstruct(recs) - projector("H")).max() < 1e-6


def test_seeded_noisy_reconstruction_of_D():
    recs = simulate_counts((S2, S2), DetectorSpec(gamma=50.0), 10.0, seed=0)
    f = fidelity(mle_reconstruct(recs), (S2, S2))
    # regression constant recorded from this seeded run
    assert f == pytest.approx(0.993463041033, abs=1e-9)
    assert f >= 0.95


bloch = st.tuples(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1)).filter(
    lambda b: 1e-3 < math.hypot(*b) <= 0.99
)


def rho_from_bloch(b):
    x, y, z = b
    return 0.5 * np.array([[1 + z, x - 1j * y], [x + 1j * y, 1 - z]])


def frequency_records(rho0):
    # integer counts with a huge total keep rounding error below the test tolerance
    probs = [np.trace(projector(lab) @ rho0).real for lab in LABELS]
    return [TomographyRecord(lab, int(round(p * 1e12)), 1.0) for lab, p in zip(LABELS, probs)]


@settings(max_examples=40, deadline=None)
@given(bloch)
def test_mle_recovers_noiseless_states(b):
    rho0 = rho_from_bloch(b)
    rho = mle_reconstruct(frequency_records(rho0))
    assert np.abs(np.linalg.eigvalsh(rho - rho0)).sum() < 1e-5


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 5000), min_size=6, max_size=6).filter(lambda c: sum(c) > 0))
def test_mle_output_is_density_matrix_and_likelihood_monotone(counts):
    history = []
    rho = mle_reconstruct(records(counts), history=history)
    assert is_density_matrix(rho)
    assert all(b >= a - 1e-12 for a, b in zip(history, history[1:]))


def test_fidelity_values():
    H = projector("H")
    assert fidelity(H, (1, 0)) == pytest.approx(1.0)
    assert fidelity(H, (0, 1)) == pytest.approx(0.0)
    assert fidelity(np.eye(2) / 2, (0.6, 0.8j)) == pytest.approx(0.5)


@given(st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi))
def test_fidelity_global_phase_invariant(theta, g):
    rho = rho_from_bloch((0.3, -0.2, 0.5))
    psi = np.array([math.cos(theta), math.sin(theta)], dtype=complex)
    assert fidelity(rho, psi * np.exp(1j * g)) == pytest.approx(fidelity(rho, psi), abs=1e-14)


def test_rho_json_round_trip():
    rho = rho_from_bloch((0.1, 0.2, 0.3))
    assert np.array_equal(rho_from_json(rho_to_json(rho)), rho)


def test_table1_targets_and_ideal_fidelity():
    results = basis_state_pipeline(DetectorSpec(gamma=0.0), 1e3, seed=1)
    assert [r.label for r in results] == ["H", "V", "D", "A"]
    assert [r.delta_phi for r in results] == [0.0, math.pi, math.pi / 2, 3 * math.pi / 2]
    assert all(r.fidelity >= 0.999 for r in results)


def test_table1_phase_offset_lowers_superposition_fidelity():
    base = basis_state_pipeline(DetectorSpec(gamma=0.0), 1e3, seed=1)
    tilted = basis_state_pipeline(DetectorSpec(gamma=0.0), 1e3, seed=1, v_phase_offset=0.3)
    assert tilted[2].fidelity < base[2].fidelity - 0.01
    assert tilted[0].fidelity == pytest.approx(base[0].fidelity)
    assert abs(tilted[2].rho[0, 1].imag) > 0.05
