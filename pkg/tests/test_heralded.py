from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from q3sat import clock, heralded
from q3sat.gates import HADAMARD, T_GATE
from q3sat.ring import ring_kron, ring_to_complex


def test_exact_round_success():
    assert heralded.a_is_exact_unitary()
    assert heralded.round_success_exact() == Fraction(3, 4)
    assert heralded.success_probability(3) == Fraction(63, 64)
    assert np.allclose(heralded.A_SUCCESS_BLOCK, np.sqrt(3) / 2 * heralded.R_GATE)
    assert np.allclose(heralded.A_FAILURE_BLOCK, np.eye(2) / 2)


def test_r_gate_maps_zero_to_gamma():
    assert np.allclose(heralded.R_GATE @ heralded.R_GATE.T, np.eye(2))
    assert np.allclose(heralded.PAULI_Z @ heralded.R_GATE @ heralded.PAULI_Z, heralded.R_DAGGER)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_success_output_exact(seed, m):
    rng = np.random.default_rng(seed)
    phi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    phi /= np.linalg.norm(phi)
    o = heralded.simulate_r(phi, m, rng)
    assert 1 <= o.rounds <= m and len(o.transcript) == o.rounds
    if o.success:
        assert np.abs(o.state - heralded.R_GATE @ phi).max() < 1e-12
    else:
        assert np.allclose(o.state, phi)


def test_simulation_frequency():
    rng = np.random.default_rng(11)
    trials = 20_000
    hits = sum(heralded.simulate_r(np.array([1.0, 0.0]), 2, rng).success for _ in range(trials))
    p = 15 / 16
    assert abs(hits / trials - p) <= 4 * np.sqrt(p * (1 - p) / trials)


def test_simulate_validation():
    with pytest.raises(ValueError):
        heralded.simulate_r(np.array([1.0, 1.0]), 2)
    with pytest.raises(ValueError):
        heralded.simulate_r(np.array([1.0, 0.0]), 0)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_u_pi_heralded_matches_direct(seed):
    rng = np.random.default_rng(seed)
    U = ring_kron(HADAMARD, T_GATE, HADAMARD)
    psi = rng.standard_normal(16) + 1j * rng.standard_normal(16)
    psi /= np.linalg.norm(psi)
    o = heralded.u_pi_apply(U, psi, 6, rng)
    if o.success:
        assert np.abs(o.state - heralded.u_pi_matrix(U) @ psi).max() < 1e-12


def test_u_pi_matrix_structure():
    U = ring_to_complex(ring_kron(HADAMARD, HADAMARD, T_GATE))
    m = heralded.u_pi_matrix(U)
    assert np.allclose(m @ m, np.eye(16))
    pi = heralded.projector_from_unitary(U)
    assert np.allclose(pi @ pi, pi) and np.trace(pi).real == pytest.approx(1.0)
    with pytest.raises(ValueError):
        heralded.u_pi_matrix(np.eye(8) * 2)


@pytest.mark.parametrize("r", [1, 2, 3, 5, 8])
def test_selection_probabilities(r):
    probs = heralded.selection_probabilities(r)
    assert sum(probs) == 1
    # bins differ by at most one outcome
    assert max(probs) - min(probs) <= Fraction(1, 2**r)
    rng = np.random.default_rng(r)
    counts = np.bincount([heralded.select_index(rng, r) for _ in range(4000)], minlength=r)
    assert counts.shape == (r,) and counts.min() > 0


def test_wilson_interval():
    lo, hi = heralded.wilson_interval(50, 100)
    assert lo < 0.5 < hi
    assert heralded.wilson_interval(0, 10)[0] == 0.0


def test_protocol_completeness_and_soundness():
    terms = clock.clock_terms(2)
    w = clock.clock_state(2, 2)
    stats = heralded.run_protocol(terms, w / np.linalg.norm(w), 2000, seed=1)
    assert stats.accepted == stats.trials and stats.analytic_acceptance == 1.0
    rng = np.random.default_rng(4)
    v = rng.standard_normal(2**11) + 1j * rng.standard_normal(2**11)
    stats = heralded.run_protocol(terms, v / np.linalg.norm(v), 4000, seed=2)
    assert stats.analytic_acceptance < 1
    assert abs(stats.acceptance - stats.analytic_acceptance) <= 4 * stats.sigma
    assert sum(stats.selected) == 4000
