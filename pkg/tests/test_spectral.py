from __future__ import annotations

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from q3sat import spectral


def _psd_with_kernel(rng, n, nullity):
    q, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    vals = np.concatenate([np.zeros(nullity), rng.uniform(0.5, 3.0, n - nullity)])
    return (q * vals) @ q.conj().T, q[:, :nullity]


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4))
def test_dense_nullspace(seed, nullity):
    rng = np.random.default_rng(seed)
    h, kernel = _psd_with_kernel(rng, 30, nullity)
    rep = spectral.spectrum(h, k=8, force="dense")
    assert rep.nullity == nullity
    assert spectral.subspace_sine(rep.null_basis, kernel) < 1e-8
    assert rep.gap >= 0.5 - 1e-9


def test_dense_and_iterative_agree():
    # path-graph Laplacian: known spectrum 2 - 2 cos(pi k / n)
    n = 400
    lap = sp.diags([np.r_[1, 2 * np.ones(n - 2), 1], -np.ones(n - 1), -np.ones(n - 1)], [0, 1, -1], format="csr")
    exact = 2 - 2 * np.cos(np.pi * np.arange(5) / n)
    it = spectral.spectrum(lap, k=5, force="iterative")
    de = spectral.spectrum(lap, k=5, force="dense")
    assert np.allclose(it.eigenvalues[:5], exact, atol=1e-10)
    assert np.allclose(de.eigenvalues[:5], exact, atol=1e-10)
    assert it.nullity == de.nullity == 1
    assert it.gap == pytest.approx(exact[1], rel=1e-8)


def test_values_only_path():
    rng = np.random.default_rng(0)
    h, _ = _psd_with_kernel(rng, 20, 2)
    rep = spectral.spectrum(h, k=4, vectors=False)
    assert rep.nullity == 2 and rep.null_basis is None


def test_not_hermitian():
    with pytest.raises(spectral.NotHermitian):
        spectral.spectrum(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        spectral.spectrum(np.zeros((2, 3)))


def test_gamma_and_frustration_free():
    h = np.diag([0.0, 0.0, 1.0, 2.0])
    assert spectral.gamma(h) == pytest.approx(1.0)
    alive = np.array([True, True, False, False])
    full, rep = spectral.frustration_free_nullspace(h, alive)
    assert rep.nullity == 2 and full.shape == (4, 2)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["angle", "angle_reduced", "norm_ratio", "squared_ratio"]))
def test_kitaev_bounds_never_exceed_gap(seed, variant):
    rng = np.random.default_rng(seed)
    pair = spectral.random_psd_pair(rng, dim=int(rng.integers(3, 8)))
    try:
        res = spectral.kitaev_bound(pair.h_a, pair.h_b, variant)
    except spectral.HypothesisViolation:
        return
    assert res.bound <= res.gamma_actual + 1e-9
    assert res.holds


def test_kitaev_rejects_non_psd():
    with pytest.raises(spectral.HypothesisViolation):
        spectral.kitaev_bound(-np.eye(2), np.eye(2))
    with pytest.raises(ValueError):
        spectral.kitaev_bound(np.diag([0.0, 1.0]), np.eye(2), "nope")


def test_laplacian_scaling():
    Ms = [2, 4, 8, 16]
    g = [spectral.laplacian_bound_check(M)["gamma_L"] for M in Ms]
    assert -spectral.fit_exponent(Ms, g) == pytest.approx(2.0, abs=0.3)
    assert all(spectral.laplacian_bound_check(M)["holds"] for M in (1, 2, 4))


def test_fit_exponent_power_law():
    xs = np.array([1.0, 2.0, 4.0, 8.0])
    assert spectral.fit_exponent(xs, 3 * xs**-2.5) == pytest.approx(-2.5)
