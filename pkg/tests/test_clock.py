from __future__ import annotations

import numpy as np
import pytest

from q3sat import clock, grid, operators
from q3sat.grid import ClockOp


@pytest.mark.parametrize("N", [2, 3])
def test_clock_basis_orthonormal(N):
    b = clock.clock_basis(N)
    assert np.allclose(b.conj().T @ b, np.eye(N))
    t = clock.triplet_ground_basis(N)
    assert np.allclose(t.conj().T @ t, np.eye(2 * N))


@pytest.mark.parametrize("N", [2, 3])
def test_clock_states_are_null(N):
    h = operators.assemble(clock.clock_terms(N), clock.clock_width(N))
    b = clock.clock_basis(N)
    assert np.abs(h @ b).max() < 1e-12


@pytest.mark.parametrize("N", [4, 6, 10])
def test_clock_states_null_large_N(N):
    # product-form route; no 2^(7N-3) vectors
    assert np.abs(clock.energy_on_clock_states(N, clock.clock_terms(N))).max() < 1e-12


@pytest.mark.parametrize("N", [2, 3])
def test_compress_matches_dense(N):
    n = clock.clock_width(N)
    b = clock.clock_basis(N)
    for op in [grid.h(1), grid.leq(1), grid.geq(N), grid.leq(N - 1)]:
        support, local = grid.clock_term_local(op, N)
        dense = b.conj().T @ (operators.embed_matrix(local, support, n) @ b)
        assert np.allclose(clock.compress(N, local, support), dense, atol=1e-12)


@pytest.mark.parametrize("N", [3, 5])
def test_clock_pieces_match_compress(N):
    # projected operators used by the grid agree with direct compression
    for op in [grid.h(k) for k in range(1, N)] + [grid.leq(k) for k in range(1, N + 1)] + [grid.geq(k) for k in range(1, N + 1)]:
        support, local = grid.clock_term_local(op, N)
        total = sum(m.toarray() for _, m in grid.clock_pieces(op, N))
        assert np.allclose(total, clock.compress(N, local, support), atol=1e-12)


def test_widths_and_supports():
    assert clock.clock_width(2) == 11 and clock.clock_width(3) == 18
    assert clock.h_support(3, 2) == (10, 11)
    with pytest.raises(ValueError):
        clock.h_support(3, 3)
    with pytest.raises(ValueError):
        clock.clock_state(4, 1)
    with pytest.raises(ValueError):
        clock.triplet_terms(1)


def test_transition_numerator_projector():
    t = operators.LocalTerm((0, 1), clock.transition_numerator())
    assert operators.is_exact_projector(t)
