from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from q3sat import clock, operators
from q3sat.operators import Condition, LocalTerm, NotAProjector, classify_projector
from q3sat.ring import ONE, RingScalar, SQRT2_R, ring_array, ring_zeros


def _kron_embed(local, support, n):
    # independent route: permute a kron product
    k = len(support)
    rest = [q for q in range(n) if q not in support]
    full = np.kron(local, np.eye(2 ** len(rest)))
    order = list(support) + rest
    t = full.reshape((2,) * (2 * n))
    inv = np.argsort(order)
    t = t.transpose(list(inv) + [n + i for i in inv])
    return t.reshape(2**n, 2**n)


@settings(max_examples=25, deadline=None)
@given(st.permutations(range(4)), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_embed_matches_kron(perm, k, seed):
    rng = np.random.default_rng(seed)
    local = rng.standard_normal((2**k, 2**k)) + 1j * rng.standard_normal((2**k, 2**k))
    support = tuple(perm[:k])
    got = operators.embed_matrix(local, support, 4).toarray()
    assert np.allclose(got, _kron_embed(local, support, 4))


def test_classification():
    p = operators.diagonal_projector(2, ["01"])
    assert classify_projector(LocalTerm((0, 1), p)) is Condition.CONDITION1
    # 3 |gamma'><gamma'| with the identity as witness
    num = ring_zeros((8, 8))
    num[0, 0], num[0, 1], num[1, 0], num[1, 1] = ONE, -SQRT2_R, -SQRT2_R, RingScalar(2)
    eye = ring_array(np.eye(8, dtype=int))
    t = LocalTerm((0, 1, 2), num, 3, witness=eye)
    assert classify_projector(t) is Condition.CONDITION2
    assert classify_projector(LocalTerm((0, 1, 2), num, 3)) is Condition.NOT_VERIFIABLE
    with pytest.raises(NotAProjector):
        classify_projector(LocalTerm((0,), ring_array([[1, 1], [0, 0]])))


def test_two_point_witness():
    v = [0] * 8
    v[5], v[6] = ONE, -SQRT2_R
    w = operators.two_point_witness(ring_array(v))
    num = operators.rank_one(ring_array(v))
    assert operators.check_witness(LocalTerm((0, 1, 2), num, 3), w)
    with pytest.raises(ValueError):
        operators.two_point_witness(ring_array([ONE] * 3 + [0] * 5))


def test_local_term_validation():
    with pytest.raises(ValueError):
        LocalTerm((0, 0), operators.diagonal_projector(2, ["00"]))
    with pytest.raises(ValueError):
        LocalTerm((0, 1, 2, 3), operators.diagonal_projector(4, ["0000"]))


def test_term_roundtrip_and_census():
    terms = clock.clock_terms(2)
    again = [operators.parse_term(operators.format_term(t)) for t in terms]
    assert [t.key() for t in again] == [t.key() for t in terms]
    census = operators.term_census(terms)
    assert census["terms"] == len(terms)
    assert census["condition"].get("not_verifiable", 0) == 0
    assert max(int(k) for k in census["locality"]) <= 3


def test_matrix_market_roundtrip(tmp_path):
    h = operators.assemble(clock.clock_terms(2), clock.clock_width(2))
    path = tmp_path / "h.mtx"
    operators.write_matrix_market(path, h, hermitian=True)
    back = operators.read_matrix_market(path)
    assert abs(back - h).max() < 1e-14
    assert operators.hermitian_defect(h) < 1e-14
