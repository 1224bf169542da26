from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from q3sat.circuit import (
    CanonicalCircuit,
    Circuit,
    CircuitError,
    CircuitSyntaxError,
    Gate,
    canonical_bound,
    canonicalize,
    format_circuit,
    parse_circuit,
)


def test_parse_basic():
    c = parse_circuit("# demo\nqubits 1 2\nh 1\nCNOT 1 2  # comment\nt 3\n")
    assert (c.n, c.n_a) == (1, 2)
    assert c.gates == (Gate("h", (0,)), Gate("cnot", (0, 1)), Gate("t", (2,)))
    assert parse_circuit(format_circuit(c)) == c


@pytest.mark.parametrize("text, line", [
    ("h 1\n", 1),
    ("qubits 1 1\nfoo 1\n", 2),
    ("qubits 1 1\nh 3\n", 2),
    ("qubits 1 1\ncnot 1 1\n", 2),
    ("qubits 1 1\nh\n", 2),
    ("qubits 0 1\n", 1),
    ("qubits 1 1\nqubits 1 1\n", 2),
    ("", 0),
])
def test_parse_errors_report_line(text, line):
    with pytest.raises(CircuitSyntaxError) as exc:
        parse_circuit(text)
    assert exc.value.line == line


def test_gate_validation():
    with pytest.raises(CircuitError):
        Gate("h", (0, 1))
    with pytest.raises(CircuitError):
        Gate("swap", (0, 1))
    with pytest.raises(CircuitError):
        Circuit(1, 1, (Gate("h", (2,)),))


def test_acceptance_probability_cnot():
    c = parse_circuit("qubits 1 1\ncnot 1 2\n")
    assert c.acceptance_probability(np.array([0, 1])) == pytest.approx(1.0)
    assert c.acceptance_probability(np.array([1, 0])) == pytest.approx(0.0)
    assert c.max_acceptance() == pytest.approx(1.0)


def _random_circuit(draw_gates, n, n_a):
    return Circuit(n, n_a, tuple(draw_gates))


gate_st = st.one_of(
    st.builds(lambda k, w: Gate(k, (w,)), st.sampled_from(["h", "t", "id"]), st.integers(0, 2)),
    st.builds(lambda k, p: Gate(k, p), st.sampled_from(["cnot", "v"]),
              st.sampled_from([(0, 1), (1, 0), (0, 2), (2, 1)])),
)


@settings(max_examples=40, deadline=None)
@given(st.lists(gate_st, max_size=5))
def test_canonicalize_preserves_unitary(gates):
    c = Circuit(2, 1, tuple(gates))
    cc = canonicalize(c)
    assert np.allclose(cc.unitary(), c.unitary(), atol=1e-10)
    assert cc.M <= canonical_bound(c)
    for w, p in zip(cc.singles, cc.pairs):
        assert w[0] in ("h", "t", "id") and len(p) == 2


@settings(max_examples=30, deadline=None)
@given(st.lists(gate_st, max_size=4), st.integers(0, 2**32 - 1))
def test_acceptance_bounded_by_max(gates, seed):
    c = Circuit(2, 1, tuple(gates))
    rng = np.random.default_rng(seed)
    w = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    w /= np.linalg.norm(w)
    assert c.acceptance_probability(w) <= c.max_acceptance() + 1e-12


def test_canonicalize_deterministic_and_empty():
    c = parse_circuit("qubits 1 1\n")
    cc = canonicalize(c)
    assert cc.M == 2 and cc == canonicalize(c)
    with pytest.raises(CircuitError):
        canonicalize(c, pad=(0, 0))


def test_padded():
    cc = CanonicalCircuit(2, 1, [("h", 0)], [(0, 1)])
    p = cc.padded(3, (0, 1))
    assert p.M == 3 and p.singles[0] == ("h", 0)
    with pytest.raises(CircuitError):
        p.padded(2)
    with pytest.raises(CircuitError):
        CanonicalCircuit(1, 1, [], [])
