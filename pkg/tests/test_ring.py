from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from q3sat.gates import B_GATE, CNOT, HADAMARD, SINGLE_QUBIT, T_GATE, TWO_QUBIT, V_GATE, t_power
from q3sat.ring import (
    HALF,
    OMEGA,
    ONE,
    RingScalar,
    ZERO,
    condition1_check,
    ring_dagger,
    ring_equal,
    ring_eye,
    ring_matmul,
    ring_to_complex,
)

coef = st.integers(-50, 50)
scalars = st.builds(RingScalar, coef, coef, coef, coef, st.integers(0, 6))


@given(scalars, scalars, scalars)
def test_ring_axioms(x, y, z):
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == ZERO
    assert x * ONE == x


@given(scalars, scalars)
def test_complex_homomorphism(x, y):
    assert complex(x * y) == pytest.approx(complex(x) * complex(y), abs=1e-9)
    assert complex(x + y) == pytest.approx(complex(x) + complex(y), abs=1e-9)
    assert complex(x.conj()) == pytest.approx(complex(x).conjugate(), abs=1e-12)


@given(scalars, st.integers(0, 5))
def test_canonical_form_unique(x, k):
    # scaling numerator and exponent together gives the same element
    a, b, c, d, s = x.parts
    y = RingScalar(a << k, b << k, c << k, d << k, s + k)
    assert y == x and hash(y) == hash(x) and y.parts == x.parts


@given(scalars)
def test_text_roundtrip(x):
    assert RingScalar.parse(str(x)) == x


def test_known_values():
    assert OMEGA * OMEGA == RingScalar(0, 1)
    assert HALF + HALF == ONE
    assert RingScalar(0, 0, 1) * RingScalar(0, 0, 1) == RingScalar(2)
    assert RingScalar(4, 0, 0, 0, 2) == ONE
    with pytest.raises(TypeError):
        RingScalar(0.5)
    with pytest.raises(ValueError):
        RingScalar.parse("1/2")


def test_gates_exactly_unitary():
    for g in list(SINGLE_QUBIT.values()) + list(TWO_QUBIT.values()):
        assert ring_equal(ring_matmul(g, ring_dagger(g)), ring_eye(g.shape[0]))


def test_t_power_cycle():
    assert ring_equal(t_power(8), ring_eye(2))
    assert ring_equal(t_power(1), T_GATE)
    assert ring_equal(ring_matmul(HADAMARD, HADAMARD), ring_eye(2))


def test_v_differs_from_cnot_numerically():
    assert not np.allclose(ring_to_complex(V_GATE), ring_to_complex(CNOT))
    assert np.allclose(ring_to_complex(B_GATE) @ ring_to_complex(B_GATE).conj().T, np.eye(2))


def test_condition1_check():
    # entries with denominator at most 4 pass
    assert condition1_check(ring_eye(2))
    assert not condition1_check(np.array([[RingScalar(1, 0, 0, 0, 3)]], dtype=object))


@settings(max_examples=30)
@given(st.integers(0, 15))
def test_t_power_composes(k):
    assert ring_equal(ring_matmul(t_power(k), t_power(16 - k)), ring_eye(2))
