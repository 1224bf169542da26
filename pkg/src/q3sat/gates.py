"""Gate matrices, exact and floating.

Exact versions are object arrays of RingScalar.  Tensor order is big-endian:
the first factor of a Kronecker product is the first listed qubit.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .ring import HALF, I_UNIT, INV_SQRT2, OMEGA, ONE, ZERO, ring_array, ring_dagger, ring_kron, ring_matmul, ring_to_complex

P0 = ring_array([[1, 0], [0, 0]])
P1 = ring_array([[0, 0], [0, 1]])
KET10 = ring_array([[0, 0], [1, 0]])  # |1><0|
KET01 = ring_array([[0, 1], [0, 0]])  # |0><1|

IDENTITY = ring_array([[1, 0], [0, 1]])
HADAMARD = ring_array([[INV_SQRT2, INV_SQRT2], [INV_SQRT2, -INV_SQRT2]])
T_GATE = ring_array([[ONE, ZERO], [ZERO, OMEGA]])
PAULI_X = ring_array([[0, 1], [1, 0]])
PAULI_Z = ring_array([[1, 0], [0, -1]])
B_GATE = ring_array([[INV_SQRT2, I_UNIT * INV_SQRT2], [I_UNIT * INV_SQRT2, INV_SQRT2]])
PLUS = ring_array([[HALF, HALF], [HALF, HALF]])
MINUS = ring_array([[HALF, -HALF], [-HALF, HALF]])

CNOT = ring_array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])


def controlled_pair(a0: np.ndarray, a1: np.ndarray) -> np.ndarray:
    """|0><0| (x) a0 + |1><1| (x) a1."""
    return ring_kron(P0, a0) + ring_kron(P1, a1)


V_GATE = controlled_pair(ring_matmul(PAULI_Z, B_GATE), ring_matmul(B_GATE, PAULI_Z))
Q_GATE = controlled_pair(B_GATE, PAULI_Z)
Q_TILDE = controlled_pair(
    ring_matmul(ring_dagger(B_GATE), PAULI_Z, B_GATE),
    ring_matmul(PAULI_Z, B_GATE, PAULI_Z),
)

SINGLE_QUBIT = {"h": HADAMARD, "t": T_GATE, "id": IDENTITY, "x": PAULI_X, "z": PAULI_Z, "b": B_GATE}
TWO_QUBIT = {"cnot": CNOT, "v": V_GATE}


def t_power(k: int) -> np.ndarray:
    out = IDENTITY
    for _ in range(k % 8):
        out = ring_matmul(T_GATE, out)
    return out


@lru_cache(maxsize=None)
def _complex_cached(name: str) -> np.ndarray:
    table = {**SINGLE_QUBIT, **TWO_QUBIT, "q": Q_GATE, "qt": Q_TILDE}
    m = ring_to_complex(table[name])
    m.setflags(write=False)
    return m


def complex_gate(name: str) -> np.ndarray:
    return _complex_cached(name)
