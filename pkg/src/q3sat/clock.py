"""The triplet and clock Hamiltonians and their zero-energy states.

A clock register for N time steps holds 6N-3 triplet qubits followed by N
unary qubits, 7N-3 in total.  Indices here are 0-based register positions;
``triplet_qubit(p)`` and ``unary_qubit(N, u)`` convert from the 1-based
labels used in formulas.

Clock states are stored as short sums of product states over triplets, so
matrix elements of local operators can be computed for any N without
building a 2^(7N-3) vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .gates import MINUS, PAULI_X, PLUS
from .operators import LocalTerm, diagonal_projector, embed_matrix, rank_one, two_point_witness
from .ring import HALF, INV_SQRT2, ONE, RingScalar, SQRT2_R, ring_array, ring_dagger, ring_kron, ring_zeros

R2 = 1 / np.sqrt(2)

TRIPLET_VECTORS = {
    "000": np.eye(8)[0],
    "110": np.eye(8)[6],
    "101": np.eye(8)[5],
    "theta": (np.eye(8)[4] + np.eye(8)[3]) * R2,
}


def triplet_qubit(p: int) -> int:
    return p - 1


def unary_qubit(N: int, u: int) -> int:
    return 6 * N - 4 + u


def clock_width(N: int) -> int:
    return 7 * N - 3


def _check_N(N: int) -> None:
    if N < 2:
        raise ValueError("clock needs N >= 2")


# exact local matrices

def transition_numerator(U: np.ndarray | None = None) -> np.ndarray:
    """Exact transition on (clock q, clock q+1[, comp]) with equal weights.

    Returns (1/2)(|10><10| + |01><01|) - (1/2)(|10><01| (x) U^dag + |01><10| (x) U).
    """
    p10 = diagonal_projector(2, ["10"])
    p01 = diagonal_projector(2, ["01"])
    # |10><01|: row 10 (index 2), column 01 (index 1)
    k10_01 = ring_zeros((4, 4))
    k10_01[2, 1] = ONE
    k01_10 = ring_zeros((4, 4))
    k01_10[1, 2] = ONE
    if U is None:
        m = p10 + p01 - k10_01 - k01_10
    else:
        eye = ring_array(np.eye(U.shape[0], dtype=int))
        m = ring_kron(p10 + p01, eye) - ring_kron(k10_01, ring_dagger(U)) - ring_kron(k01_10, U)
    return np.vectorize(lambda x: x * HALF, otypes=[object])(m)


def _theta_minus_projector() -> np.ndarray:
    v = [0] * 8
    v[4], v[3] = INV_SQRT2, -INV_SQRT2
    return rank_one(v)


def _gamma_term(support) -> LocalTerm:
    # 3|gamma><gamma| with sqrt3 gamma = |100> - sqrt2 |011>
    v = [RingScalar(0)] * 8
    v[4], v[3] = ONE, -SQRT2_R
    return LocalTerm(support, rank_one(v), 3, "H3", two_point_witness(v))


def _boundary_g_terms(support, first: bool, tag: str) -> list[LocalTerm]:
    """g-terms at the ends of the triplet chain split into |+> and |-> parts.

    With weights (1, 1/2) at the start and (1/2, 1) at the end the off-diagonal
    coefficient is sqrt2/3, so each part is a rank-one projector with a
    sqrt3 denominator and is certified with a witness.
    """
    out = []
    for sign, proj, had in ((1, PLUS, "+"), (-1, MINUS, "-")):
        # two-qubit vector sqrt3 v on (|10>, |01>) ordering of the clock qubits
        v2 = [RingScalar(0)] * 4
        if first:
            v2[2], v2[1] = ONE, RingScalar(-sign) * SQRT2_R
        else:
            v2[2], v2[1] = SQRT2_R, RingScalar(-sign)
        num = ring_kron(rank_one(v2), proj)
        # after H on the unary qubit |+> -> |0>, |-> -> |1>
        target = [RingScalar(0)] * 8
        bit = 0 if sign == 1 else 1
        for k in range(4):
            target[2 * k + bit] = v2[k]
        wit = two_point_witness(target, hadamard_last=True)
        out.append(LocalTerm(support, num, 3, f"{tag}{had}", wit))
    return out


def triplet_terms(N: int) -> list[LocalTerm]:
    """Terms of the triplet Hamiltonian on 3(2N-1) qubits."""
    _check_N(N)
    T = 2 * N - 1
    out = []
    theta_minus = _theta_minus_projector()
    for t in range(T):
        q = (3 * t, 3 * t + 1, 3 * t + 2)
        for s in ("111", "010", "001"):
            out.append(LocalTerm(q, diagonal_projector(3, [s]), 1, f"H1:{s}"))
        out.append(LocalTerm(q, theta_minus, 1, "H1:theta-"))
    out.append(LocalTerm((0, 1, 2), diagonal_projector(3, ["000"]), 1, "H1:first"))
    last = (3 * (T - 1), 3 * (T - 1) + 1, 3 * (T - 1) + 2)
    for s in ("100", "011"):
        out.append(LocalTerm(last, diagonal_projector(3, [s]), 1, "H1:last"))
    for t in range(T - 1):
        for m in range(3):
            nxt = 3 * t + 3 + m
            out.append(LocalTerm((3 * t + 1, 3 * t + 2, nxt), diagonal_projector(3, ["101", "011"]), 1, "H2:active"))
            out.append(LocalTerm((3 * t, 3 * t + 1, nxt), diagonal_projector(3, ["001"]), 1, "H2:empty"))
    for t in range(T - 1):
        out.append(_gamma_term((3 * t + 2, 3 * t + 3, 3 * t + 4)))
    return out


def unary_terms(N: int, offset: int = 0) -> list[LocalTerm]:
    return [LocalTerm((offset + u, offset + u + 1), diagonal_projector(2, ["01"]), 1, "unary") for u in range(N - 1)]


def _q_support(j: int) -> tuple[int, int]:
    # q_1 on qubits 2,3 ; q_j on 3j-4, 3j-3 (1-based)
    return (1, 2) if j == 1 else (3 * j - 5, 3 * j - 4)


def sync_terms(N: int) -> list[LocalTerm]:
    out = []

    def add(j, u, bit):
        q = _q_support(j)
        pattern = "10" if j == 1 else "01"
        out.append(LocalTerm(q + (unary_qubit(N, u),), diagonal_projector(3, [pattern + str(bit)]), 1, "sync"))

    add(1, 1, 1)
    for j in range(2, 2 * N):
        add(j, j // 2, 0)
        add(j, j // 2 + 1, 1)
    add(2 * N, N, 0)
    return out


def g_terms(N: int) -> list[LocalTerm]:
    """The transitions g_{2i-1,2i}(sigma^x on unary qubit i)."""
    out = []
    for i in range(1, N + 1):
        k = 2 * i - 1
        support = (3 * k - 2, 3 * k - 1, unary_qubit(N, i))
        if k == 1:
            out += _boundary_g_terms(support, True, "g:first")
        elif k == 2 * N - 1:
            out += _boundary_g_terms(support, False, "g:last")
        else:
            out.append(LocalTerm(support, transition_numerator(PAULI_X), 1, "g"))
    return out


def clock_terms(N: int) -> list[LocalTerm]:
    _check_N(N)
    return triplet_terms(N) + unary_terms(N, 6 * N - 3) + sync_terms(N) + g_terms(N)


# clock operators used by the gadgets, as local terms on one register

def h_support(N: int, k: int) -> tuple[int, int]:
    if not 1 <= k < N:
        raise ValueError(f"h_{{{k},{k + 1}}} needs 1 <= k < N={N}")
    return (6 * k - 2, 6 * k - 1)


def leq_support(N: int, k: int) -> int:
    if not 1 <= k <= N:
        raise ValueError(f"C_<={k} needs 1 <= k <= N={N}")
    return unary_qubit(N, k)


# zero-energy states as sums of products

@dataclass(frozen=True)
class ProductComponent:
    amp: float
    triplets: tuple[str, ...]
    unary: int  # number of leading ones


def hat_labels(N: int, k: int) -> tuple[str, ...]:
    T = 2 * N - 1
    if not 1 <= k <= 4 * N - 2:
        raise ValueError("hat index out of range")
    m = (k - 1) // 2
    active = "110" if k % 2 == 1 else "101"
    return ("theta",) * m + (active,) + ("000",) * (T - m - 1)


def tilde_labels(N: int, k: int) -> tuple[str, ...]:
    T = 2 * N - 1
    return ("theta",) * k + ("000",) * (T - k)


def c_components(N: int, i: int) -> list[tuple[float, tuple[str, ...]]]:
    if i == 1:
        return [(1.0, hat_labels(N, 1))]
    if i == 2 * N:
        return [(1.0, hat_labels(N, 4 * N - 2))]
    return [(R2, hat_labels(N, 2 * i - 2)), (R2, hat_labels(N, 2 * i - 1))]


def clock_components(N: int, i: int) -> list[ProductComponent]:
    if not 1 <= i <= N:
        raise ValueError(f"clock index {i} outside 1..{N}")
    out = []
    for amp, lab in c_components(N, 2 * i - 1):
        out.append(ProductComponent(amp * R2, lab, i - 1))
    for amp, lab in c_components(N, 2 * i):
        out.append(ProductComponent(amp * R2, lab, i))
    return out


def _labels_vector(labels) -> np.ndarray:
    v = np.ones(1)
    for lab in labels:
        v = np.kron(v, TRIPLET_VECTORS[lab])
    return v


def _unary_vector(N: int, t: int) -> np.ndarray:
    v = np.zeros(2**N)
    v[int("1" * t + "0" * (N - t), 2) if N else 0] = 1.0
    return v


def triplet_state(labels) -> np.ndarray:
    return _labels_vector(labels)


def hat_state(N: int, k: int) -> np.ndarray:
    return _labels_vector(hat_labels(N, k))


def tilde_state(N: int, k: int) -> np.ndarray:
    return _labels_vector(tilde_labels(N, k))


def c_state(N: int, i: int) -> np.ndarray:
    return sum(a * _labels_vector(lab) for a, lab in c_components(N, i))


def clock_state_sparse(N: int, i: int) -> sp.csr_matrix:
    """|C_i> as a sparse column over 2^(7N-3) basis states."""
    acc: dict[int, float] = {}
    for comp in clock_components(N, i):
        v = sp.csr_matrix(_labels_vector(comp.triplets).reshape(-1, 1))
        u = int("1" * comp.unary + "0" * (N - comp.unary), 2)
        for r, val in zip(v.nonzero()[0], v.data):
            key = (int(r) << N) | u
            acc[key] = acc.get(key, 0.0) + comp.amp * val
    keys = np.array(sorted(acc), dtype=np.int64)
    vals = np.array([acc[k] for k in keys])
    return sp.csr_matrix((vals, (keys, np.zeros_like(keys))), shape=(2 ** clock_width(N), 1))


def clock_state(N: int, i: int) -> np.ndarray:
    if clock_width(N) > 22:
        raise ValueError("dense clock states are limited to N <= 3; use clock_state_sparse")
    return clock_state_sparse(N, i).toarray().ravel()


def clock_basis(N: int) -> np.ndarray:
    return np.column_stack([clock_state(N, i) for i in range(1, N + 1)])


def triplet_ground_basis(N: int) -> np.ndarray:
    return np.column_stack([c_state(N, i) for i in range(1, 2 * N + 1)])


# matrix elements of local operators between product states

def _component_element(N: int, x: ProductComponent, y: ProductComponent, local: np.ndarray, support) -> complex:
    width_t = 6 * N - 3
    touched_t = sorted({q // 3 for q in support if q < width_t})
    touched_u = sorted({q - width_t for q in support if q >= width_t})
    for t, (a, b) in enumerate(zip(x.triplets, y.triplets)):
        if t not in touched_t and a != b:
            return 0.0
    xb = "1" * x.unary + "0" * (N - x.unary)
    yb = "1" * y.unary + "0" * (N - y.unary)
    for u in range(N):
        if u not in touched_u and xb[u] != yb[u]:
            return 0.0
    qubits = [q for t in touched_t for q in (3 * t, 3 * t + 1, 3 * t + 2)] + [width_t + u for u in touched_u]
    vx = _labels_vector([x.triplets[t] for t in touched_t])
    vy = _labels_vector([y.triplets[t] for t in touched_t])
    for u in touched_u:
        vx = np.kron(vx, np.eye(2)[int(xb[u])])
        vy = np.kron(vy, np.eye(2)[int(yb[u])])
    op = embed_matrix(local, [qubits.index(q) for q in support], len(qubits))
    return complex(vx.conj() @ (op @ vy))


def compress(N: int, local: np.ndarray, support) -> np.ndarray:
    """N x N matrix of <C_a| X |C_b> for a local X on one clock register."""
    comps = [clock_components(N, i) for i in range(1, N + 1)]
    out = np.zeros((N, N), dtype=complex)
    for a in range(N):
        for b in range(N):
            out[a, b] = sum(x.amp * y.amp * _component_element(N, x, y, local, support) for x in comps[a] for y in comps[b])
    return out


def energy_on_clock_states(N: int, terms) -> np.ndarray:
    """Diagonal <C_i| t |C_i> summed over terms, for each i."""
    out = np.zeros(N)
    for i in range(1, N + 1):
        comps = clock_components(N, i)
        for t in terms:
            m = t.matrix
            out[i - 1] += sum(x.amp * y.amp * _component_element(N, x, y, m, t.support) for x in comps for y in comps).real
    return out


# projected coefficients used by the restricted-basis machinery

def alpha(N: int, i: int) -> float:
    return 1.0 if i in (1, 2 * N) else 0.5


def beta(N: int, i: int) -> float:
    a, b = alpha(N, i), alpha(N, i + 1)
    return a * b / (a + b)


@lru_cache(maxsize=None)
def leq_weights(N: int, k: int) -> tuple[float, ...]:
    return tuple(1.0 if j < k else 0.5 if j == k else 0.0 for j in range(1, N + 1))


@lru_cache(maxsize=None)
def geq_weights(N: int, k: int) -> tuple[float, ...]:
    return tuple(1.0 if j > k else 0.5 if j == k else 0.0 for j in range(1, N + 1))


def g_numerator_float(i: int, N: int, U: np.ndarray) -> np.ndarray:
    """Floating g_{i,i+1}(U) on (clock, clock, comp) straight from its weights."""
    a, b = alpha(N, i), alpha(N, i + 1)
    p10 = np.diag([0, 0, 1, 0])
    p01 = np.diag([0, 1, 0, 0])
    k10_01 = np.zeros((4, 4))
    k10_01[2, 1] = 1
    d = U.shape[0]
    return (np.kron(b * p10 + a * p01, np.eye(d)) / (a + b)
            - np.sqrt(a * b) / (a + b) * (np.kron(k10_01, U.conj().T) + np.kron(k10_01.T, U)))
