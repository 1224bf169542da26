"""Feynman and Kitaev circuit Hamiltonians, kept as cross-check oracles.

Feynman's clock is an (m+1)-level register; Kitaev encodes it in m qubits as
unary strings |1^t 0^(m-t)>.  Qubit order is computational register first,
then clock qubits.  Neither construction is used by the reduction itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .circuit import Circuit, Gate, apply_matrix
from .operators import embed_matrix


@dataclass(frozen=True, eq=False)
class DenseTerm:
    """A local operator of any locality, held as a dense complex matrix."""

    support: tuple[int, ...]
    matrix: np.ndarray
    tag: str = ""

    @property
    def locality(self) -> int:
        return len(self.support)


def assemble_dense(terms, n: int) -> sp.csr_matrix:
    out = sp.csr_matrix((2**n, 2**n), dtype=complex)
    for t in terms:
        out = out + embed_matrix(t.matrix, t.support, n)
    return out


def _gate_on_register(g: Gate, n: int) -> sp.csr_matrix:
    dim = 2**n
    cols = [apply_matrix(np.eye(dim, dtype=complex)[:, k], g.matrix(), g.wires, n) for k in range(dim)]
    return sp.csr_matrix(np.column_stack(cols))


def build_feynman(c: Circuit) -> sp.csr_matrix:
    """Sum of the projectors (1/2)(|t><t| + |t+1><t+1| - W^dag |t><t+1| - W |t+1><t|)."""
    n, m = c.width, len(c.gates)
    if m == 0:
        raise ValueError("circuit has no gates")
    eye = sp.identity(2**n, format="csr", dtype=complex)
    h = sp.csr_matrix((2**n * (m + 1),) * 2, dtype=complex)

    def ket_bra(a, b):
        return sp.csr_matrix(([1.0], ([a], [b])), shape=(m + 1, m + 1))

    for t, g in enumerate(c.gates):
        w = _gate_on_register(g, n)
        h = h + 0.5 * (sp.kron(eye, ket_bra(t, t) + ket_bra(t + 1, t + 1))
                       - sp.kron(w.conj().T, ket_bra(t, t + 1)) - sp.kron(w, ket_bra(t + 1, t)))
    return sp.csr_matrix(h)


def feynman_history(c: Circuit, phi: np.ndarray) -> np.ndarray:
    m = len(c.gates)
    steps = [np.asarray(phi, dtype=complex)]
    for g in c.gates:
        steps.append(apply_matrix(steps[-1], g.matrix(), g.wires, c.width))
    # comp register major, clock minor
    return np.stack(steps, axis=1).reshape(-1) / np.sqrt(m + 1)


def unary_terms(m: int, offset: int = 0) -> list[DenseTerm]:
    """|01><01| on each neighbouring pair, penalising non-unary strings."""
    p01 = np.zeros((4, 4))
    p01[1, 1] = 1.0
    return [DenseTerm((offset + i, offset + i + 1), p01, f"unary {i + 1}") for i in range(m - 1)]


def unary_state(m: int, t: int) -> np.ndarray:
    v = np.zeros(2**m)
    v[int("1" * t + "0" * (m - t), 2) if m else 0] = 1.0
    return v


def _transition_pattern(t: int, m: int):
    """Clock positions (0-based) and the before/after bit strings of step t."""
    if m == 1:
        return (0,), "0", "1"
    if t == 0:
        return (0, 1), "00", "10"
    if t == m - 1:
        return (m - 2, m - 1), "10", "11"
    return (t - 1, t, t + 1), "100", "110"


def kitaev_transition(t: int, m: int, W: np.ndarray, wires, n: int) -> DenseTerm:
    """h^u_{t,t+1}(W) with one-sided patterns at the two ends of the clock."""
    clock, before, after = _transition_pattern(t, m)
    k = len(clock)
    a, b = int(before, 2), int(after, 2)
    pa = np.zeros((2**k, 2**k))
    pa[a, a] = 1.0
    pb = np.zeros((2**k, 2**k))
    pb[b, b] = 1.0
    up = np.zeros((2**k, 2**k))
    up[a, b] = 1.0  # |before><after|
    W = np.asarray(W, dtype=complex)
    eye = np.eye(W.shape[0])
    mat = 0.5 * (np.kron(eye, pa + pb) - np.kron(W.conj().T, up) - np.kron(W, up.T))
    support = tuple(wires) + tuple(n + q for q in clock)
    return DenseTerm(support, mat, f"transition {t},{t + 1}")


def build_kitaev(c: Circuit) -> list[DenseTerm]:
    n, m = c.width, len(c.gates)
    if m == 0:
        raise ValueError("circuit has no gates")
    terms = unary_terms(m, n)
    terms += [kitaev_transition(t, m, g.matrix(), g.wires, n) for t, g in enumerate(c.gates)]
    return terms


def kitaev_projected(c: Circuit) -> np.ndarray:
    """The Kitaev Hamiltonian compressed to I (x) span{|t>_u}, comp major."""
    n, m = c.width, len(c.gates)
    h = assemble_dense(build_kitaev(c), n + m)
    basis = np.column_stack([np.kron(np.eye(2**n)[:, z], unary_state(m, t))
                             for z in range(2**n) for t in range(m + 1)])
    return basis.T @ (h @ basis)
