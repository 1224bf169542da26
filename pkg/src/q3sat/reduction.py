"""Circuit-to-Hamiltonian reduction onto two clock registers.

A canonical circuit with M layers uses N = 9M + 3 clock steps.  Layer j puts
a single-qubit gadget on clock block 9j+1..9j+6 and a V gadget on
9j+4..9j+12; diagonal S terms pin the two clocks together between gadgets.

Global qubit order: computational register (n witness then n_a ancilla
qubits), first clock register, second clock register.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import clock
from .circuit import CanonicalCircuit, Circuit, apply_matrix, canonicalize
from .gates import P0, P1, SINGLE_QUBIT, complex_gate
from .grid import RESTRICTED_CAP, GateOn, GridTerm, RestrictedOperator, geq, h_u_terms, h_v_terms, leq, s_terms
from .operators import LocalTerm, diagonal_projector
from .ring import ring_kron

# grid points of the history-state pieces, in a block's own coordinates
K_CORNER = frozenset({(1, 1), (2, 1), (1, 2), (2, 2), (3, 2), (2, 3), (3, 3)})
L_BLOCK = frozenset({(4, 2), (5, 2), (4, 3), (5, 3)})


def _transpose(s):
    return frozenset((j, i) for i, j in s)


def _box(i_range, j_range):
    return frozenset((i, j) for i in i_range for j in j_range)


R_SET = (K_CORNER | {(4, 2), (4, 3)}, K_CORNER | {(2, 4), (3, 4)})
G_SET = (_box(range(5, 9), (2, 3)) | _box((6, 7, 8), (4,)),)
G_SET += (_transpose(G_SET[0]),)
Y_SET = (_box((2, 3, 4), (7, 8)),)
Y_SET += (_transpose(Y_SET[0]),)
_B0 = _box((6, 7, 8), (5, 6)) | _box(range(5, 9), (7,)) | _box(range(5, 10), (8,)) | {(8, 9), (9, 9)}
B_SET = (frozenset(_B0), _transpose(_B0))

SEGMENT_NORMS = {"K": 7, "L": 4, "M": 4, "psi": 43}


def clock_steps(M: int) -> int:
    return 9 * M + 3


@dataclass
class ReductionInstance:
    circuit: CanonicalCircuit
    grid_terms: list[GridTerm] = field(default_factory=list)

    @property
    def M(self) -> int:
        return self.circuit.M

    @property
    def N(self) -> int:
        return clock_steps(self.M)

    @property
    def n_comp(self) -> int:
        return self.circuit.width

    @property
    def clock_width(self) -> int:
        return clock.clock_width(self.N)

    @property
    def n_qubits(self) -> int:
        return self.n_comp + 2 * self.clock_width

    def restricted(self, tags=None, cap: int = RESTRICTED_CAP) -> RestrictedOperator:
        op = RestrictedOperator(self.n_comp, self.N, list(self.grid_terms), cap=cap)
        return op.subset(tags) if tags is not None else op

    def local_terms(self) -> list[LocalTerm]:
        off1 = self.n_comp
        off2 = self.n_comp + self.clock_width
        out = []
        for t in clock.clock_terms(self.N):
            out.append(t.shifted(off1, f"clock1:{t.tag}"))
        for t in clock.clock_terms(self.N):
            out.append(t.shifted(off2, f"clock2:{t.tag}"))
        out += [grid_to_local(t, self.N, off1, off2) for t in self.grid_terms]
        return out

    def manifest(self) -> dict:
        return {
            "n": self.circuit.n,
            "n_a": self.circuit.n_a,
            "M": self.M,
            "N": self.N,
            "qubits": self.n_qubits,
            "clock_register_qubits": self.clock_width,
            "restricted_dimension": 2**self.n_comp * self.N**2,
            "grid_terms": len(self.grid_terms),
            "singles": [[k, w + 1] for k, w in self.circuit.singles],
            "pairs": [[a + 1, b + 1] for a, b in self.circuit.pairs],
        }


def _clock_local(op, N: int, offset: int):
    """Exact (support, matrix) for one register's factor of a grid term."""
    if op.kind == "I":
        return (), None
    if op.kind == "h":
        q1, q2 = clock.h_support(N, op.index)
        support = (q1 + offset, q2 + offset)
        if op.gate is None:
            return support, clock.transition_numerator()
        return support + (op.gate.qubit,), clock.transition_numerator(SINGLE_QUBIT[op.gate.name])
    q = clock.leq_support(N, op.index) + offset
    return (q,), P0 if op.kind == "leq" else P1


def grid_to_local(t: GridTerm, N: int, off1: int, off2: int) -> LocalTerm:
    support: tuple[int, ...] = ()
    mats = []
    if t.control is not None:
        q, v = t.control
        support += (q,)
        mats.append(diagonal_projector(1, [v]))
    for op, off in ((t.first, off1), (t.second, off2)):
        s, m = _clock_local(op, N, off)
        support += s
        if m is not None:
            mats.append(m)
    return LocalTerm(support, ring_kron(*mats), 1, f"{t.tag}:{t.label()}")


def build_hx(c: Circuit | CanonicalCircuit, pad: tuple[int, int] = (0, 1)) -> ReductionInstance:
    cc = c if isinstance(c, CanonicalCircuit) else canonicalize(c, pad)
    M = cc.M
    N = clock_steps(M)
    terms: list[GridTerm] = []
    for j in range(M):
        terms += s_terms(9 * j + 1, "diag")
        terms += s_terms(9 * j + 4, "diag")
    terms += s_terms(9 * M + 1, "diag")
    for j, ((kind, w), (a, b)) in enumerate(zip(cc.singles, cc.pairs)):
        terms += h_u_terms(9 * j + 3, GateOn(w, kind), tag=f"U:{j}")
        terms += h_v_terms(9 * j + 6, a, b, tag=f"V:{j}")
    for i in range(cc.n_a):
        terms.append(GridTerm(leq(1), leq(1), control=(cc.n + i, 1), tag="init"))
    terms.append(GridTerm(geq(N), geq(N), control=(cc.n, 0), tag="end"))
    return ReductionInstance(cc, terms)


def restricted_hx(inst: ReductionInstance, tags=None):
    return inst.restricted(tags).matrix


# history states

def _shift(points, d: int):
    return [(i + d, j + d) for i, j in points]


def _place(parts, n: int, N: int) -> np.ndarray:
    vec = np.zeros((2**n, N, N), dtype=complex)
    for points, psi in parts:
        for i, j in points:
            vec[:, i - 1, j - 1] += psi
    return vec.reshape(-1)


def _psi_v_parts(phi, a: int, b: int, n: int, offset: int):
    Q, Qt, V = complex_gate("q"), complex_gate("qt"), complex_gate("v")
    parts = []
    for x in (0, 1):
        px = apply_matrix(phi, np.diag([1.0 - x, float(x)]), [a], n)
        for sets, gate in ((R_SET, None), (G_SET, Q), (Y_SET, Qt), (B_SET, V)):
            vec = px if gate is None else apply_matrix(px, gate, [a, b], n)
            parts.append((_shift(sets[x], offset), vec))
    return parts


def psi_v_state(phi, a: int, b: int, n: int, N: int, offset: int = 0) -> np.ndarray:
    """Zero-energy state of a V gadget: phi, Q phi, Q~ phi, V phi on the four regions.

    Unnormalised; its squared norm is 43 for normalised phi.
    """
    phi = np.asarray(phi, dtype=complex).reshape(-1)
    return _place(_psi_v_parts(phi, a, b, n, offset), n, N)


def gadget_null_states(N: int = 9) -> np.ndarray:
    """Normalised psi_V states of the stand-alone two-qubit gadget for |xy>, x,y in {0,1}."""
    cols = [psi_v_state(np.eye(4)[:, z], 0, 1, 2, N) for z in range(4)]
    return np.column_stack(cols) / np.sqrt(43)


def history_segments(inst: ReductionInstance, phi: np.ndarray) -> list[tuple[str, np.ndarray]]:
    """Unnormalised history-state pieces K0, L^j, M^j, psi^j in chain order."""
    cc = inst.circuit
    n, N = cc.width, inst.N
    phi = np.asarray(phi, dtype=complex).reshape(-1)
    if phi.size != 2**n:
        raise ValueError(f"phi must have dimension {2**n}")
    out = [("K0", _place([(K_CORNER, phi)], n, N))]
    state = phi
    V = complex_gate("v")
    for j, ((kind, w), (a, b)) in enumerate(zip(cc.singles, cc.pairs)):
        d = 9 * j
        moved = apply_matrix(state, complex_gate(kind), [w], n)
        out.append((f"L{j}", _place([(_shift(L_BLOCK, d), moved)], n, N)))
        out.append((f"M{j}", _place([(_shift(_transpose(L_BLOCK), d), state)], n, N)))
        out.append((f"psi{j}", _place(_psi_v_parts(moved, a, b, n, d + 3), n, N)))
        state = apply_matrix(moved, V, [a, b], n)
    return out


def history_state(inst: ReductionInstance, phi: np.ndarray) -> np.ndarray:
    total = sum(v for _, v in history_segments(inst, phi))
    return total / np.sqrt(51 * inst.M + 7)


def history_overlaps(inst: ReductionInstance, phi: np.ndarray, tags=("U",)) -> np.ndarray:
    """Matrix of the chosen terms between the unnormalised history pieces."""
    segs = np.column_stack([v for _, v in history_segments(inst, phi)])
    h = inst.restricted(tags).matrix
    return segs.conj().T @ (h @ segs)


def expected_boundary_energies(inst: ReductionInstance, psi: np.ndarray) -> dict:
    """Closed forms for <Hist|H_init|Hist> and <Hist|H_end|Hist>."""
    cc = inst.circuit
    n = cc.width
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    pref = 1 / (4 * (51 * inst.M + 7))
    probs = np.abs(psi.reshape((2,) * n)) ** 2
    init = sum(float(np.take(probs, 1, axis=cc.n + i).sum()) for i in range(cc.n_a))
    out = cc.unitary() @ psi
    end = float(np.take(np.abs(out.reshape((2,) * n)) ** 2, 0, axis=cc.n).sum())
    return {"init": pref * init, "end": pref * end}
