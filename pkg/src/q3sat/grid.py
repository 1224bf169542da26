"""Operators on two clock registers, restricted to the clock-state grid.

The restricted space is spanned by |z>|C_i>|C_j>, with z a computational
basis state and i, j = 1..N.  Every gadget term is a product of an optional
computational projector, a clock operator on each register, and at most one
single-qubit unitary inside a transition, so its compression follows from
the projected forms of h, C_<= and C_>=.  The clock Hamiltonians themselves
vanish on this space and are left out.

Basis order: z major, then i, then j.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

import numpy as np
import scipy.sparse as sp

from . import clock
from .gates import complex_gate

RESTRICTED_CAP = 200_000


@dataclass(frozen=True)
class GateOn:
    """A single-qubit unitary acting on computational qubit ``qubit``."""

    qubit: int
    name: str

    def matrix(self) -> np.ndarray:
        return complex_gate(self.name)


@dataclass(frozen=True)
class ClockOp:
    kind: str  # "I", "h", "leq", "geq"
    index: int = 0
    gate: GateOn | None = None

    def __post_init__(self):
        if self.kind not in ("I", "h", "leq", "geq"):
            raise ValueError(f"unknown clock operator {self.kind!r}")
        if self.gate is not None and self.kind != "h":
            raise ValueError("only transitions carry a unitary")

    @property
    def locality(self) -> int:
        return {"I": 0, "h": 2, "leq": 1, "geq": 1}[self.kind]

    def label(self) -> str:
        if self.kind == "I":
            return "I"
        if self.kind == "h":
            g = f"({self.gate.name}_{self.gate.qubit + 1})" if self.gate else ""
            return f"h{self.index},{self.index + 1}{g}"
        return f"C{'<=' if self.kind == 'leq' else '>='}{self.index}"


IDENT = ClockOp("I")


def h(k: int, gate: GateOn | None = None) -> ClockOp:
    return ClockOp("h", k, gate)


def leq(k: int) -> ClockOp:
    return ClockOp("leq", k)


def geq(k: int) -> ClockOp:
    return ClockOp("geq", k)


@dataclass(frozen=True)
class GridTerm:
    first: ClockOp
    second: ClockOp
    control: tuple[int, int] | None = None  # (qubit, value) for |value><value|
    tag: str = ""

    def __post_init__(self):
        gates = [op.gate for op in (self.first, self.second) if op.gate is not None]
        if len(gates) > 1:
            raise ValueError("at most one unitary per term")
        if self.control is not None and gates and gates[0].qubit == self.control[0]:
            raise ValueError("control and unitary must act on different qubits")
        if self.locality > 3:
            raise ValueError(f"term {self.label()} is {self.locality}-local")

    @property
    def gate(self) -> GateOn | None:
        return self.first.gate or self.second.gate

    @property
    def locality(self) -> int:
        return self.first.locality + self.second.locality + (self.control is not None) + (self.gate is not None)

    def label(self) -> str:
        ctl = f"|{self.control[1]}><{self.control[1]}|_{self.control[0] + 1} (x) " if self.control else ""
        return f"{ctl}{self.first.label()} (x) {self.second.label()}"


def s_terms(k: int, tag: str = "") -> list[GridTerm]:
    """The six terms of S^(k,k+2), which only allow |i - j| to jump across k+1."""
    tag = tag or f"S{k},{k + 2}"
    return [
        GridTerm(leq(k), geq(k + 2), tag=tag),
        GridTerm(h(k, None), leq(k + 1), tag=tag),
        GridTerm(h(k + 1, None), geq(k + 1), tag=tag),
        GridTerm(geq(k + 2), leq(k), tag=tag),
        GridTerm(leq(k + 1), h(k, None), tag=tag),
        GridTerm(geq(k + 1), h(k + 1, None), tag=tag),
    ]


def h_u_terms(k: int, gate: GateOn, tag: str = "U") -> list[GridTerm]:
    return [GridTerm(h(k, gate), IDENT, tag=tag), GridTerm(IDENT, h(k), tag=tag)]


def h_v_terms(k: int, a: int, b: int, tag: str = "V") -> list[GridTerm]:
    """Horizontal and vertical parts of a V gadget whose block starts at clock k+1.

    With k = 3 this is the stand-alone two-qubit gadget on N = 9.
    """
    k3, k4, k5, k6, top, low = k, k + 1, k + 2, k + 3, k + 4, k
    return [
        GridTerm(h(k3), IDENT, control=(a, 0), tag=tag),
        GridTerm(h(k3), geq(top), tag=tag),
        GridTerm(h(k5), leq(low), tag=tag),
        GridTerm(h(k4, GateOn(b, "b")), IDENT, tag=tag),
        GridTerm(h(k6), IDENT, control=(a, 0), tag=tag),
        GridTerm(h(k6), geq(top), tag=tag),
        GridTerm(h(k5), geq(top), tag=tag),
        GridTerm(IDENT, h(k3), control=(a, 1), tag=tag),
        GridTerm(geq(top), h(k3), tag=tag),
        GridTerm(leq(low), h(k5), tag=tag),
        GridTerm(IDENT, h(k4, GateOn(b, "z")), tag=tag),
        GridTerm(IDENT, h(k6), control=(a, 1), tag=tag),
        GridTerm(geq(top), h(k6), tag=tag),
        GridTerm(geq(top), h(k5), tag=tag),
    ]


# compression of single clock operators

def clock_pieces(op: ClockOp, N: int):
    """List of (marker, N x N sparse) pieces of <C|op|C>.

    The marker is None for clock-only pieces, ``"U"`` where the transition
    applies U and ``"Ud"`` where it applies U^dagger.
    """
    if op.kind == "I":
        return [(None, sp.identity(N, format="csr"))]
    if op.kind in ("leq", "geq"):
        if not 1 <= op.index <= N:
            raise ValueError(f"{op.label()} outside 1..{N}")
        w = clock.leq_weights(N, op.index) if op.kind == "leq" else clock.geq_weights(N, op.index)
        return [(None, sp.diags(np.array(w), format="csr"))]
    k = op.index
    if not 1 <= k < N:
        raise ValueError(f"{op.label()} outside 1..{N}")
    diag = sp.csr_matrix(([1 / 8, 1 / 8], ([k - 1, k], [k - 1, k])), shape=(N, N))
    up = sp.csr_matrix(([-1 / 8], ([k - 1], [k])), shape=(N, N))  # |C_k><C_k+1|
    down = sp.csr_matrix(([-1 / 8], ([k], [k - 1])), shape=(N, N))
    return [(None, diag), ("Ud", up), ("U", down)]


def _single_on(n: int, qubit: int, m: np.ndarray) -> sp.csr_matrix:
    mats = [sp.identity(2, format="csr", dtype=complex)] * n
    mats[qubit] = sp.csr_matrix(m)
    return reduce(lambda x, y: sp.kron(x, y, format="csr"), mats) if n else sp.identity(1, format="csr")


def comp_operator(term: GridTerm, marker, n: int) -> sp.csr_matrix:
    dim = 2**n
    out = sp.identity(dim, format="csr", dtype=complex)
    if term.control is not None:
        q, v = term.control
        if q >= n:
            raise ValueError("control qubit outside computational register")
        out = out @ _single_on(n, q, np.diag([1.0 - v, float(v)]))
    g = term.gate
    if marker is not None and g is not None:
        if g.qubit >= n:
            raise ValueError("unitary qubit outside computational register")
        u = g.matrix()
        out = out @ _single_on(n, g.qubit, u if marker == "U" else u.conj().T)
    return out


def term_matrix(term: GridTerm, n: int, N: int) -> sp.csr_matrix:
    out = None
    first = clock_pieces(term.first, N)
    second = clock_pieces(term.second, N)
    for m1, a in first:
        for m2, b in second:
            marker = m1 or m2
            piece = sp.kron(comp_operator(term, marker, n), sp.kron(a, b), format="csr")
            out = piece if out is None else out + piece
    return out


@dataclass
class RestrictedOperator:
    n_comp: int
    N: int
    terms: list[GridTerm] = field(default_factory=list)
    _matrix: sp.csr_matrix | None = field(default=None, repr=False)
    cap: int = RESTRICTED_CAP

    @property
    def dim(self) -> int:
        return 2**self.n_comp * self.N**2

    @property
    def matrix(self) -> sp.csr_matrix:
        if self._matrix is None:
            if self.dim > self.cap:
                raise MemoryError(f"restricted dimension {self.dim} exceeds cap {self.cap}")
            m = sp.csr_matrix((self.dim, self.dim), dtype=complex)
            for t in self.terms:
                m = m + term_matrix(t, self.n_comp, self.N)
            m.sum_duplicates()
            self._matrix = m
        return self._matrix

    def index(self, z: int, i: int, j: int) -> int:
        return (z * self.N + (i - 1)) * self.N + (j - 1)

    def subset(self, tags) -> RestrictedOperator:
        tags = set(tags)
        return RestrictedOperator(self.n_comp, self.N, [t for t in self.terms if t.tag.split(":")[0] in tags],
                                  cap=self.cap)

    def __add__(self, other: RestrictedOperator) -> RestrictedOperator:
        if (self.n_comp, self.N) != (other.n_comp, other.N):
            raise ValueError("operators live on different grids")
        return RestrictedOperator(self.n_comp, self.N, self.terms + other.terms, cap=min(self.cap, other.cap))


def restricted_matrix(terms, n_comp: int, N: int) -> sp.csr_matrix:
    return RestrictedOperator(n_comp, N, list(terms)).matrix


def clock_term_local(op: ClockOp, N: int):
    """(support, local matrix) of a clock operator on one register, U = identity."""
    if op.kind == "h":
        return clock.h_support(N, op.index), np.array(
            [[0, 0, 0, 0], [0, 0.5, -0.5, 0], [0, -0.5, 0.5, 0], [0, 0, 0, 0]], dtype=complex)
    if op.kind in ("leq", "geq"):
        v = 0 if op.kind == "leq" else 1
        return (clock.leq_support(N, op.index),), np.diag([1.0 - v, float(v)]).astype(complex)
    return (), np.eye(1)


# gadgets

def build_warmup() -> RestrictedOperator:
    return RestrictedOperator(0, 9, s_terms(4))


def build_h1q(U: str = "h", clock_only: bool = False) -> RestrictedOperator:
    terms = s_terms(1) + s_terms(4)
    if not clock_only:
        terms += h_u_terms(3, GateOn(0, U))
    return RestrictedOperator(0 if clock_only else 1, 6, terms)


def build_h2q(clock_only: bool = False) -> RestrictedOperator:
    terms = s_terms(1) + s_terms(7)
    if not clock_only:
        terms += h_v_terms(3, 0, 1)
    return RestrictedOperator(0 if clock_only else 2, 9, terms)


# component graphs

@dataclass
class ComponentGraph:
    N: int
    vertices: list[tuple[int, int]]
    edges: list[tuple[tuple[int, int], tuple[int, int]]]
    components: list[list[tuple[int, int]]]
    dead: list[tuple[int, int]]

    def adjacency(self) -> dict:
        adj = {v: [] for v in self.vertices}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return {v: sorted(ns) for v, ns in sorted(adj.items())}

    def to_text(self) -> str:
        lines = [f"# N={self.N} vertices={len(self.vertices)} edges={len(self.edges)} components={len(self.components)}"]
        for v, ns in self.adjacency().items():
            lines.append(f"{v[0]},{v[1]}: " + " ".join(f"{a},{b}" for a, b in ns))
        return "\n".join(lines) + "\n"

    def component_of(self, v) -> int:
        for k, comp in enumerate(self.components):
            if v in comp:
                return k
        raise KeyError(v)


def parse_adjacency(text: str) -> dict:
    adj = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(":")
        key = tuple(int(x) for x in head.split(","))
        adj[key] = sorted(tuple(int(x) for x in tok.split(",")) for tok in rest.split())
    return adj


def component_analysis(op: RestrictedOperator) -> ComponentGraph:
    """Graph of the zero-energy structure of a clock-only operator.

    Diagonal C (x) C terms delete grid points; transition terms with nonzero
    weight on the spectator register join neighbouring points.  A component
    that touches a deleted point is forced to vanish.
    """
    if op.n_comp != 0 or any(t.gate is not None or t.control is not None for t in op.terms):
        raise ValueError("component analysis needs an operator without computational parts")
    N = op.N
    penalty = np.zeros((N, N))
    edges = set()

    def weights(o: ClockOp):
        if o.kind == "I":
            return np.ones(N)
        w = clock.leq_weights(N, o.index) if o.kind == "leq" else clock.geq_weights(N, o.index)
        return np.array(w)

    for t in op.terms:
        a, b = t.first, t.second
        if a.kind == "h" and b.kind == "h":
            raise ValueError("transitions on both registers are not supported")
        if a.kind == "h":
            for j, w in enumerate(weights(b), start=1):
                if w > 0:
                    edges.add(((a.index, j), (a.index + 1, j)))
        elif b.kind == "h":
            for i, w in enumerate(weights(a), start=1):
                if w > 0:
                    edges.add(((i, b.index), (i, b.index + 1)))
        else:
            penalty += np.outer(weights(a), weights(b))
    deleted = {(i + 1, j + 1) for i, j in zip(*np.nonzero(penalty > 0))}
    points = [(i, j) for i in range(1, N + 1) for j in range(1, N + 1)]
    parent = {p: p for p in points}

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    for u, v in edges:
        parent[find(u)] = find(v)
    groups: dict = {}
    for p in points:
        groups.setdefault(find(p), []).append(p)
    alive, dead = [], []
    for g in groups.values():
        (dead if any(p in deleted for p in g) else alive).append(sorted(g))
    alive.sort()
    verts = sorted(p for g in alive for p in g)
    vset = set(verts)
    kept = sorted((u, v) for u, v in edges if u in vset and v in vset)
    dead_pts = sorted(p for g in dead for p in g if p not in deleted)
    return ComponentGraph(N, verts, kept, alive, dead_pts)


def component_states(graph: ComponentGraph) -> np.ndarray:
    """Uniform superposition over each component, as columns over the N^2 grid."""
    N = graph.N
    out = np.zeros((N * N, len(graph.components)))
    for k, comp in enumerate(graph.components):
        for i, j in comp:
            out[(i - 1) * N + (j - 1), k] = 1.0
        out[:, k] /= np.sqrt(len(comp))
    return out
