"""Verification circuits: parsing, simulation and the alternating normal form.

A circuit acts on ``n`` witness qubits followed by ``n_a`` ancillas that
start in |0>.  It accepts when the first ancilla is measured as 1.  Wires
are 0-based in code and 1-based in the text format.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gates import complex_gate

SINGLE_KINDS = ("h", "t", "id")
PAIR_KINDS = ("cnot", "v")
KIND_ALIASES = {"i": "id", "identity": "id", "hadamard": "h", "cx": "cnot"}


class CircuitError(ValueError):
    pass


class CircuitSyntaxError(CircuitError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Gate:
    kind: str
    wires: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in SINGLE_KINDS + PAIR_KINDS:
            raise CircuitError(f"unsupported gate kind {self.kind!r}")
        arity = 1 if self.kind in SINGLE_KINDS else 2
        if len(self.wires) != arity:
            raise CircuitError(f"{self.kind} takes {arity} wire(s), got {len(self.wires)}")
        if len(set(self.wires)) != len(self.wires):
            raise CircuitError(f"{self.kind} has duplicate wires {self.wires}")

    def matrix(self) -> np.ndarray:
        return complex_gate(self.kind)


def apply_matrix(state: np.ndarray, mat: np.ndarray, wires, width: int) -> np.ndarray:
    """Apply a k-qubit matrix to ``wires`` of a flat statevector on ``width`` qubits."""
    wires = list(wires)
    k = len(wires)
    psi = state.reshape((2,) * width)
    op = mat.reshape((2,) * (2 * k))
    psi = np.tensordot(op, psi, axes=(list(range(k, 2 * k)), wires))
    psi = np.moveaxis(psi, list(range(k)), wires)
    return psi.reshape(-1)


def _acceptance_operator(unitary: np.ndarray, n: int, n_a: int) -> np.ndarray:
    width = n + n_a
    dim_w = 2**n
    # columns of U restricted to inputs |w>|0...0>
    cols = unitary[:, [w << n_a for w in range(dim_w)]]
    out_bit = width - n - 1  # bit position of the first ancilla
    accept = (np.arange(2**width) >> out_bit) & 1
    sub = cols[accept == 1]
    return sub.conj().T @ sub


@dataclass(frozen=True)
class Circuit:
    n: int
    n_a: int
    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.n < 1 or self.n_a < 1:
            raise CircuitError("need at least one witness qubit and one ancilla")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if max(g.wires) >= self.width or min(g.wires) < 0:
                raise CircuitError(f"wire out of range in {g}")

    @property
    def width(self) -> int:
        return self.n + self.n_a

    @property
    def output_qubit(self) -> int:
        return self.n

    def apply(self, state: np.ndarray) -> np.ndarray:
        psi = np.asarray(state, dtype=complex)
        for g in self.gates:
            psi = apply_matrix(psi, g.matrix(), g.wires, self.width)
        return psi

    def unitary(self) -> np.ndarray:
        dim = 2**self.width
        return np.column_stack([self.apply(np.eye(dim, dtype=complex)[:, k]) for k in range(dim)])

    def acceptance_probability(self, witness: np.ndarray) -> float:
        w = np.asarray(witness, dtype=complex).reshape(-1)
        if w.size != 2**self.n:
            raise CircuitError(f"witness must have dimension {2**self.n}")
        if abs(np.linalg.norm(w) - 1.0) > 1e-10:
            raise CircuitError("witness must be normalized")
        anc = np.zeros(2**self.n_a)
        anc[0] = 1.0
        out = self.apply(np.kron(w, anc)).reshape((2,) * self.width)
        return float(np.sum(np.abs(np.take(out, 1, axis=self.output_qubit)) ** 2))

    def acceptance_operator(self) -> np.ndarray:
        return _acceptance_operator(self.unitary(), self.n, self.n_a)

    def max_acceptance(self) -> float:
        """Largest acceptance probability over all witnesses."""
        return float(np.linalg.eigvalsh(self.acceptance_operator())[-1])


def parse_circuit(text: str) -> Circuit:
    n = n_a = None
    gates = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        head = tok[0].lower()
        if head == "qubits":
            if n is not None:
                raise CircuitSyntaxError(lineno, "repeated qubits header")
            if len(tok) != 3:
                raise CircuitSyntaxError(lineno, "expected 'qubits <n> <n_a>'")
            try:
                n, n_a = int(tok[1]), int(tok[2])
            except ValueError:
                raise CircuitSyntaxError(lineno, "qubit counts must be integers") from None
            if n < 1 or n_a < 1:
                raise CircuitSyntaxError(lineno, "need n >= 1 and n_a >= 1")
            continue
        kind = KIND_ALIASES.get(head, head)
        if kind not in SINGLE_KINDS + PAIR_KINDS:
            raise CircuitSyntaxError(lineno, f"unknown gate {tok[0]!r}")
        try:
            wires = tuple(int(t) - 1 for t in tok[1:])
        except ValueError:
            raise CircuitSyntaxError(lineno, "wires must be integers") from None
        arity = 1 if kind in SINGLE_KINDS else 2
        if len(wires) != arity:
            raise CircuitSyntaxError(lineno, f"{kind} takes {arity} wire(s)")
        if len(set(wires)) != arity:
            raise CircuitSyntaxError(lineno, "duplicate wires")
        if n is None:
            raise CircuitSyntaxError(lineno, "gate before 'qubits' header")
        if min(wires) < 0 or max(wires) >= n + n_a:
            raise CircuitSyntaxError(lineno, f"wire out of range 1..{n + n_a}")
        gates.append(Gate(kind, wires))
    if n is None:
        raise CircuitSyntaxError(0, "missing 'qubits' header")
    return Circuit(n, n_a, tuple(gates))


def load_circuit(path) -> Circuit:
    with open(path) as fh:
        return parse_circuit(fh.read())


def format_circuit(c: Circuit) -> str:
    lines = [f"qubits {c.n} {c.n_a}"]
    lines += [" ".join([g.kind] + [str(w + 1) for w in g.wires]) for g in c.gates]
    return "\n".join(lines) + "\n"


# alternating normal form: U^0, V, U^1, V, ..., U^{M-1}, V

# CNOT(c, t) = (T^2 on c, T^6 H T^2 on t) . V(c, t); listed in time order
_CNOT_SINGLES = [("t", 0), ("t", 0), ("t", 1), ("t", 1), ("h", 1)] + [("t", 1)] * 6


@dataclass(frozen=True)
class CanonicalCircuit:
    n: int
    n_a: int
    singles: tuple[tuple[str, int], ...]
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "singles", tuple((str(k), int(w)) for k, w in self.singles))
        object.__setattr__(self, "pairs", tuple((int(a), int(b)) for a, b in self.pairs))
        if len(self.singles) != len(self.pairs) or not self.pairs:
            raise CircuitError("need M >= 1 single/pair layers of equal count")
        for kind, w in self.singles:
            if kind not in SINGLE_KINDS or not 0 <= w < self.width:
                raise CircuitError(f"bad single-qubit layer {(kind, w)}")
        for a, b in self.pairs:
            if a == b or not (0 <= a < self.width and 0 <= b < self.width):
                raise CircuitError(f"bad V layer {(a, b)}")

    @property
    def width(self) -> int:
        return self.n + self.n_a

    @property
    def M(self) -> int:
        return len(self.pairs)

    def to_circuit(self) -> Circuit:
        gates = []
        for (kind, w), (a, b) in zip(self.singles, self.pairs):
            gates.append(Gate(kind, (w,)))
            gates.append(Gate("v", (a, b)))
        return Circuit(self.n, self.n_a, tuple(gates))

    def unitary(self) -> np.ndarray:
        return self.to_circuit().unitary()

    def max_acceptance(self) -> float:
        return self.to_circuit().max_acceptance()

    def padded(self, M: int, pad: tuple[int, int] | None = None) -> CanonicalCircuit:
        """Append identity layers so the circuit has M layers.

        Appending one layer applies an extra V, so the result is only
        equivalent to the original when the pad pair is never touched by the
        witness-dependent output; callers use it for families of instances.
        """
        if M < self.M:
            raise CircuitError("cannot shorten a circuit")
        pad = pad or self.pairs[-1]
        extra = M - self.M
        return CanonicalCircuit(self.n, self.n_a, self.singles + (("id", pad[0]),) * extra, self.pairs + (tuple(pad),) * extra)


def expand_elementary(c: Circuit) -> list[tuple[str, tuple[int, ...]]]:
    """Rewrite CNOTs through V so only {H, T, id, V} remain, in time order."""
    out = []
    for g in c.gates:
        if g.kind == "cnot":
            ctl, tgt = g.wires
            out.append(("v", (ctl, tgt)))
            out += [(k, ((ctl, tgt)[w],)) for k, w in _CNOT_SINGLES]
        else:
            out.append((g.kind, g.wires))
    return out


def canonical_bound(c: Circuit) -> int:
    """Upper bound on M produced by canonicalize for this circuit."""
    cost = {"h": 2, "t": 2, "id": 2, "v": 1, "cnot": 1 + 2 * len(_CNOT_SINGLES)}
    return max(2, sum(cost[g.kind] for g in c.gates))


def canonicalize(c: Circuit, pad: tuple[int, int] = (0, 1)) -> CanonicalCircuit:
    """Bring a circuit into alternating single / V form.

    Consecutive single-qubit gates are separated by the pair V(pad) . id . V(pad),
    which multiplies to the identity since V^2 = 1.  The schedule is greedy left
    to right, so the result is deterministic.
    """
    if pad[0] == pad[1] or max(pad) >= c.width:
        raise CircuitError(f"invalid pad pair {pad}")
    singles: list[tuple[str, int]] = []
    pairs: list[tuple[int, int]] = []
    pending: tuple[str, int] | None = None

    def emit(single, pair):
        singles.append(single)
        pairs.append(pair)

    for kind, wires in expand_elementary(c):
        if kind == "v":
            emit(pending or ("id", wires[0]), tuple(wires))
            pending = None
        elif pending is None:
            pending = (kind, wires[0])
        else:
            emit(pending, pad)
            emit(("id", pad[0]), pad)
            pending = (kind, wires[0])
    if pending is not None or not pairs:
        emit(pending or ("id", pad[0]), pad)
        emit(("id", pad[0]), pad)
    return CanonicalCircuit(c.n, c.n_a, tuple(singles), tuple(pairs))
