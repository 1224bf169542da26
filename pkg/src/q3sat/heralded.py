"""Exact heralded measurement of rank-one projectors and the verifier's protocol.

The single-qubit gate R is applied by repeating the two-qubit unitary A on a
fresh ancilla: outcome 0 (probability 3/4) leaves R|phi>, outcome 1 leaves
|phi> untouched so the step can be retried.  Two such R gates conjugate a
doubly controlled X to give U_Pi = Pi (x) X + (1 - Pi) (x) I.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .circuit import apply_matrix
from .operators import Condition, LocalTerm, classify_projector
from .ring import HALF, SQRT2_R, ring_array, ring_dagger, ring_equal, ring_eye, ring_matmul, ring_to_complex

SQRT3 = math.sqrt(3.0)
R_GATE = np.array([[math.sqrt(2), -1.0], [1.0, math.sqrt(2)]]) / SQRT3
R_DAGGER = R_GATE.T.copy()
PAULI_Z = np.diag([1.0, -1.0])

_h, _r = HALF, SQRT2_R * HALF
A_EXACT = ring_array([
    [_r, -_h, _h, 0],
    [_h, _r, 0, _h],
    [_h, 0, -_r, -_h],
    [0, _h, _h, -_r],
])
A_MATRIX = ring_to_complex(A_EXACT)
# blocks of A acting on |a>|phi> with the ancilla a starting in |0>
_A4 = A_MATRIX.reshape(2, 2, 2, 2)
A_SUCCESS_BLOCK = _A4[0, :, 0, :]  # sqrt3/2 R
A_FAILURE_BLOCK = _A4[1, :, 0, :]  # identity / 2

ROUND_SUCCESS = Fraction(3, 4)

# |gamma'> = (|000> - sqrt2 |001>)/sqrt3 and the 4-qubit control on |001>
GAMMA_PRIME = np.zeros(8)
GAMMA_PRIME[0], GAMMA_PRIME[1] = 1 / SQRT3, -math.sqrt(2) / SQRT3
_CX001 = np.eye(16)
_CX001[[2, 3]] = _CX001[[3, 2]]


def success_probability(m: int) -> Fraction:
    """Probability that one m-step R gate succeeds."""
    if m < 1:
        raise ValueError("m must be at least 1")
    return 1 - Fraction(1, 4**m)


def round_success_exact() -> Fraction:
    """Norm squared of A's top-left block on any normalised input, computed exactly."""
    block = A_EXACT[:2, :2]
    gram = ring_matmul(ring_dagger(block), block)
    # gram is a multiple of the identity; read the multiple off exactly
    c = gram[0, 0]
    assert gram[0, 1].is_zero() and gram[1, 0].is_zero() and gram[1, 1] == c
    a, b, sq, sqi, s = c.parts
    assert b == sq == sqi == 0
    return Fraction(a, 2**s)


def a_is_exact_unitary() -> bool:
    return ring_equal(ring_matmul(A_EXACT, ring_dagger(A_EXACT)), ring_eye(4))


@dataclass
class HeraldedOutcome:
    success: bool
    rounds: int
    state: np.ndarray
    transcript: list[int] = field(default_factory=list)


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _heralded_r(state, qubit, width, m, rng, transcript):
    """Apply R to ``qubit`` by repeated A rounds; returns (success, rounds, state)."""
    for k in range(1, m + 1):
        ok = apply_matrix(state, A_SUCCESS_BLOCK, [qubit], width)
        bad = apply_matrix(state, A_FAILURE_BLOCK, [qubit], width)
        p0 = float(np.vdot(ok, ok).real)
        u = 1.0 - rng.random()
        if u <= p0:
            transcript.append(0)
            return True, k, ok / math.sqrt(p0)
        transcript.append(1)
        state = bad / np.linalg.norm(bad)
    return False, m, state


def simulate_r(phi, m: int, rng_seed=0, qubit: int = 0, width: int | None = None) -> HeraldedOutcome:
    """Heralded R on one qubit of a statevector (a single qubit by default)."""
    if m < 1:
        raise ValueError("m must be at least 1")
    phi = np.asarray(phi, dtype=complex).reshape(-1)
    width = int(round(math.log2(phi.size))) if width is None else width
    if phi.size != 2**width:
        raise ValueError("state size does not match width")
    if abs(np.linalg.norm(phi) - 1) > 1e-10:
        raise ValueError("state must be normalized")
    transcript: list[int] = []
    ok, rounds, out = _heralded_r(phi, qubit, width, m, _rng(rng_seed), transcript)
    return HeraldedOutcome(ok, rounds, out, transcript)


def _as_unitary(U) -> np.ndarray:
    U = np.asarray(U)
    if U.shape != (8, 8):
        raise ValueError("U must be a 3-qubit unitary")
    if U.dtype == object:
        if not ring_equal(ring_matmul(U, ring_dagger(U)), ring_eye(8)):
            raise ValueError("U is not unitary")
        return ring_to_complex(U)
    U = U.astype(complex)
    if np.abs(U @ U.conj().T - np.eye(8)).max() > 1e-12:
        raise ValueError("U is not unitary")
    return U


def projector_from_unitary(U) -> np.ndarray:
    v = _as_unitary(U) @ GAMMA_PRIME
    return np.outer(v, v.conj())


def u_pi_matrix(U) -> np.ndarray:
    """Direct 16 x 16 form of Pi (x) X + (1 - Pi) (x) I."""
    pi = projector_from_unitary(U)
    x = np.array([[0.0, 1.0], [1.0, 0.0]])
    return np.kron(pi, x) + np.kron(np.eye(8) - pi, np.eye(2))


def u_pi_apply(U, state, m: int, rng_seed=0) -> HeraldedOutcome:
    """Run the U_Pi circuit with both R gates applied by the heralded procedure.

    Order: U^dagger on qubits 1-3, R^dagger = Z R Z on qubit 3, X on qubit 4
    controlled by |001>, R on qubit 3, then U.
    """
    Uc = _as_unitary(U)
    psi = np.asarray(state, dtype=complex).reshape(-1)
    if psi.size != 16:
        raise ValueError("state must live on 4 qubits")
    if abs(np.linalg.norm(psi) - 1) > 1e-10:
        raise ValueError("state must be normalized")
    if m < 1:
        raise ValueError("m must be at least 1")
    rng = _rng(rng_seed)
    transcript: list[int] = []
    psi = apply_matrix(psi, Uc.conj().T, [0, 1, 2], 4)
    psi = apply_matrix(psi, PAULI_Z, [2], 4)
    ok, r1, psi = _heralded_r(psi, 2, 4, m, rng, transcript)
    if not ok:
        return HeraldedOutcome(False, r1, psi, transcript)
    psi = apply_matrix(psi, PAULI_Z, [2], 4)
    psi = _CX001 @ psi
    ok, r2, psi = _heralded_r(psi, 2, 4, m, rng, transcript)
    if not ok:
        return HeraldedOutcome(False, r1 + r2, psi, transcript)
    psi = apply_matrix(psi, Uc, [0, 1, 2], 4)
    return HeraldedOutcome(True, r1 + r2, psi, transcript)


# the verifier's randomised protocol

def selection_probabilities(r: int) -> list[Fraction]:
    """Pr[j] when j = floor(o r / 2^r) for a uniform r-bit outcome o."""
    if r < 1:
        raise ValueError("need at least one projector")
    total = 2**r
    bounds = [-(-(j * total) // r) for j in range(r + 1)]  # ceil(j 2^r / r)
    return [Fraction(bounds[j + 1] - bounds[j], total) for j in range(r)]


def select_index(rng: np.random.Generator, r: int) -> int:
    nbytes = (r + 7) // 8
    o = int.from_bytes(rng.bytes(nbytes), "big") >> (8 * nbytes - r)
    return (o * r) >> r


def wilson_interval(k: int, n: int, z: float = 1.96) -> tuple[float, float]:
    if n < 1:
        raise ValueError("need at least one trial")
    p = k / n
    den = 1 + z * z / n
    mid = (p + z * z / (2 * n)) / den
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den
    return max(0.0, mid - half), min(1.0, mid + half)


@dataclass
class ProtocolStats:
    trials: int
    accepted: int
    selected: list[int]
    outcome_one: list[int]
    herald_failures: list[int]
    analytic_acceptance: float
    m: int

    @property
    def acceptance(self) -> float:
        return self.accepted / self.trials

    @property
    def interval(self) -> tuple[float, float]:
        return wilson_interval(self.accepted, self.trials)

    @property
    def sigma(self) -> float:
        p = self.analytic_acceptance
        return math.sqrt(max(p * (1 - p), 0.0) / self.trials)

    def summary(self) -> dict:
        lo, hi = self.interval
        return {
            "trials": self.trials,
            "accepted": self.accepted,
            "acceptance": self.acceptance,
            "interval": [lo, hi],
            "analytic_acceptance": self.analytic_acceptance,
            "m": self.m,
            "selected": self.selected,
            "outcome_one": self.outcome_one,
            "herald_failures": self.herald_failures,
        }


ZERO_EXPECTATION = 1e-12


def term_expectation(t: LocalTerm, witness: np.ndarray, width: int) -> float:
    """<W|Pi|W>, with floating round-off at or below 1e-12 snapped to exactly 0."""
    v = apply_matrix(witness, t.matrix, list(t.support), width)
    p = float(np.vdot(witness, v).real)
    return 0.0 if p <= ZERO_EXPECTATION else min(p, 1.0)


def run_protocol(instance, witness, trials: int, m: int | None = None, seed=0) -> ProtocolStats:
    """Simulate the verifier on ``trials`` fresh copies of the witness.

    Condition-1 terms are measured exactly.  Condition-2 terms go through the
    heralded U_Pi circuit with m steps per R gate (m = r by default); a
    herald failure counts as acceptance.
    """
    terms = list(instance)
    if trials < 1:
        raise ValueError("trials must be positive")
    r = len(terms)
    witness = np.asarray(witness, dtype=complex).reshape(-1)
    width = int(round(math.log2(witness.size)))
    if witness.size != 2**width or any(max(t.support) >= width for t in terms):
        raise ValueError("witness width does not match the instance")
    if abs(np.linalg.norm(witness) - 1) > 1e-10:
        raise ValueError("witness must be normalized")
    m = r if m is None else m
    herald = float(success_probability(m) ** 2)
    conds = [classify_projector(t) for t in terms]
    if any(c is Condition.NOT_VERIFIABLE for c in conds):
        raise ValueError("every term must satisfy condition 1 or condition 2")
    probs = [term_expectation(t, witness, width) for t in terms]
    rng = _rng(seed)
    selected = [0] * r
    ones = [0] * r
    fails = [0] * r
    accepted = 0
    for _ in range(trials):
        j = select_index(rng, r)
        selected[j] += 1
        if conds[j] is Condition.CONDITION2 and 1.0 - rng.random() > herald:
            fails[j] += 1
            accepted += 1
            continue
        # outcome 1 only when u <= p, so p = 0 never rejects
        if 1.0 - rng.random() <= probs[j]:
            ones[j] += 1
        else:
            accepted += 1
    pj = selection_probabilities(r)
    reject = sum(float(pj[j]) * probs[j] * (herald if conds[j] is Condition.CONDITION2 else 1.0) for j in range(r))
    return ProtocolStats(trials, accepted, selected, ones, fails, 1.0 - reject, m)
