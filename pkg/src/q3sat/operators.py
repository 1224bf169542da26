"""Local projector terms, their exact classification, and sparse assembly.

A term's matrix is ``numerator / denominator`` with an exact ring numerator.
The denominator is 1 for terms with dyadic entries and 3 for the rank-one
projectors built from (|a> - sqrt2 |b>)/sqrt3 style vectors, which need a
unitary witness to be recognised as admissible.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
import scipy.io
import scipy.sparse as sp

from .gates import HADAMARD, IDENTITY
from .ring import (
    ONE,
    RingScalar,
    SQRT2_R,
    condition1_check,
    ring_array,
    ring_dagger,
    ring_eye,
    ring_kron,
    ring_matmul,
    ring_scale,
    ring_to_complex,
    ring_zeros,
    ring_equal,
)

# 3 |gamma'><gamma'| with gamma' = (|000> - sqrt2 |001>)/sqrt3
_GAMMA_PRIME_NUM = ring_zeros((8, 8))
_GAMMA_PRIME_NUM[0, 0] = ONE
_GAMMA_PRIME_NUM[0, 1] = -SQRT2_R
_GAMMA_PRIME_NUM[1, 0] = -SQRT2_R
_GAMMA_PRIME_NUM[1, 1] = RingScalar(2)


class Condition(enum.Enum):
    CONDITION1 = "condition1"
    CONDITION2 = "condition2"
    NOT_VERIFIABLE = "not_verifiable"


class NotAProjector(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class LocalTerm:
    support: tuple[int, ...]
    numerator: np.ndarray
    denominator: int = 1
    tag: str = ""
    witness: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "support", tuple(int(q) for q in self.support))
        k = len(self.support)
        if k == 0 or k > 3 or len(set(self.support)) != k:
            raise ValueError(f"support must be 1..3 distinct qubits, got {self.support}")
        if self.numerator.shape != (2**k, 2**k):
            raise ValueError("matrix shape does not match support")

    @property
    def locality(self) -> int:
        return len(self.support)

    @property
    def matrix(self) -> np.ndarray:
        return ring_to_complex(self.numerator) / self.denominator

    def shifted(self, offset: int, tag: str | None = None) -> LocalTerm:
        return LocalTerm(tuple(q + offset for q in self.support), self.numerator, self.denominator,
                         self.tag if tag is None else tag, self.witness)

    def key(self) -> tuple:
        return (self.support, self.denominator, tuple(x.parts for x in self.numerator.ravel()))


def is_exact_projector(t: LocalTerm) -> bool:
    num = t.numerator
    herm = ring_equal(ring_dagger(num), num)
    idem = ring_equal(ring_matmul(num, num), ring_scale(num, t.denominator))
    return herm and idem


def check_witness(t: LocalTerm, witness: np.ndarray) -> bool:
    """Exact test that witness . t . witness^dagger = |gamma'><gamma'| (x) identity."""
    k = t.locality
    if k != 3 or witness.shape != (8, 8):
        return False
    if not ring_equal(ring_matmul(witness, ring_dagger(witness)), ring_eye(8)):
        return False
    lhs = ring_scale(ring_matmul(witness, t.numerator, ring_dagger(witness)), 3)
    rhs = ring_scale(_GAMMA_PRIME_NUM, t.denominator)
    return ring_equal(lhs, rhs)


_CLASS_CACHE: dict = {}


def _matrix_key(m: np.ndarray | None):
    return None if m is None else (m.shape, tuple(RingScalar.coerce(x).parts for x in m.ravel()))


def classify_projector(t: LocalTerm, witness: np.ndarray | None = None) -> Condition:
    """Exact classification; depends only on the matrices, so results are memoised."""
    w = witness if witness is not None else t.witness
    key = (t.denominator, _matrix_key(t.numerator), _matrix_key(w))
    hit = _CLASS_CACHE.get(key)
    if hit is None:
        if not is_exact_projector(t):
            hit = NotAProjector
        elif t.denominator == 1 and condition1_check(t.numerator):
            hit = Condition.CONDITION1
        elif w is not None and check_witness(t, w):
            hit = Condition.CONDITION2
        else:
            hit = Condition.NOT_VERIFIABLE
        _CLASS_CACHE[key] = hit
    if hit is NotAProjector:
        raise NotAProjector(f"term {t.tag or t.support} is not a projector")
    return hit


def two_point_witness(vec: np.ndarray, hadamard_last: bool = False) -> np.ndarray:
    """Signed permutation (after an optional H on the last qubit) sending vec to gamma'.

    ``vec`` is sqrt3 times the 3-qubit target state after the Hadamard and must
    have one entry of modulus 1 and one of modulus sqrt2, both real.
    """
    nz = [(k, v) for k, v in enumerate(vec) if not RingScalar.coerce(v).is_zero()]
    if len(nz) != 2:
        raise ValueError("need exactly two nonzero amplitudes")
    unit = [(k, v) for k, v in nz if v in (ONE, -ONE)]
    root = [(k, v) for k, v in nz if v in (SQRT2_R, -SQRT2_R)]
    if len(unit) != 1 or len(root) != 1:
        raise ValueError("amplitudes must be +-1 and +-sqrt2")
    (p, vp), (q, vq) = unit[0], root[0]
    sign_p = 1 if vp == ONE else -1
    sign_q = -1 if vq == SQRT2_R else 1
    rest_src = [k for k in range(8) if k not in (p, q)]
    rest_dst = list(range(2, 8))
    perm = ring_zeros((8, 8))
    perm[0, p] = RingScalar(sign_p)
    perm[1, q] = RingScalar(sign_q)
    for s, d in zip(rest_src, rest_dst):
        perm[d, s] = ONE
    if hadamard_last:
        perm = ring_matmul(perm, ring_kron(IDENTITY, IDENTITY, HADAMARD))
    return perm


def rank_one(vec: np.ndarray) -> np.ndarray:
    v = ring_array(vec).reshape(-1, 1)
    return ring_matmul(v, ring_dagger(v))


def diagonal_projector(k: int, states) -> np.ndarray:
    m = ring_zeros((2**k, 2**k))
    for s in states:
        idx = int(s, 2) if isinstance(s, str) else int(s)
        m[idx, idx] = ONE
    return m


# sparse embedding

def _scatter(values: np.ndarray, positions: list[int], n: int) -> np.ndarray:
    """Place the bits of ``values`` (k-bit integers) at big-endian qubit positions."""
    out = np.zeros_like(values)
    k = len(positions)
    for j, q in enumerate(positions):
        bit = (values >> (k - 1 - j)) & 1
        out |= bit << (n - 1 - q)
    return out


def embed_matrix(local: np.ndarray, support, n: int) -> sp.csr_matrix:
    support = list(support)
    k = len(support)
    rest = [q for q in range(n) if q not in support]
    base = _scatter(np.arange(2 ** (n - k), dtype=np.int64), rest, n)
    local = np.asarray(local, dtype=complex)
    rows, cols = np.nonzero(np.abs(local) > 0)
    if rows.size == 0:
        return sp.csr_matrix((2**n, 2**n), dtype=complex)
    r_off = _scatter(rows.astype(np.int64), support, n)
    c_off = _scatter(cols.astype(np.int64), support, n)
    R = (base[None, :] | r_off[:, None]).ravel()
    C = (base[None, :] | c_off[:, None]).ravel()
    V = np.repeat(local[rows, cols], base.size)
    return sp.csr_matrix((V, (R, C)), shape=(2**n, 2**n))


def embed(t: LocalTerm, n: int) -> sp.csr_matrix:
    if max(t.support) >= n:
        raise ValueError(f"support {t.support} exceeds {n} qubits")
    return embed_matrix(t.matrix, t.support, n)


def assemble(terms, n: int) -> sp.csr_matrix:
    if n > 26:
        raise ValueError(f"{n} qubits is beyond full-space assembly")
    rows, cols, vals = [], [], []
    for t in terms:
        m = embed(t, n).tocoo()
        rows.append(m.row)
        cols.append(m.col)
        vals.append(m.data)
    if not rows:
        return sp.csr_matrix((2**n, 2**n), dtype=complex)
    out = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(2**n, 2**n))
    out.sum_duplicates()
    out.data[np.abs(out.data) < 1e-15] = 0
    out.eliminate_zeros()
    return out


def hermitian_defect(h) -> float:
    d = h - h.conj().T
    if sp.issparse(d):
        return float(abs(d).max()) if d.nnz else 0.0
    return float(np.abs(d).max()) if d.size else 0.0


def allowed_support(terms, n: int) -> np.ndarray:
    """Basis states not penalised by any diagonal term.

    For a sum of projectors every zero-energy state is annihilated by each
    term, so it lives on these basis states.
    """
    alive = np.ones(2**n, dtype=bool)
    for t in terms:
        m = t.matrix
        if np.count_nonzero(m - np.diag(np.diag(m))):
            continue
        diag = embed_matrix(np.diag(np.diag(m)), t.support, n).diagonal()
        alive &= np.abs(diag) < 1e-12
    return alive


def term_census(terms) -> dict:
    conds = Counter(classify_projector(t).value for t in terms)
    locality = Counter(t.locality for t in terms)
    mult = Counter(t.key() for t in terms)
    tags = Counter(t.tag.split(":")[0] for t in terms)
    return {
        "terms": len(terms),
        "condition": dict(sorted(conds.items())),
        "locality": {str(k): v for k, v in sorted(locality.items())},
        "max_repetition": max(mult.values(), default=0),
        "distinct": len(mult),
        "families": dict(sorted(tags.items())),
    }


def write_matrix_market(path, m, hermitian: bool = False, comment: str = "") -> None:
    m = sp.coo_matrix(m)
    if hermitian:
        m = sp.tril(m).tocoo()
    scipy.io.mmwrite(str(path), m, comment=comment, field="complex",
                     symmetry="hermitian" if hermitian else "general")


def read_matrix_market(path) -> sp.csr_matrix:
    return sp.csr_matrix(scipy.io.mmread(str(path)))


def format_term(t: LocalTerm) -> dict:
    """Plain-data view of a term; qubits numbered from 1 as in circuit files."""
    out = {
        "tag": t.tag,
        "support": [q + 1 for q in t.support],
        "denominator": t.denominator,
        "numerator": [[str(x) for x in row] for row in t.numerator],
    }
    if t.witness is not None:
        out["witness"] = [[str(x) for x in row] for row in t.witness]
    return out


def parse_term(d: dict) -> LocalTerm:
    num = ring_array([[RingScalar.parse(x) for x in row] for row in d["numerator"]])
    wit = d.get("witness")
    if wit is not None:
        wit = ring_array([[RingScalar.parse(x) for x in row] for row in wit])
    return LocalTerm(tuple(q - 1 for q in d["support"]), num, int(d["denominator"]), d.get("tag", ""), wit)
