from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from q3sat import reduction, spectral
from q3sat.circuit import CanonicalCircuit as CC
from q3sat.circuit import parse_circuit

YES = CC(1, 1, (("h", 0), ("h", 1)), ((0, 1), (0, 1)))
SMALL = CC(2, 1, (("h", 0), ("t", 2)), ((0, 2), (0, 2)))


def test_manifest_and_sizes():
    inst = reduction.build_hx(YES)
    m = inst.manifest()
    assert (m["M"], m["N"]) == (2, 21)
    assert m["qubits"] == 2 + 2 * (7 * 21 - 3)
    assert m["restricted_dimension"] == 4 * 21**2
    assert reduction.clock_steps(3) == 30


def test_local_terms():
    inst = reduction.build_hx(YES)
    terms = inst.local_terms()
    assert len(terms) == 1208
    assert max(t.locality for t in terms) <= 3
    assert max(max(t.support) for t in terms) == inst.n_qubits - 1


def test_plain_circuit_is_canonicalized():
    inst = reduction.build_hx(parse_circuit("qubits 1 1\ncnot 1 2\n"))
    assert inst.M >= 2 and inst.circuit.n == 1


def test_segment_norms():
    rng = np.random.default_rng(3)
    inst = reduction.build_hx(SMALL)
    phi = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    phi /= np.linalg.norm(phi)
    segs = reduction.history_segments(inst, phi)
    assert len(segs) == 1 + 3 * inst.M
    for name, v in segs:
        want = reduction.SEGMENT_NORMS[name.rstrip("0123456789")]
        assert np.vdot(v, v).real == pytest.approx(want, abs=1e-12)
    gram = np.array([[np.vdot(a, b) for _, b in segs] for _, a in segs])
    assert np.allclose(gram, np.diag(np.diag(gram)))


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_history_state_annihilated(seed):
    # the transition and diagonal parts vanish on every history state
    rng = np.random.default_rng(seed)
    inst = reduction.build_hx(SMALL)
    phi = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    phi /= np.linalg.norm(phi)
    hist = reduction.history_state(inst, phi)
    h = inst.restricted(("diag", "U", "V")).matrix
    assert np.linalg.norm(h @ hist) < 1e-12


def test_history_overlaps_tridiagonal_structure():
    rng = np.random.default_rng(1)
    inst = reduction.build_hx(SMALL)
    phi = rng.standard_normal(8)
    phi /= np.linalg.norm(phi)
    ov = reduction.history_overlaps(inst, phi, ("diag", "U", "V"))
    assert np.abs(ov.sum()) < 1e-12
    assert np.allclose(ov, ov.conj().T)


def test_yes_instance_ground_state():
    inst = reduction.build_hx(YES)
    c = YES.to_circuit()
    # accepting witness, found from the acceptance operator
    vals, vecs = np.linalg.eigh(c.acceptance_operator())
    w = vecs[:, -1]
    phi = np.kron(w, [1, 0])
    hist = reduction.history_state(inst, phi)
    assert np.linalg.norm(inst.restricted().matrix @ hist) < 1e-12


def test_no_instance_has_gap():
    inst = reduction.build_hx(CC(1, 1, (("id", 1),), ((1, 0),)))
    rep = spectral.spectrum(inst.restricted().matrix, k=3, vectors=False)
    assert rep.eigenvalues[0] == pytest.approx(3.3847764695e-4, rel=1e-6)


def test_gadget_null_states():
    v = reduction.gadget_null_states()
    assert v.shape == (324, 4)
    assert np.allclose(v.conj().T @ v, np.eye(4))
