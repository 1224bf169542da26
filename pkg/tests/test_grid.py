from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from q3sat import clock, grid, spectral
from q3sat.grid import GateOn, GridTerm, RestrictedOperator

GOLDEN = Path(__file__).parent / "golden"


def _two_register(term: GridTerm, N: int) -> np.ndarray:
    # independent route for clock-only terms: product of per-register compressions
    mats = []
    for op in (term.first, term.second):
        if op.kind == "I":
            mats.append(np.eye(N))
        else:
            support, local = grid.clock_term_local(op, N)
            mats.append(clock.compress(N, local, support))
    return np.kron(mats[0], mats[1])


@pytest.mark.parametrize("N", [3, 4])
def test_restricted_matches_compression(N):
    terms = grid.s_terms(1)
    if N >= 4:
        terms += [GridTerm(grid.h(2), grid.geq(3)), GridTerm(grid.leq(2), grid.h(3))]
    op = RestrictedOperator(0, N, terms)
    want = sum(_two_register(t, N) for t in terms)
    assert np.allclose(op.matrix.toarray(), want, atol=1e-12)


def test_gadget_operators_psd():
    for op in (grid.build_warmup(), grid.build_h1q(), grid.build_h2q()):
        h = op.matrix.toarray()
        assert np.allclose(h, h.conj().T)
        assert np.linalg.eigvalsh(h)[0] > -1e-12


@pytest.mark.parametrize("name, build", [
    ("warmup", grid.build_warmup),
    ("h1q_clock", lambda: grid.build_h1q(clock_only=True)),
    ("h2q_clock", lambda: grid.build_h2q(clock_only=True)),
])
def test_golden_graphs(name, build):
    g = grid.component_analysis(build())
    gold = grid.parse_adjacency((GOLDEN / f"{name}.adj").read_text())
    assert grid.parse_adjacency(g.to_text()) == gold


@pytest.mark.parametrize("build", [
    grid.build_warmup,
    lambda: grid.build_h1q(clock_only=True),
    lambda: grid.build_h2q(clock_only=True),
])
def test_components_span_nullspace(build):
    op = build()
    g = grid.component_analysis(op)
    rep = spectral.spectrum(op.matrix, k=len(g.components) + 4, force="dense")
    assert rep.nullity == len(g.components)
    assert spectral.subspace_sine(rep.null_basis, grid.component_states(g)) < 1e-8


@pytest.mark.parametrize("U", ["h", "t"])
def test_h1q_nullity(U):
    # one history state per computational input
    rep = spectral.spectrum(grid.build_h1q(U).matrix, k=8, force="dense")
    assert rep.nullity == 2


def test_subset_and_add():
    op = grid.build_h2q()
    v = op.subset(["V"])
    s = op.subset([""])  # S terms carry an empty tag
    assert len(v.terms) + len(s.terms) <= len(op.terms)
    with pytest.raises(ValueError):
        op + grid.build_h1q()
    small = RestrictedOperator(2, 9, op.terms, cap=10)
    with pytest.raises(MemoryError):
        small.matrix


def test_component_analysis_rejects_gates():
    with pytest.raises(ValueError):
        grid.component_analysis(grid.build_h1q())


def test_term_locality():
    assert GridTerm(grid.h(3, GateOn(0, "h")), grid.IDENT).locality == 3
    assert GridTerm(grid.h(3), grid.IDENT, control=(1, 0)).locality == 3
    with pytest.raises(ValueError):
        GridTerm(grid.h(3, GateOn(0, "h")), grid.geq(2), control=(1, 0))
    with pytest.raises(ValueError):
        GridTerm(grid.h(3, GateOn(0, "h")), grid.IDENT, control=(0, 1))
