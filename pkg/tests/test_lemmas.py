from __future__ import annotations

import numpy as np
import pytest

from q3sat import lemmas


def test_two_transition_constant():
    # quoted value 0.00937
    e = float(np.linalg.eigvalsh(lemmas.two_transition_operator())[0])
    assert e == pytest.approx(0.00937, abs=1e-4)


def test_case_constants():
    for m in lemmas.case_operators().values():
        assert float(np.linalg.eigvalsh(m)[0]) == pytest.approx(0.076, abs=1e-3)


def test_soundness_scalar():
    # bounded optimiser against a fine grid
    s, f = lemmas.soundness_scalar()
    grid = np.linspace(0, 1, 200001)
    vals = 1 - grid / 3 - 2 * np.sqrt(grid * (1 - grid) / 3)
    assert s == pytest.approx(vals.min(), abs=1e-9)
    assert s >= 0.2


def test_triplet_and_clock_gaps():
    tg = lemmas.triplet_gap(2)
    assert tg["nullity"] == 4 and tg["gamma"] >= 1 / 48
    cg = lemmas.clock_gap(2)
    assert cg["nullity"] == 2 and cg["gamma"] >= 1 / 2048


def test_decomposition_bound():
    d = lemmas.triplet_decomposition_bound(2)
    assert d["holds"] and d["bound"] <= d["gamma"]


def test_restricted_gaps_positive():
    g = lemmas.restricted_gaps((1,))[1]
    # frozen; dense and shift-invert solvers agree on these
    assert g["diag"] == pytest.approx(0.0392324, abs=1e-6)
    assert g["u"] == pytest.approx(0.25, abs=1e-12)
    assert g["diag_v"] > 0 and g["a"] > 0


def test_verify_rejects_large_N():
    with pytest.raises(ValueError):
        lemmas.verify_gap_lemmas(N_max=4)
