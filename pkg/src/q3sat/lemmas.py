"""Numeric checks of the spectral-gap lemmas at sizes a desktop can handle."""

from __future__ import annotations

import numpy as np
from scipy.optimize import minimize_scalar

from . import clock
from .circuit import CanonicalCircuit
from .gates import complex_gate
from .grid import RestrictedOperator, s_terms
from .operators import allowed_support, assemble
from .reduction import build_hx, clock_steps
from .spectral import frustration_free_nullspace, kitaev_bound, laplacian_bound_check, spectrum

KET10 = np.array([[0, 0], [1, 0]])  # |1><0|
KET01 = KET10.T
I2 = np.eye(2)
P0 = np.diag([1.0, 0.0])
P1 = np.diag([0.0, 1.0])


def _kron(*ms):
    out = np.eye(1)
    for m in ms:
        out = np.kron(out, m)
    return out


def _hop(U, slot: int, k: int = 3):
    """(1/2)(I - U^dag (x) |1><0| - U (x) |0><1|) with the hop on factor ``slot``."""
    U = np.asarray(U, dtype=complex)

    def place(m):
        facs = [I2] * (k - 2)
        facs.insert(slot - 1, m)
        return _kron(U.conj().T if m is KET10 else U, *facs)

    return 0.5 * (np.eye(2**k) - place(KET10) - place(KET01))


def two_transition_operator() -> np.ndarray:
    """Two transitions sharing one computational qubit, carrying H and T.

    Factors: computational qubit, first transition's two clock states,
    second transition's two clock states.
    """
    return _hop(complex_gate("h"), 1) + _hop(complex_gate("t"), 2)


def case_operators() -> dict:
    B = complex_gate("b")
    hb = _hop(B, 1, k=2)
    return {
        "case1": _kron(P1, I2) + hb,
        "case2": _kron(P0, I2) + hb,
        "case3": _hop(B, 1) + _hop(complex_gate("z"), 2),
    }


def soundness_scalar() -> tuple[float, float]:
    """Minimum over f in [0,1] of 1 - f/3 - 2 sqrt(f(1-f)/3), and the minimiser."""
    res = minimize_scalar(lambda f: 1 - f / 3 - 2 * np.sqrt(f * (1 - f) / 3), bounds=(0, 1),
                          method="bounded", options={"xatol": 1e-12})
    return float(res.fun), float(res.x)


def triplet_gap(N: int = 2) -> dict:
    terms = clock.triplet_terms(N)
    n = 3 * (2 * N - 1)
    rep = spectrum(assemble(terms, n), k=2 * N + 2, force="iterative" if n > 11 else None, vectors=False)
    return {"N": N, "nullity": rep.nullity, "gamma": rep.gap, "bound": 1 / 48}


def clock_gap(N: int = 2) -> dict:
    n = clock.clock_width(N)
    rep = spectrum(assemble(clock.clock_terms(N), n), k=N + 2, force="iterative")
    return {"N": N, "nullity": rep.nullity, "gamma": rep.gap, "bound": 1 / 2048}


def triplet_decomposition_bound(N: int = 2) -> dict:
    """Squared-ratio bound for H_triplet split as (H1 + H2) + H3."""
    terms = clock.triplet_terms(N)
    n = 3 * (2 * N - 1)
    h_a = assemble([t for t in terms if not t.tag.startswith("H3")], n)
    h_b = assemble([t for t in terms if t.tag.startswith("H3")], n)
    res = kitaev_bound(h_a, h_b, "squared_ratio")
    return {"bound": res.bound, "gamma": res.gamma_actual, "holds": res.holds, **res.details}


def diag_operator(M: int) -> RestrictedOperator:
    terms = []
    for j in range(M):
        terms += s_terms(9 * j + 1, "diag") + s_terms(9 * j + 4, "diag")
    terms += s_terms(9 * M + 1, "diag")
    return RestrictedOperator(0, clock_steps(M), terms)


def _restricted_gap(op: RestrictedOperator, dense: bool = False) -> float:
    h = op.matrix
    # sum H_U alone has a nullspace too large for shift-invert
    force = "dense" if dense else ("iterative" if h.shape[0] > 1500 else None)
    rep = spectrum(h, k=8, force=force, vectors=False)
    return rep.gap


LEMMA_CIRCUIT = CanonicalCircuit(1, 1, (("h", 0), ("t", 0)), ((0, 1), (1, 0)))


def restricted_gaps(Ms=(1, 2)) -> dict:
    """Restricted-basis gaps of H_diag, H_diag + sum H_V and the whole H_A."""
    out = {}
    for M in Ms:
        inst = build_hx(LEMMA_CIRCUIT.padded(max(M, LEMMA_CIRCUIT.M)) if M >= 2 else
                        CanonicalCircuit(1, 1, LEMMA_CIRCUIT.singles[:1], LEMMA_CIRCUIT.pairs[:1]))
        out[M] = {
            "diag": _restricted_gap(diag_operator(M)),
            "diag_v": _restricted_gap(inst.restricted(("diag", "V"))),
            "u": _restricted_gap(inst.restricted(("U",)), dense=True),
            "a": _restricted_gap(inst.restricted(("diag", "U", "V"))),
        }
    return out


def clock_nullity(N: int) -> int:
    terms = clock.clock_terms(N)
    n = clock.clock_width(N)
    _, rep = frustration_free_nullspace(assemble(terms, n), allowed_support(terms, n), k=N + 2)
    return rep.nullity


def verify_gap_lemmas(N_max: int = 2, Ms=(1, 2)) -> dict:
    """Compute each lemma's quantity and whether it meets the stated bound."""
    if N_max > 3:
        raise ValueError("full-space checks need N_max <= 3")
    report: dict = {}
    tg = triplet_gap(2)
    report["triplet_gap"] = {**tg, "holds": tg["gamma"] >= tg["bound"]}
    report["triplet_decomposition"] = triplet_decomposition_bound(2)
    cg = clock_gap(2)
    report["clock_gap"] = {**cg, "holds": cg["gamma"] >= cg["bound"]}
    report["clock_nullity"] = {str(N): clock_nullity(N) for N in range(2, N_max + 1)}
    e8 = float(np.linalg.eigvalsh(two_transition_operator())[0])
    report["two_transition_min"] = {"value": e8, "holds": abs(e8 - 0.00937) <= 1e-4}
    cases = {k: float(np.linalg.eigvalsh(v)[0]) for k, v in case_operators().items()}
    report["case_min"] = {**cases, "holds": all(abs(v - 0.076) <= 1e-3 for v in cases.values())}
    s, f = soundness_scalar()
    report["soundness_scalar"] = {"value": s, "argmin": f, "holds": s >= 0.2 and abs(s - 0.23) <= 0.01}
    gaps = restricted_gaps(Ms)
    diag = [gaps[M]["diag"] for M in Ms]
    report["restricted"] = {str(M): gaps[M] for M in Ms}
    report["diag_scaling"] = {
        "holds": all(g > 0 for g in diag) and all(diag[i] * Ms[i] >= diag[0] * Ms[0] / 3 for i in range(len(Ms))),
    }
    lap = [laplacian_bound_check(M) for M in (1, 2, 4)]
    report["laplacian"] = {"holds": all(x["holds"] for x in lap), "checks": lap}
    report["ok"] = all(v.get("holds", True) for v in report.values() if isinstance(v, dict))
    return report
