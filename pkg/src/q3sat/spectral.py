"""Low-lying spectra, nullspaces, and the projection-lemma bounds.

Dense Hermitian eigensolves are used up to ``DENSE_LIMIT``; larger sparse
operators go through ARPACK in shift-invert mode at a small negative shift,
where H + tau is positive definite and factorises without pivoting trouble.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .operators import hermitian_defect

DENSE_LIMIT = 5000
NULL_RTOL = 1e-9
SEED = 0x3547


class NotHermitian(ValueError):
    pass


class ConvergenceFailure(RuntimeError):
    pass


def op_norm_inf(h) -> float:
    if sp.issparse(h):
        return float(abs(h).sum(axis=1).max()) if h.shape[0] else 0.0
    return float(np.abs(h).sum(axis=1).max()) if h.shape[0] else 0.0


def null_tolerance(h, rtol: float = NULL_RTOL) -> float:
    return rtol * max(1.0, op_norm_inf(h))


@dataclass
class SpectralReport:
    eigenvalues: np.ndarray
    nullity: int
    gap: float | None
    tolerance: float
    solver: str
    residuals: np.ndarray
    null_basis: np.ndarray | None = field(default=None, repr=False)
    vectors: np.ndarray | None = field(default=None, repr=False)
    iterations: int = 0

    def summary(self) -> dict:
        return {
            "solver": self.solver,
            "eigenvalues": [float(x) for x in self.eigenvalues],
            "nullity": self.nullity,
            "gap": None if self.gap is None else float(self.gap),
            "tolerance": self.tolerance,
            "max_residual": float(self.residuals.max()) if self.residuals.size else 0.0,
            "iterations": self.iterations,
        }


def _check_hermitian(h) -> None:
    scale = max(1.0, op_norm_inf(h))
    if hermitian_defect(h) > 1e-12 * scale:
        raise NotHermitian("operator is not Hermitian")


def _residuals(h, vals, vecs) -> np.ndarray:
    if vecs.size == 0:
        return np.zeros(0)
    return np.linalg.norm(h @ vecs - vecs * vals[None, :], axis=0)


def _dense(h, k, tol, vectors=True) -> SpectralReport:
    a = h.toarray() if sp.issparse(h) else np.asarray(h)
    if not vectors:
        vals = np.linalg.eigvalsh(a)
        nullity = int(np.sum(np.abs(vals) <= tol))
        above = vals[vals > tol]
        keep = min(k, len(vals)) if k else len(vals)
        return SpectralReport(vals[:keep], nullity, float(above[0]) if above.size else None, tol,
                              "dense", np.zeros(0))
    vals, vecs = np.linalg.eigh(a)
    nullity = int(np.sum(np.abs(vals) <= tol))
    above = vals[vals > tol]
    gap = float(above[0]) if above.size else None
    keep = min(k, len(vals)) if k else len(vals)
    return SpectralReport(vals[:keep], nullity, gap, tol, "dense", _residuals(a, vals[:keep], vecs[:, :keep]),
                          vecs[:, :nullity], vecs[:, :keep])


def _iterative(h, k, tol, shift=None, maxiter=None) -> SpectralReport:
    h = sp.csc_matrix(h)
    n = h.shape[0]
    norm = max(1.0, op_norm_inf(h))
    shift = 1e-3 * norm if shift is None else shift
    rng = np.random.default_rng(SEED)
    v0 = rng.standard_normal(n) + 1j * rng.standard_normal(n) if np.iscomplexobj(h.data) else rng.standard_normal(n)
    k = max(1, min(k, n - 2))
    while True:
        try:
            vals, vecs = spla.eigsh(h, k=k, sigma=-shift, which="LM", v0=v0, maxiter=maxiter)
        except (spla.ArpackNoConvergence, spla.ArpackError) as exc:
            raise ConvergenceFailure(str(exc)) from exc
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
        nullity = int(np.sum(np.abs(vals) <= tol))
        # ensure at least one eigenvalue above the nullspace was resolved
        if nullity < k or k >= n - 2:
            break
        k = min(2 * k, n - 2)
    res = _residuals(h, vals, vecs)
    if res.size and res.max() > 1e-8 * norm:
        raise ConvergenceFailure(f"residual {res.max():.2e} above tolerance")
    above = vals[vals > tol]
    gap = float(above[0]) if above.size else None
    null = orthonormalize(vecs[:, :nullity])
    return SpectralReport(vals, nullity, gap, tol, "shift-invert", res, null, vecs)


def spectrum(h, k: int = 6, force: str | None = None, rtol: float = NULL_RTOL,
             vectors: bool = True) -> SpectralReport:
    """The k lowest eigenvalues with nullity and gap.

    ``gap`` is the smallest eigenvalue above the nullity tolerance.  In the
    iterative path k is enlarged until at least one such eigenvalue is seen.
    ``vectors=False`` lets the dense path skip eigenvectors.
    """
    n = h.shape[0]
    if h.shape != (n, n):
        raise ValueError("operator must be square")
    _check_hermitian(h)
    tol = null_tolerance(h, rtol)
    use_dense = force == "dense" or (force is None and n <= DENSE_LIMIT)
    if use_dense:
        return _dense(h, k, tol, vectors)
    return _iterative(h, k, tol)


def nullspace(h, **kw) -> np.ndarray:
    rep = spectrum(h, k=kw.pop("k", 8), **kw)
    return rep.null_basis


def gamma(h, **kw) -> float:
    """Smallest nonzero eigenvalue."""
    rep = spectrum(h, **kw)
    if rep.gap is None:
        raise ValueError("no eigenvalue above the nullspace was resolved")
    return rep.gap


def orthonormalize(v: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt, applied twice."""
    q = np.array(v, dtype=complex, copy=True)
    for _ in range(2):
        for j in range(q.shape[1]):
            for i in range(j):
                q[:, j] -= (q[:, i].conj() @ q[:, j]) * q[:, i]
            q[:, j] /= np.linalg.norm(q[:, j])
    return q


def subspace_sine(a: np.ndarray, b: np.ndarray) -> float:
    """Sine of the largest principal angle between two column spans."""
    qa, qb = orthonormalize(a), orthonormalize(b)
    if qa.shape[1] != qb.shape[1]:
        return 1.0
    resid = qb - qa @ (qa.conj().T @ qb)
    return float(np.linalg.norm(resid, 2)) if resid.size else 0.0


def frustration_free_nullspace(h, alive: np.ndarray, k: int = 8, force: str | None = None):
    """Nullspace of a sum of projectors, solved on the unpenalised basis states.

    ``alive`` marks basis states not hit by any diagonal projector; every zero
    energy state lives there, so the compression has the same nullspace.
    """
    idx = np.flatnonzero(alive)
    sub = sp.csr_matrix(h)[idx][:, idx]
    rep = spectrum(sub, k=k, force=force)
    full = np.zeros((h.shape[0], rep.nullity), dtype=complex)
    if rep.nullity:
        full[idx] = rep.null_basis
    return full, rep


# projection-lemma bounds

@dataclass
class BoundResult:
    variant: str
    bound: float
    gamma_actual: float
    holds: bool
    details: dict = field(default_factory=dict)


class HypothesisViolation(ValueError):
    pass


def _eig(h):
    a = h.toarray() if sp.issparse(h) else np.asarray(h)
    return np.linalg.eigh(a)


def _gap_and_null(h):
    vals, vecs = _eig(h)
    tol = null_tolerance(h)
    null = vecs[:, np.abs(vals) <= tol]
    above = vals[vals > tol]
    return (float(above[0]) if above.size else np.inf), orthonormalize(null) if null.size else null, vals


def kitaev_bound(h_a, h_b, variant: str = "squared_ratio") -> BoundResult:
    """Lower bound on gamma(H_A + H_B) from the geometric projection lemma.

    Variants: ``angle`` (angle between nullspaces, needs H_A + H_B to have no
    zero eigenvalue), ``angle_reduced`` (same angle over the part of the H_A
    nullspace orthogonal to the joint nullspace), ``norm_ratio`` and
    ``squared_ratio`` (gap of H_B restricted to the H_A nullspace).
    """
    a = h_a.toarray() if sp.issparse(h_a) else np.asarray(h_a, dtype=complex)
    b = h_b.toarray() if sp.issparse(h_b) else np.asarray(h_b, dtype=complex)
    for name, m in (("H_A", a), ("H_B", b)):
        _check_hermitian(m)
        if np.linalg.eigvalsh(m)[0] < -null_tolerance(m):
            raise HypothesisViolation(f"{name} is not positive semidefinite")
    ga, null_a, _ = _gap_and_null(a)
    gb, null_b, _ = _gap_and_null(b)
    g_actual, null_h, vals_h = _gap_and_null(a + b)
    base = min(ga, gb)
    details = {"gamma_A": ga, "gamma_B": gb}
    if variant in ("angle", "angle_reduced"):
        if variant == "angle":
            if null_h.shape[1]:
                raise HypothesisViolation("H_A + H_B has a zero eigenvalue")
            span = null_a
            g_actual = float(vals_h[0])
        else:
            if not null_a.shape[1]:
                raise HypothesisViolation("H_A has no nullspace")
            proj = np.eye(a.shape[0]) - null_h @ null_h.conj().T if null_h.size else np.eye(a.shape[0])
            span = orthonormalize_rank(proj @ null_a) if null_a.size else null_a
        pb = null_b @ null_b.conj().T if null_b.size else np.zeros_like(a)
        c = float(np.linalg.eigvalsh(span.conj().T @ pb @ span)[-1]) if span.shape[1] else 0.0
        c = min(max(c, 0.0), 1.0)
        bound = base * (1 - np.sqrt(c))
        details["c"] = c
    elif variant in ("norm_ratio", "squared_ratio"):
        if not null_a.shape[1]:
            raise HypothesisViolation("H_A has no nullspace")
        hbs = null_a.conj().T @ b @ null_a
        g_bs, _, _ = _gap_and_null(hbs)
        if not np.isfinite(g_bs):
            raise HypothesisViolation("H_B restricted to the H_A nullspace vanishes")
        details["gamma_B_restricted"] = g_bs
        if variant == "norm_ratio":
            nb = float(np.linalg.norm(b, 2))
            bound = base * g_bs / (2 * nb)
            details["norm_B"] = nb
        else:
            F = float(np.linalg.eigvalsh(null_a.conj().T @ b @ b @ null_a)[-1])
            bound = base * g_bs**2 / (2 * F)
            details["F"] = F
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return BoundResult(variant, float(bound), float(g_actual), bool(g_actual >= bound - 1e-12), details)


def orthonormalize_rank(v: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    u, s, _ = np.linalg.svd(v, full_matrices=False)
    return u[:, s > tol]


@dataclass
class BoundInputs:
    h_a: np.ndarray
    h_b: np.ndarray


def random_psd_pair(rng: np.random.Generator, dim: int = 6, rank_a: int | None = None, rank_b: int | None = None) -> BoundInputs:
    """Two PSD matrices built from random projectors with a common kernel structure."""
    def proj(rank):
        x = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
        q, _ = np.linalg.qr(x)
        w = rng.uniform(0.5, 2.0, rank)
        return (q * w) @ q.conj().T

    ra = rank_a or int(rng.integers(1, dim))
    rb = rank_b or int(rng.integers(1, dim))
    return BoundInputs(proj(ra), proj(rb))


# graph Laplacian of the gadget chain

def laplacian_chain(M: int) -> np.ndarray:
    """Laplacian of the 3M+1 vertex chain of squares K0 - (L, M) - psi - (L, M) - psi ..."""
    if M < 1:
        raise ValueError("M >= 1")
    n = 3 * M + 1
    L = np.zeros((n, n))

    def edge(i, j):
        L[i, i] += 1
        L[j, j] += 1
        L[i, j] -= 1
        L[j, i] -= 1

    hub = 0
    for j in range(M):
        l, m, psi = 3 * j + 1, 3 * j + 2, 3 * j + 3
        edge(hub, l)
        edge(hub, m)
        edge(l, psi)
        edge(m, psi)
        hub = psi
    return L


def chain_norms(M: int) -> np.ndarray:
    """Squared norms of the history-state components in chain order."""
    return np.array([7.0] + [4.0, 4.0, 43.0] * M)


def laplacian_bound_check(M: int) -> dict:
    L = laplacian_chain(M)
    D = np.diag(1 / np.sqrt(chain_norms(M)))
    g_L = float(np.linalg.eigvalsh(L)[1])
    g_DLD = _gap_and_null(0.25 * D @ L @ D)[0]
    bound = (1 / (4 * 43)) * (1 / ((43 / 4) ** 2 + 1)) * g_L
    return {"M": M, "gamma_L": g_L, "gamma_DLD": g_DLD, "bound": bound, "holds": g_DLD >= bound}


def fit_exponent(xs, ys) -> float:
    """Slope of log y against log x."""
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])
