"""Command-line front end.

Every subcommand prints one JSON report (sorted keys, floats to 15
significant digits) and exits 0 when all its checks pass, 1 when a check
fails and 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import clock, grid, heralded, lemmas, operators, reduction, spectral
from .circuit import CircuitError, load_circuit

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if not np.isfinite(x) else float(f"{x:.15g}")
    if isinstance(x, complex):
        return [_clean(x.real), _clean(x.imag)]
    return x


def render(report: dict) -> str:
    return json.dumps(_clean(report), sort_keys=True, indent=2)


def _outdir(args) -> Path | None:
    if args.output_dir is None:
        return None
    d = Path(args.output_dir)
    d.mkdir(parents=True, exist_ok=True)
    return d


def _tolerance(value: str) -> float:
    t = float(value)
    if not 0 < t <= 1e-3:
        raise argparse.ArgumentTypeError("tolerance must lie in (0, 1e-3]")
    return t


def _positive(value: str) -> int:
    v = int(value)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


# subcommands

def cmd_reduce(args) -> dict:
    path = Path(args.circuit)
    if not path.is_file():
        raise UsageError(f"circuit file {path} not found")
    try:
        c = load_circuit(path)
    except CircuitError as exc:
        raise UsageError(str(exc)) from None
    inst = reduction.build_hx(c, tuple(w - 1 for w in args.pad))
    terms = inst.local_terms()
    census = operators.term_census(terms)
    report = {"manifest": inst.manifest(), "census": census,
              "max_acceptance": inst.circuit.max_acceptance()}
    report["checks"] = {
        "membership": census["condition"].get("not_verifiable", 0) == 0,
        "locality": max(t.locality for t in terms) <= 3,
    }
    out = _outdir(args)
    if out is not None:
        (out / "manifest.json").write_text(render(inst.manifest()) + "\n")
        (out / "terms.json").write_text(json.dumps([operators.format_term(t) for t in terms]) + "\n")
    if args.spectrum or out is not None:
        op = inst.restricted(cap=args.cap)
        if op.dim <= args.cap:
            h = op.matrix
            if out is not None:
                operators.write_matrix_market(out / "hx_restricted.mtx", h, hermitian=True,
                                              comment="H_X on the restricted basis |z>|C_i>|C_j>")
            if args.spectrum:
                rep = spectral.spectrum(h, k=args.k, rtol=args.tol, force=args.solver, vectors=False)
                report["spectrum"] = rep.summary()
        else:
            report["restricted_skipped"] = f"dimension {op.dim} above cap {args.cap}"
    return report


def cmd_verify_clock(args) -> dict:
    N = args.n
    if N not in (2, 3):
        raise UsageError("verify-clock supports N in {2, 3}")
    report: dict = {"N": N}
    n_t = 3 * (2 * N - 1)
    t_terms = clock.triplet_terms(N)
    h_t = operators.assemble(t_terms, n_t)
    null_t, rep_t = spectral.frustration_free_nullspace(h_t, operators.allowed_support(t_terms, n_t), k=2 * N + 2)
    sine_t = spectral.subspace_sine(null_t, clock.triplet_ground_basis(N))
    n_c = clock.clock_width(N)
    c_terms = clock.clock_terms(N)
    h_c = operators.assemble(c_terms, n_c)
    null_c, rep_c = spectral.frustration_free_nullspace(h_c, operators.allowed_support(c_terms, n_c), k=N + 2)
    sine_c = spectral.subspace_sine(null_c, clock.clock_basis(N))
    census = operators.term_census(c_terms)
    report["triplet"] = {"qubits": n_t, "nullity": rep_t.nullity, "subspace_sine": sine_t}
    report["clock"] = {"qubits": n_c, "nullity": rep_c.nullity, "subspace_sine": sine_c, "census": census}
    checks = {
        "triplet_nullity": rep_t.nullity == 2 * N,
        "clock_nullity": rep_c.nullity == N,
        "triplet_basis": sine_t < 1e-8,
        "clock_basis": sine_c < 1e-8,
        "membership": census["condition"].get("not_verifiable", 0) == 0,
    }
    if N == 2:
        tg, cg = lemmas.triplet_gap(2), lemmas.clock_gap(2)
        report["triplet"]["gamma"] = tg["gamma"]
        report["clock"]["gamma"] = cg["gamma"]
        checks["triplet_gap"] = tg["gamma"] >= 1 / 48
        checks["clock_gap"] = cg["gamma"] >= 1 / 2048
    report["checks"] = checks
    return report


def cmd_verify_grid(args) -> dict:
    if args.gadget == "warmup":
        op = clock_op = grid.build_warmup()
    elif args.gadget == "h1q":
        op = grid.build_h1q(args.unitary, clock_only=args.clock_only)
        clock_op = grid.build_h1q(args.unitary, clock_only=True)
    else:
        op = grid.build_h2q(clock_only=args.clock_only)
        clock_op = grid.build_h2q(clock_only=True)
    # the component graph is a property of the clock-only part
    graph = grid.component_analysis(clock_op)
    rep = spectral.spectrum(op.matrix, k=len(graph.components) + 4, rtol=args.tol)
    report = {
        "gadget": args.gadget,
        "dimension": op.dim,
        "components": len(graph.components),
        "vertices": len(graph.vertices),
        "edges": len(graph.edges),
        "spectrum": rep.summary(),
    }
    checks = {}
    if args.clock_only or args.gadget == "warmup":
        checks["nullity_equals_components"] = rep.nullity == len(graph.components)
        sine = spectral.subspace_sine(rep.null_basis, grid.component_states(graph))
        report["component_state_sine"] = sine
        checks["component_states"] = sine < 1e-8
    elif args.gadget == "h1q":
        checks["nullity"] = rep.nullity == 2
    else:
        checks["nullity"] = rep.nullity == 4
        sine = spectral.subspace_sine(rep.null_basis, reduction.gadget_null_states())
        report["psi_v_overlap"] = 1 - sine**2
        checks["psi_v_span"] = 1 - sine**2 >= 1 - 1e-10
    report["checks"] = checks
    out = _outdir(args)
    if out is not None:
        suffix = "_clock" if args.clock_only and args.gadget != "warmup" else ""
        (out / f"{args.gadget}{suffix}.adj").write_text(graph.to_text())
    return report


def cmd_verify_lemmas(args) -> dict:
    if args.n_max > 3:
        raise UsageError("verify-lemmas needs --n-max <= 3")
    rep = lemmas.verify_gap_lemmas(args.n_max, tuple(range(1, args.m_max + 1)))
    checks = {k: v["holds"] for k, v in rep.items() if isinstance(v, dict) and "holds" in v}
    checks["clock_nullity"] = all(int(k) == v for k, v in rep["clock_nullity"].items())
    rep.pop("ok")
    rep["checks"] = checks
    return rep


def cmd_spectrum(args) -> dict:
    path = Path(args.matrix)
    if not path.is_file():
        raise UsageError(f"matrix file {path} not found")
    h = operators.read_matrix_market(path)
    try:
        rep = spectral.spectrum(h, k=args.k, force=args.solver, rtol=args.tol)
    except spectral.NotHermitian as exc:
        raise UsageError(str(exc)) from None
    return {"file": path.name, "dimension": h.shape[0], "spectrum": rep.summary(),
            "checks": {"residuals": bool(rep.residuals.size == 0 or rep.residuals.max() <= 1e-8 * max(1.0, spectral.op_norm_inf(h)))}}


def cmd_heralded_sim(args) -> dict:
    phi = np.array([complex(args.phi[0]), complex(args.phi[1])])
    phi = phi / np.linalg.norm(phi)
    rng = np.random.default_rng(args.seed)
    target = heralded.R_GATE @ phi
    success = 0
    worst = 0.0
    rounds = [0] * (args.m + 1)
    for _ in range(args.trials):
        o = heralded.simulate_r(phi, args.m, rng)
        rounds[o.rounds] += 1
        if o.success:
            success += 1
            worst = max(worst, float(np.abs(o.state - target).max()))
    p = float(heralded.success_probability(args.m))
    sigma = np.sqrt(p * (1 - p) / args.trials)
    freq = success / args.trials
    lo, hi = heralded.wilson_interval(success, args.trials)
    return {
        "m": args.m, "trials": args.trials, "seed": args.seed,
        "round_success": str(heralded.round_success_exact()),
        "success_probability": p, "success_count": success, "success_frequency": freq,
        "interval": [lo, hi], "rounds_histogram": rounds[1:], "max_output_error": worst,
        "checks": {"within_3_sigma": abs(freq - p) <= 3 * sigma + 1e-15, "herald_exact": worst <= 1e-12},
    }


def cmd_protocol(args) -> dict:
    if args.terms:
        path = Path(args.terms)
        if not path.is_file():
            raise UsageError(f"terms file {path} not found")
        terms = [operators.parse_term(d) for d in json.loads(path.read_text())]
        if not args.witness:
            raise UsageError("--terms needs --witness")
        wpath = Path(args.witness)
        if not wpath.is_file():
            raise UsageError(f"witness file {wpath} not found")
        w = np.load(wpath)
        satisfying = None
    else:
        N = args.clock
        terms = clock.clock_terms(N)
        if args.witness == "random":
            rng = np.random.default_rng(args.seed)
            w = rng.standard_normal(2 ** clock.clock_width(N)) + 1j * rng.standard_normal(2 ** clock.clock_width(N))
            satisfying = False
        else:
            w = clock.clock_state(N, 1)
            satisfying = True
    w = np.asarray(w, dtype=complex).reshape(-1)
    w = w / np.linalg.norm(w)
    try:
        stats = heralded.run_protocol(terms, w, args.trials, args.m, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = stats.summary()
    report["sigma"] = stats.sigma
    checks = {"analytic_within_3_sigma": abs(stats.acceptance - stats.analytic_acceptance) <= 3 * stats.sigma + 1e-15}
    if satisfying:
        checks["perfect_completeness"] = stats.accepted == stats.trials
    report["checks"] = checks
    return report


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="q3sat", description="Quantum 3-SAT reduction and verification toolkit")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output-dir", default=None, help="directory for written artifacts")
    common.add_argument("--tol", type=_tolerance, default=spectral.NULL_RTOL, help="relative nullspace tolerance")
    common.add_argument("--cap", type=_positive, default=grid.RESTRICTED_CAP, help="restricted dimension cap")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("reduce", parents=[common], help="compile a circuit file to H_X")
    r.add_argument("--circuit", required=True)
    r.add_argument("--pad", type=int, nargs=2, default=(1, 2), metavar=("A", "B"),
                   help="1-based wires of the padding V pair")
    r.add_argument("--spectrum", action="store_true", help="also compute the restricted spectrum")
    r.add_argument("--k", type=_positive, default=6)
    r.add_argument("--solver", choices=("dense", "iterative"), default=None)
    r.set_defaults(func=cmd_reduce)

    c = sub.add_parser("verify-clock", parents=[common], help="clock ground spaces and gaps")
    c.add_argument("--n", type=int, default=2)
    c.set_defaults(func=cmd_verify_clock)

    g = sub.add_parser("verify-grid", parents=[common], help="gadget ground spaces and component graphs")
    g.add_argument("--gadget", choices=("warmup", "h1q", "h2q"), required=True)
    g.add_argument("--unitary", choices=("h", "t", "id"), default="h")
    g.add_argument("--clock-only", action="store_true")
    g.set_defaults(func=cmd_verify_grid)

    lm = sub.add_parser("verify-lemmas", parents=[common], help="numeric gap-lemma checks")
    lm.add_argument("--n-max", type=int, default=2)
    lm.add_argument("--m-max", type=_positive, default=2)
    lm.set_defaults(func=cmd_verify_lemmas)

    s = sub.add_parser("spectrum", parents=[common], help="low spectrum of a Matrix Market operator")
    s.add_argument("--matrix", required=True)
    s.add_argument("--k", type=_positive, default=6)
    s.add_argument("--solver", choices=("dense", "iterative"), default=None)
    s.set_defaults(func=cmd_spectrum)

    h = sub.add_parser("heralded-sim", parents=[common], help="Monte-Carlo of the heralded R gate")
    h.add_argument("--m", type=_positive, default=3)
    h.add_argument("--trials", type=_positive, default=100_000)
    h.add_argument("--seed", type=int, default=0)
    h.add_argument("--phi", nargs=2, default=("1", "0"), metavar=("A0", "A1"),
                   help="input amplitudes, e.g. 1 0.5j")
    h.set_defaults(func=cmd_heralded_sim)

    pr = sub.add_parser("protocol", parents=[common], help="simulate the randomised verifier")
    pr.add_argument("--terms", default=None, help="terms.json written by reduce")
    pr.add_argument("--witness", default=None, help=".npy witness, or 'clock'/'random' with --clock")
    pr.add_argument("--clock", type=int, default=2, help="use the clock Hamiltonian for this N")
    pr.add_argument("--trials", type=_positive, default=10_000)
    pr.add_argument("--m", type=_positive, default=None)
    pr.add_argument("--seed", type=int, default=0)
    pr.set_defaults(func=cmd_protocol)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        report = args.func(args)
    except UsageError as exc:
        print(render({"error": str(exc)}), file=sys.stderr)
        return EXIT_USAGE
    failed = sorted(k for k, v in report.get("checks", {}).items() if not v)
    if failed:
        report["failed"] = failed
    print(render(report))
    return EXIT_FAIL if failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
