"""Command-line entry point.

Every subcommand prints (or writes with --out) one JSON document carrying
"schema": "typed-asep/1" and a run manifest.  Exit codes: 0 when all checks
pass, 1 when a check fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .asep_generator import (
    AsepParams,
    InvalidParams,
    DimensionOverflow,
    local_generator,
    multi_site_generator,
    rate_positivity_scan,
)
from .central_element import NotScalar, assemble_central, verify_centrality, verify_scalar_action
from .duality import DualityViolated, verify_duality, verify_duality_symbolic
from .exact_arith import LaurentPoly, RationalFunction, parse_rational
from .hamiltonian import WrongKernelDimension, analyze
from .lie_data import check_rank
from .simulator import (
    NegativeRate,
    TrajectoryConfig,
    duality_expectation_check,
    gillespie_run,
    jump_table,
    simulate_final_states,
)

SCHEMA = "typed-asep/1"
log = logging.getLogger("typed_asep")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


# -- value serialization --------------------------------------------------------

def value_json(v):
    if isinstance(v, (RationalFunction, LaurentPoly)):
        return RationalFunction.coerce(v).to_json()
    if isinstance(v, dict):
        return {str(k): value_json(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [value_json(x) for x in v]
    if isinstance(v, (bool, float, str)) or v is None:
        return v
    if isinstance(v, int):
        return v
    return str(v)


def _matrix_json(M) -> dict:
    return {"dim": M.dim,
            "entries": [[i, j, value_json(v)] for (i, j), v in sorted(M.entries.items())]}


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _real(text: str) -> Fraction:
    """Rationals or decimal literals (only simulation accepts the latter)."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _config(text: str) -> tuple[int, ...]:
    try:
        out = tuple(int(s) for s in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated site states: {text!r}") from exc
    if any(s not in (0, 1, 2, 3) for s in out):
        raise argparse.ArgumentTypeError("site states must be 0..3")
    return out


def _mode(args):
    if args.mode == "numeric":
        if args.q is None:
            raise UsageError("--mode numeric requires --q")
        return args.q
    return "symbolic"


# -- subcommands ---------------------------------------------------------------

def cmd_central(args):
    check_rank(args.n)
    mode = _mode(args)
    C = assemble_central(args.n, mode, workers=args.threads)
    out = {"n": args.n, "mode": args.mode, "q": None if mode == "symbolic" else str(mode),
           "pairs": len(C.factors)}
    out["factors"] = [
        {"mu": str(t.pair.mu), "lambda": str(t.pair.lam), "q_exponent": t.q_exponent,
         "e_star": t.e_star.to_json(), "k_exponents": list(t.k_exponents),
         "f_star": t.f_star.to_json()}
        for t in C.factors]
    ok = True
    try:
        out["scalar"] = value_json(verify_scalar_action(C, args.n, C.field))
    except NotScalar as exc:
        out["scalar"] = None
        out["error"] = str(exc)
        ok = False
    if args.centrality:
        out["central"] = verify_centrality(C, args.n, C.field)
        ok = ok and out["central"]
    return out, ok


def cmd_hamiltonian(args):
    check_rank(args.n)
    mode = _mode(args)
    if args.delta is not None and not 0 <= args.delta <= args.n - 2:
        raise UsageError(f"--delta must lie in 0..{args.n - 2}")
    deltas = range(args.n - 1) if args.delta is None else [args.delta]
    try:
        rep = analyze(args.n, mode)
    except (NotScalar, WrongKernelDimension) as exc:
        return {"n": args.n, "error": str(exc)}, False
    out = {
        "n": args.n, "mode": args.mode, "q": None if mode == "symbolic" else str(mode),
        "scalar": value_json(rep.scalar),
        "Lambda": value_json(rep.Lambda),
        "census": {str(k): v for k, v in sorted(rep.census().items(), reverse=True)},
        "one_by_one_zero": all(rep.H_hat.get(b[0], b[0]) == 0 for b in rep.blocks if len(b) == 1),
        "ground_states": [{"delta": g.delta, "support": list(g.support),
                           "vector": value_json(g.vector)} for g in rep.ground_states],
        "pruned": {str(d): _matrix_json(M) for d, M in rep.pruned.items() if d in deltas},
        "matches": {str(d): ok for d, ok in rep.matches.items() if d in deltas},
        "two_by_two": [{"pair": list(p), "match": m} for p, _, m in rep.two_by_two],
    }
    ok = (all(rep.matches[d] for d in deltas) and all(m for _, _, m in rep.two_by_two)
          and out["one_by_one_zero"])
    return out, ok


def cmd_generator(args):
    params = AsepParams("symbolic" if args.q is None else args.q, args.n, args.delta)
    gen = local_generator(params) if args.sites == 2 else multi_site_generator(params, args.sites)
    sums_zero = all(s == 0 for s in gen.row_sums())
    out = {"n": args.n, "delta": args.delta, "sites": args.sites,
           "q": "symbolic" if params.symbolic else str(params.q),
           "generator": gen.to_json(), "row_sums_zero": sums_zero}
    ok = sums_zero
    if not params.symbolic:
        scan = rate_positivity_scan(params, grid=[params.q])
        out["nonnegative_rates"] = scan["ok"]
        ok = ok and scan["ok"]
    return out, ok


def cmd_duality_check(args):
    out = {"n": args.n, "sites": args.sites, "points": args.points, "seed": args.seed,
           "delta": args.delta}
    try:
        rep = verify_duality(args.n, args.sites, args.points, args.seed, args.delta,
                             raise_on_failure=False, workers=args.threads)
    except InvalidParams as exc:
        raise UsageError(str(exc)) from exc
    out["report"] = rep
    ok = rep["ok"]
    if args.symbolic:
        try:
            out["symbolic"] = verify_duality_symbolic(args.n, args.sites, args.delta)
        except DualityViolated as exc:
            out["symbolic"] = {"ok": False, "error": str(exc)}
        ok = ok and out["symbolic"]["ok"]
    return out, ok


def cmd_simulate(args):
    params = AsepParams(args.q, args.n, args.delta)
    initial = args.initial if args.initial is not None else (3,) + (0,) * (args.sites - 1)
    cfg = TrajectoryConfig(params, args.sites, float(args.tmax), args.seed, initial)
    traj = gillespie_run(cfg)
    final = simulate_final_states(params, args.sites, cfg.initial, float(args.tmax),
                                  args.trials, args.seed, workers=args.threads)
    basis = jump_table(params, args.sites).basis
    counts: dict[str, int] = {}
    for k in final.tolist():
        key = ",".join(map(str, basis[k]))
        counts[key] = counts.get(key, 0) + 1
    out = {"n": args.n, "delta": args.delta, "sites": args.sites, "q": str(params.q),
           "tmax": str(args.tmax), "trials": args.trials, "seed": args.seed,
           "initial": list(cfg.initial), "trajectory": traj.to_json(),
           "final_distribution": dict(sorted(counts.items())),
           "conserved": traj.conserves_counts()}
    return out, out["conserved"]


def cmd_duality_mc(args):
    params = AsepParams(args.q, args.n, 0)
    eta = args.eta if args.eta is not None else (3,) + (0,) * (args.sites - 1)
    xi = args.xi if args.xi is not None else (0,) * (args.sites - 1) + (3,)
    if len(eta) != args.sites or len(xi) != args.sites:
        raise UsageError("--eta/--xi must have --sites entries")
    rep = duality_expectation_check(params, args.alpha1, args.alpha2, eta, xi, float(args.t),
                                    args.trials, args.seed, L=args.sites, workers=args.threads)
    rep["q"] = str(params.q)
    rep["alpha1"], rep["alpha2"] = str(args.alpha1), str(args.alpha2)
    return rep, rep["ok"]


def cmd_verify_all(args):
    check_rank(args.n)
    mode = _mode(args)
    steps = {}
    C = assemble_central(args.n, mode, workers=args.threads)
    try:
        steps["scalar"] = {"ok": True, "value": value_json(verify_scalar_action(C, args.n, C.field))}
    except NotScalar as exc:
        steps["scalar"] = {"ok": False, "error": str(exc)}
    steps["centrality"] = {"ok": verify_centrality(C, args.n, C.field)}
    try:
        rep = analyze(args.n, mode, C=C)
        steps["hamiltonian"] = {
            "ok": all(rep.matches.values()) and all(m for _, _, m in rep.two_by_two),
            "Lambda": value_json(rep.Lambda),
            "census": {str(k): v for k, v in sorted(rep.census().items(), reverse=True)},
            "matches": {str(d): m for d, m in rep.matches.items()},
        }
    except (NotScalar, WrongKernelDimension) as exc:
        steps["hamiltonian"] = {"ok": False, "error": str(exc)}
    for L in (2, 3):
        r = verify_duality(args.n, L, args.points, args.seed, raise_on_failure=False,
                           workers=args.threads)
        steps[f"duality_L{L}"] = {"ok": r["ok"], "points": len(r["points"])}
    try:
        steps["duality_symbolic"] = verify_duality_symbolic(args.n, 2)
    except DualityViolated as exc:
        steps["duality_symbolic"] = {"ok": False, "error": str(exc)}
    gens = [local_generator(AsepParams("symbolic", args.n, d)) for d in range(args.n - 1)]
    steps["row_sums"] = {"ok": all(all(s == 0 for s in g.row_sums()) for g in gens)}
    ok = all(s["ok"] for s in steps.values())
    return {"n": args.n, "mode": args.mode, "steps": steps}, ok


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="typed-asep", description="Central element, generator and duality checks "
                                                "for the two-species type D exclusion process.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, threads=True):
        sp.add_argument("--out", type=Path, help="write JSON here instead of stdout")
        sp.add_argument("--reproducible", action="store_true",
                        help="omit wall-clock timing so output is byte-identical across runs")
        sp.add_argument("--verbose", "-v", action="store_true")
        if threads:
            sp.add_argument("--threads", type=int, default=1, help="worker cap")

    def algebra(sp):
        sp.add_argument("--n", type=int, required=True, help="rank, so(2n)")
        sp.add_argument("--mode", choices=("symbolic", "numeric"), default="symbolic")
        sp.add_argument("--q", type=_rational, help="rational q for numeric mode")

    sp = sub.add_parser("central", help="assemble the central element and its scalar")
    algebra(sp)
    sp.add_argument("--centrality", action="store_true", help="also check commutation")
    common(sp)
    sp.set_defaults(func=cmd_central)

    sp = sub.add_parser("hamiltonian", help="Hhat, blocks, ground states, pruned generators")
    algebra(sp)
    sp.add_argument("--delta", type=int, help="report only this delta")
    common(sp)
    sp.set_defaults(func=cmd_hamiltonian)

    sp = sub.add_parser("generator", help="exclusion process generator matrix")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--delta", type=int, default=0)
    sp.add_argument("--sites", type=int, default=2)
    sp.add_argument("--q", type=_rational, help="rational q (default: symbolic)")
    common(sp)
    sp.set_defaults(func=cmd_generator)

    sp = sub.add_parser("duality-check", help="exact check of L D = D L^T")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--sites", type=int, default=2)
    sp.add_argument("--points", type=int, default=5)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--delta", type=int, default=0)
    sp.add_argument("--symbolic", action="store_true", help="also run the symbolic-q check")
    common(sp)
    sp.set_defaults(func=cmd_duality_check)

    sp = sub.add_parser("simulate", help="Gillespie trajectories")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--delta", type=int, default=0)
    sp.add_argument("--sites", type=int, default=2)
    sp.add_argument("--q", type=_real, required=True)
    sp.add_argument("--tmax", type=_real, required=True)
    sp.add_argument("--trials", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--initial", type=_config, help="comma-separated site states")
    common(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("duality-mc", help="Monte Carlo duality expectations")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--sites", type=int, default=2)
    sp.add_argument("--q", type=_real, required=True)
    sp.add_argument("--alpha1", type=_rational, required=True)
    sp.add_argument("--alpha2", type=_rational, required=True)
    sp.add_argument("--t", type=_real, required=True)
    sp.add_argument("--trials", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--eta", type=_config)
    sp.add_argument("--xi", type=_config)
    common(sp)
    sp.set_defaults(func=cmd_duality_mc)

    sp = sub.add_parser("verify-all", help="run the whole pipeline for one n")
    algebra(sp)
    sp.add_argument("--points", type=int, default=5)
    sp.add_argument("--seed", type=int, default=0)
    common(sp)
    sp.set_defaults(func=cmd_verify_all)
    return p


def _manifest(args, argv, duration, reproducible):
    params = {k: (str(v) if isinstance(v, (Fraction, Path)) else
                  list(v) if isinstance(v, tuple) else v)
              for k, v in sorted(vars(args).items())
              if k not in ("func", "out", "verbose", "reproducible", "command")}
    return {"command": args.command, "argv": list(argv), "parameters": params,
            "version": __version__,
            "duration_seconds": None if reproducible else round(duration, 6),
            "output": str(args.out) if args.out else None}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage() + "typed-asep: error: a subcommand is required")
        if getattr(args, "threads", 1) < 1:
            raise UsageError("--threads must be at least 1")
    except UsageError as exc:
        msg = str(exc)
        if not msg.startswith("usage"):
            msg = f"{parser.format_usage()}typed-asep: error: {msg}"
        print(msg, file=sys.stderr)
        return 2
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    start = time.perf_counter()
    try:
        result, ok = args.func(args)
    except (UsageError, InvalidParams, DimensionOverflow, NegativeRate, ValueError) as exc:
        print(parser.format_usage().rstrip(), file=sys.stderr)
        print(f"typed-asep {args.command}: error: {exc}", file=sys.stderr)
        return 2
    doc = {"schema": SCHEMA, "ok": bool(ok), "result": result,
           "manifest": _manifest(args, argv, time.perf_counter() - start, args.reproducible)}
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.out:
        args.out.write_text(text)
        print(json.dumps({"schema": SCHEMA, "ok": bool(ok), "output": str(args.out)}))
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
