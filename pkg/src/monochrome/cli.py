"""Command-line front end.

Exit codes: 0 success/sat, 1 invalid certificate (check), 2 error,
3 heuristic failure or internal contradiction, 4 unsat/infeasible.
"""

from __future__ import annotations

import argparse
import json
import signal
import sys
import time
from fractions import Fraction

from . import generators
from .balancing import BalancingInfeasible, BalancingInstance, balance
from .errors import InternalContradiction, MonochromeError
from .exact_partition import DEFAULT_CAP, Unsat, min_mono_cycle_partition, verify_certificate
from .graph_core import BLUE, RED
from .heuristic import HeuristicFailure, heuristic_partition
from .serialize import dumps, graph_to_json, read_certificate, read_graph
from .structure import detect_extremal, find_components
from .survey import SurveyConfig, rows_to_csv, rows_to_json, run_survey
from .two_matching import as_fraction

EXIT_OK, EXIT_INVALID, EXIT_ERROR, EXIT_HEURISTIC_FAILED, EXIT_UNSAT = 0, 1, 2, 3, 4


class _Timeout(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _emit(obj, out=None) -> None:
    (out or sys.stdout).write(dumps(obj))


def _error(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return EXIT_ERROR


def cmd_solve(args) -> int:
    g = read_graph(args.graph)
    use_heuristic = args.heuristic or (not args.exact and g.n > args.cap)
    t0 = time.perf_counter()
    if args.timeout:
        def _alarm(signum, frame):
            raise _Timeout

        signal.signal(signal.SIGALRM, _alarm)
        signal.alarm(args.timeout)
    try:
        if use_heuristic:
            res = heuristic_partition(g, args.gamma, max_parts=args.k or 3)
        else:
            res = min_mono_cycle_partition(g, args.k if args.k is not None else g.n, cap=args.cap)
    except _Timeout:
        return _error(f"timed out after {args.timeout} s")
    finally:
        if args.timeout:
            signal.alarm(0)
    millis = round((time.perf_counter() - t0) * 1000)
    solver = "heuristic" if use_heuristic else "exact"
    if isinstance(res, HeuristicFailure):
        _emit({"solver": solver, "failure": res.stage, "detail": res.detail, "millis": millis})
        return EXIT_HEURISTIC_FAILED
    if isinstance(res, Unsat):
        _emit({"solver": solver, "unsat": res.k_max, "millis": millis})
        return EXIT_UNSAT
    cert = res if use_heuristic else res[1]
    k_star = cert.k if use_heuristic else res[0]
    _emit({"solver": solver, "k_star": k_star, "certificate": cert.to_json(g.colours), "millis": millis})
    return EXIT_OK


def cmd_check(args) -> int:
    g = read_graph(args.graph)
    cert = read_certificate(args.certificate, g.colours)
    bad = verify_certificate(g, cert)
    if bad is None:
        _emit({"valid": True, "parts": len(cert.parts), "k": cert.k})
        return EXIT_OK
    _emit({"valid": False, "part": bad.part, "clause": bad.clause, "message": bad.message})
    return EXIT_INVALID


def cmd_balance(args) -> int:
    host = read_graph(args.host)
    if args.targets is not None:
        try:
            targets = [int(x) for x in args.targets.split(",") if x.strip()]
        except ValueError:
            return _error("targets must be comma-separated integers")
    else:
        data = json.loads(open(args.host).read())
        if "targets" not in data:
            return _error("no --targets given and host JSON has no 'targets' field")
        targets = data["targets"]
    inst = BalancingInstance(host, targets, gamma=args.gamma)
    res = balance(inst, strict=args.strict, blowup_cap=args.cap)
    if isinstance(res, BalancingInfeasible):
        _emit(res.to_json())
        return EXIT_UNSAT
    _emit(res.to_json())
    return EXIT_OK


def cmd_gen(args) -> int:
    kind = args.kind
    if kind == "sharpness":
        g = generators.gen_sharpness(args.m, RED if args.inner == "red" else BLUE)
    elif kind == "three-colour":
        g = generators.gen_three_colour(args.m)
    elif kind == "extremal-a":
        g = generators.gen_extremal_a(args.m, args.gamma, args.seed, surplus=args.surplus)
    elif kind == "extremal-b":
        g = generators.gen_extremal_b(args.m, args.gamma, args.seed)
    elif kind == "random":
        g = generators.gen_random_min_degree(args.n, args.delta, args.bias, args.seed)
    elif kind == "reduced":
        g = generators.gen_random_reduced(args.m, args.gamma, args.seed)
    else:  # pragma: no cover - argparse restricts choices
        return _error(f"unknown generator {kind}")
    _emit(graph_to_json(g))
    return EXIT_OK


def cmd_analyze(args) -> int:
    r = read_graph(args.graph)
    if args.extremal_only:
        _emit(detect_extremal(r, args.gamma).to_json(r.colours))
        return EXIT_OK
    # an extremal colouring is reported even below the degree threshold
    rep = detect_extremal(r, 4 * args.gamma)
    if rep.kind != "none":
        _emit(rep.to_json(r.colours))
        return EXIT_OK
    try:
        out = find_components(r, args.gamma, strict=not args.no_strict)
    except InternalContradiction as exc:
        _emit({"kind": "internal_contradiction", "message": str(exc)})
        return EXIT_HEURISTIC_FAILED
    _emit(out.to_json(r.colours))
    return EXIT_OK


def cmd_survey(args) -> int:
    cfg = SurveyConfig(
        n_min=args.n_min,
        n_max=args.n_max,
        samples=args.samples,
        delta=args.delta,
        gamma=args.gamma,
        seed=args.seed,
        solver=args.solver,
        timing=args.timing,
    )
    rows = run_survey(cfg, workers=args.workers)
    text = rows_to_csv(rows) if args.format == "csv" else dumps(rows_to_json(rows))
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="monochrome", description="Monochromatic cycle partitions of coloured graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="minimum partition into monochromatic cycles")
    s.add_argument("graph")
    s.add_argument("--k", type=int, default=None, help="maximum number of parts")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--heuristic", action="store_true")
    s.add_argument("--gamma", type=_fraction, default=Fraction(1, 48))
    s.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest n for the exact solver")
    s.add_argument("--timeout", type=int, default=0, help="seconds (0 = none)")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("check", help="verify a certificate against a graph")
    c.add_argument("graph")
    c.add_argument("certificate")
    c.set_defaults(func=cmd_check)

    b = sub.add_parser("balance", help="integer edge values with prescribed vertex sums")
    b.add_argument("host")
    b.add_argument("--targets", default=None, help="comma-separated t_i (else read from the host JSON)")
    b.add_argument("--gamma", type=_fraction, default=Fraction(1, 2))
    b.add_argument("--strict", action="store_true")
    b.add_argument("--cap", type=int, default=10**5, help="blow-up size cap")
    b.set_defaults(func=cmd_balance)

    g = sub.add_parser("gen", help="generate an instance as graph JSON")
    g.add_argument("kind", choices=["sharpness", "three-colour", "extremal-a", "extremal-b", "random", "reduced"])
    g.add_argument("--m", type=int, default=1)
    g.add_argument("--n", type=int, default=12)
    g.add_argument("--inner", choices=["red", "blue"], default="red")
    g.add_argument("--gamma", type=_fraction, default=Fraction(1, 10))
    g.add_argument("--delta", type=_fraction, default=Fraction(3, 4))
    g.add_argument("--bias", type=float, default=0.5)
    g.add_argument("--surplus", type=int, default=None)
    g.add_argument("--seed", type=int, default=0)
    g.set_defaults(func=cmd_gen)

    a = sub.add_parser("analyze", help="extremal detection and component selection")
    a.add_argument("graph")
    a.add_argument("--gamma", type=_fraction, default=Fraction(1, 48))
    a.add_argument("--extremal-only", action="store_true", help="only run detect_extremal at the given gamma")
    a.add_argument("--no-strict", action="store_true", help="skip the minimum-degree precondition")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("survey", help="sweep random instances and report per-instance results")
    v.add_argument("--n-min", type=int, default=9)
    v.add_argument("--n-max", type=int, default=12)
    v.add_argument("--samples", type=int, default=10)
    v.add_argument("--delta", type=_fraction, default=Fraction(3, 4))
    v.add_argument("--gamma", type=_fraction, default=Fraction(1, 48))
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--solver", choices=["exact", "heuristic", "both", "auto"], default="auto")
    v.add_argument("--timing", action="store_true", help="fill the millis column (breaks byte-identity)")
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--format", choices=["csv", "json"], default="csv")
    v.add_argument("--output", default=None)
    v.set_defaults(func=cmd_survey)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (MonochromeError, ValueError, OSError) as exc:
        return _error(str(exc))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
