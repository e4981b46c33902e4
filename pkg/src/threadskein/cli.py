"""Command line front end.

Exit status: 0 on success, 1 when a checked property fails or an operation
reports a domain error, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import itertools
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import serialize
from .cantor import GammaPrefix, build_thread
from .errors import SkeinError
from .exactnum import Q, fmt
from .gammastar import FamilyThread, brute_force_map_search, check_trace, gamma_star_prefix, jump_infeasibility
from .lipmap import check_interval_criterion, find_jumping_gap, jumps_over, lip_const, monotone_regularize
from .skein import (
    SkeinConfig,
    address,
    build_skein,
    chain,
    in_ball,
    parse_address,
    skein_distance,
    stability_report,
)
from .svg import emit_svg
from .verify import flattened_distances, verification_report


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return Q(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def _rational_list(text: str) -> list[Fraction]:
    text = text.strip()
    if text.startswith("["):
        items = json.loads(text)
    else:
        items = [t for t in text.split(",") if t.strip()]
    return [_rational(str(i)) for i in items]


def _load(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _emit(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _emit_json(data, out: Optional[str]) -> None:
    _emit(serialize.dumps(data), out)


# -- commands -----------------------------------------------------------------------


def cmd_thread(args) -> int:
    t = serialize.thread_from_json(_load(args.thread))
    if args.action == "dist":
        print(fmt(t.distance(args.x, args.y)))
    elif args.action == "matrix":
        _emit(serialize.thread_matrix_csv(t, t.sample_points(args.step)), args.out)
    elif args.action == "measure":
        print(fmt(t.measure()))
    elif args.action == "subthread":
        _emit_json(serialize.thread_to_json(t.subthread(args.x, args.y)), args.out)
    return 0


def cmd_cantor(args) -> int:
    if (args.gamma is None) == (args.gamma_rule is None):
        raise UsageError("give exactly one of --gamma or --gamma-rule")
    gamma = GammaPrefix(tuple(args.gamma)) if args.gamma is not None else args.gamma_rule
    _emit_json(serialize.thread_to_json(build_thread(gamma, args.k, args.width)), args.out)
    return 0


def cmd_lipmap(args) -> int:
    F = serialize.plmap_from_json(_load(args.map))
    if args.action == "lipconst":
        print(fmt(lip_const(F)))
        return 0
    if args.action == "criterion":
        verdict = check_interval_criterion(F, args.K)
        witness = [fmt(w) for w in verdict.witness] if verdict.witness else None
        _emit_json({"verdict": verdict.label, "reason": verdict.reason, "witness": witness}, args.out)
        return 0 if verdict.ok else 1
    if args.action == "regularize":
        _emit_json(serialize.plmap_to_json(monotone_regularize(F)), args.out)
        return 0
    # jumps: the jump structure of the (regularized) map over every codomain gap
    G = F if F.is_monotone() else monotone_regularize(F)
    records = {}
    for Cs in G.codomain.gaps:
        Ct = find_jumping_gap(G, Cs)
        records.setdefault(Ct, [g for g in G.codomain.gaps if jumps_over(G, Ct, g)])
    _emit_json(
        [{"domain_gap": [fmt(Ct.left), fmt(Ct.right)], "codomain_gaps": [[fmt(g.left), fmt(g.right)] for g in J]} for Ct, J in sorted(records.items())],
        args.out,
    )
    return 0


def cmd_gammastar(args) -> int:
    if args.action == "run":
        if args.family and args.rule:
            raise UsageError("give --family files or --rule with --widths, not both")
        if args.family:
            family = [FamilyThread.from_thread(serialize.thread_from_json(_load(p))) for p in args.family]
        elif args.rule and args.widths:
            family = [FamilyThread.from_rule(args.rule, w) for w in args.widths]
        else:
            raise UsageError("a family is required")
        run = gamma_star_prefix(family, args.K, args.eps, args.k, deepening_budget=args.deepening_budget)
        _emit_json(serialize.run_to_json(run), args.out)
        return 0 if check_trace(run).ok else 1
    if args.action == "check":
        verdict = check_trace(serialize.run_from_json(_load(args.run)))
        print(verdict.label if verdict.ok else f"{verdict.label}: {verdict.reason}")
        return 0 if verdict.ok else 1
    if args.action == "certify":
        target = serialize.thread_from_json(_load(args.target))
        m = len(target.gaps) if args.m is None else args.m
        cert = jump_infeasibility(target, args.budgets, args.K, m)
        _emit_json(serialize.certificate_to_json(cert), args.out)
        return 0
    source = serialize.thread_from_json(_load(args.source))
    target = serialize.thread_from_json(_load(args.target))
    found = brute_force_map_search(source, target, args.K, args.grid)
    if found is None:
        print("NONE")
    else:
        _emit_json(serialize.plmap_to_json(found), args.out)
    return 0


def _space(args):
    if args.space:
        return serialize.skein_from_json(_load(args.space))
    return build_skein(SkeinConfig(depth=2))


def cmd_skein(args) -> int:
    if args.action == "build":
        config = SkeinConfig(args.depth, args.gammas, args.grid, args.gaps, None if args.pair_limit == 0 else args.pair_limit)
        _emit_json(serialize.skein_to_json(build_skein(config)), args.out)
        return 0
    tr = _space(args)
    if args.action == "dist":
        print(fmt(skein_distance(tr, parse_address(args.p), parse_address(args.q))))
        return 0
    if args.action == "chain":
        for point in chain(tr, parse_address(args.p), parse_address(args.q)):
            print(address(point))
        return 0
    # verify: flattened oracle on all pairs, stability on the ball around Sk(beta)
    session = tr.session()
    oracle = flattened_distances(tr)
    mismatch = next(
        ([address(p), address(q)] for p in tr.points for q in tr.points if session.distance(p, q) != oracle[p][q]),
        None,
    )
    ball = in_ball(tr, args.beta, session)
    verdict = stability_report(tr, args.beta, itertools.combinations(ball, 2), session)
    report = {
        "beta": args.beta,
        "points": len(tr.points),
        "ball_points": len(ball),
        "oracle": "ACCEPT" if mismatch is None else "REJECT",
        "oracle_witness": mismatch,
        "stability": verdict.label,
        "stability_witness": verdict.witness if not verdict.ok else None,
    }
    _emit_json(report, args.out)
    return 0 if verdict.ok and mismatch is None else 1


def cmd_verify(args) -> int:
    if not args.all and not args.suite:
        raise UsageError("give --all or at least one --suite")
    report = verification_report(args.seed, None if args.all else args.suite, timings=args.timings)
    _emit_json(report, args.out)
    return 0 if report["passed"] else 1


def cmd_emit(args) -> int:
    data = _load(args.input)
    if args.csv:
        if "length" not in data:
            raise UsageError("CSV output needs a thread")
        t = serialize.thread_from_json(data)
        _emit(serialize.thread_matrix_csv(t, t.sample_points(args.step)), args.csv)
        return 0
    if "config" in data:
        obj = serialize.skein_from_json(data)
    elif "threads" in data:
        obj = serialize.threading_from_json(data)
    elif "length" in data:
        obj = serialize.thread_from_json(data)
    else:
        raise UsageError("cannot tell what the input describes")
    text = emit_svg(obj, None if args.svg == "-" else args.svg)
    if args.svg == "-":
        sys.stdout.write(text)
    return 0


# -- parser ----------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="threadskein", description="Exact thread and skein metric computations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("thread", help="distances and sub-threads of a thread")
    p.add_argument("action", choices=["dist", "matrix", "measure", "subthread"])
    p.add_argument("--thread", required=True)
    p.add_argument("--x", type=_rational)
    p.add_argument("--y", type=_rational)
    p.add_argument("--step", type=_rational, default=Fraction(1, 8))
    p.add_argument("--out")
    p.set_defaults(func=cmd_thread, needs=lambda a: ["x", "y"] if a.action in ("dist", "subthread") else [])

    p = sub.add_parser("cantor", help="greedy fat-Cantor threads")
    p.add_argument("action", choices=["build"])
    p.add_argument("--gamma", type=_rational_list)
    p.add_argument("--gamma-rule")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--width", type=_rational, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_cantor)

    p = sub.add_parser("lipmap", help="Lipschitz maps between threads")
    p.add_argument("action", choices=["lipconst", "criterion", "regularize", "jumps"])
    p.add_argument("--map", required=True)
    p.add_argument("--K", type=_rational)
    p.add_argument("--out")
    p.set_defaults(func=cmd_lipmap, needs=lambda a: ["K"] if a.action == "criterion" else [])

    p = sub.add_parser("gammastar", help="the diagonal gap-bound sequence and its checks")
    p.add_argument("action", choices=["run", "check", "certify", "brute"])
    p.add_argument("--family", nargs="+")
    p.add_argument("--rule")
    p.add_argument("--widths", type=_rational_list)
    p.add_argument("--K", type=_rational)
    p.add_argument("--eps", type=_rational)
    p.add_argument("--k", type=int)
    p.add_argument("--deepening-budget", type=int, default=256)
    p.add_argument("--run")
    p.add_argument("--target")
    p.add_argument("--budgets", type=_rational_list)
    p.add_argument("--m", type=int)
    p.add_argument("--source")
    p.add_argument("--grid", type=_rational)
    p.add_argument("--out")
    p.set_defaults(
        func=cmd_gammastar,
        needs=lambda a: {
            "run": ["K", "eps", "k"],
            "check": ["run"],
            "certify": ["target", "budgets", "K"],
            "brute": ["source", "target", "K", "grid"],
        }[a.action],
    )

    p = sub.add_parser("skein", help="finite skein truncations")
    p.add_argument("action", choices=["build", "dist", "verify", "chain"])
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--gammas", type=int, default=2)
    p.add_argument("--grid", type=_rational, default=Fraction(1, 16))
    p.add_argument("--gaps", type=int, default=2, help="gaps per thread")
    p.add_argument("--pair-limit", type=int, default=5, help="pairs expanded per level (0: no limit)")
    p.add_argument("--space")
    p.add_argument("--p")
    p.add_argument("--q")
    p.add_argument("--beta", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_skein, needs=lambda a: ["p", "q"] if a.action in ("dist", "chain") else [])

    p = sub.add_parser("verify", help="run the property suites")
    p.add_argument("--all", action="store_true")
    p.add_argument("--suite", action="append")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--timings", action="store_true", help="include wall-clock times (breaks byte determinism)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("emit", help="SVG drawings and CSV distance matrices")
    p.add_argument("--input", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--svg")
    group.add_argument("--csv")
    p.add_argument("--step", type=_rational, default=Fraction(1, 8))
    p.set_defaults(func=cmd_emit)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    missing = [n for n in getattr(args, "needs", lambda a: [])(args) if getattr(args, n) is None]
    if missing:
        parser.print_usage(sys.stderr)
        print(f"error: {args.command} {getattr(args, 'action', '')} needs " + ", ".join(f"--{m}" for m in missing), file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SkeinError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
