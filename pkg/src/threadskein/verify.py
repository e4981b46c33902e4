"""Executable property suites.

Each suite returns a :class:`SuiteResult`; a failing suite always carries a
witness that reproduces the failure on its own.  Random choices come from a
seeded ``random.Random`` so a report is fully determined by its seed.
"""
from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional

import networkx as nx

from . import serialize
from .cantor import GammaPrefix, GapStream, build_thread, rational_at
from .errors import PreconditionGap
from .exactnum import ONE, ZERO, fmt, pow2
from .gammastar import FamilyThread, brute_force_map_search, check_trace, gamma_star_prefix, jump_infeasibility
from .lipmap import (
    PLMap,
    check_interval_criterion,
    clip,
    find_jumping_gap,
    jump_bound_violation,
    jumps_over,
    lip_const,
    monotone_regularize,
    separation_violation,
)
from .skein import (
    A,
    B,
    Session,
    SkeinConfig,
    address,
    build_skein,
    chain,
    in_ball,
    isolated_point_obstruction,
    registry_check,
    stability_report,
)
from .thread import Thread, from_gaps, line

HALF = Fraction(1, 2)


def fixture_ta() -> Thread:
    return from_gaps(1, HALF, [(HALF, Fraction(5, 8)), (Fraction(1, 3), Fraction(19, 48)), (Fraction(2, 3), Fraction(2, 3) + Fraction(1, 32))])


def fixture_line(width=ONE) -> Thread:
    return line(1, width)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int
    witness: Any = None
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_json(self, timings: bool = False) -> dict:
        out = {"name": self.name, "passed": self.passed, "checked": self.checked, "witness": self.witness, "detail": self.detail}
        if timings:
            out["seconds"] = round(self.seconds, 3)
        return out


class _Fail(Exception):
    def __init__(self, witness):
        super().__init__(str(witness))
        self.witness = witness


def _expect(cond: bool, witness) -> None:
    if not cond:
        raise _Fail(witness)


# -- thread and cantor ---------------------------------------------------------------------


def grid_points(t: Thread, n: int = 64) -> list[Fraction]:
    pts = {Fraction(k, n) * t.length for k in range(n + 1)}
    pts.update(t.gap_endpoints())
    return sorted(p for p in pts if t.is_point(p))


def triangle_violation(pts, D):
    """First triple breaking the triangle inequality, or None.

    Distances are scaled by a common denominator so the cubic loop compares
    integers; the scaling is exact.
    """
    scale = math.lcm(*(v.denominator for v in D.values()))
    n = len(pts)
    M = [[int(D[x, y] * scale) for y in pts] for x in pts]
    for i in range(n):
        Mi = M[i]
        for j in range(n):
            Mij, Mj = Mi[j], M[j]
            for k in range(n):
                if Mi[k] > Mij + Mj[k]:
                    return [fmt(pts[i]), fmt(pts[j]), fmt(pts[k])]
    return None


def suite_thread_metric(rng: random.Random) -> tuple[int, dict]:
    checked = 0
    for name, t in (("T_A", fixture_ta()), ("T_LINE", fixture_line()), ("T_LINE/2", fixture_line(HALF))):
        pts = grid_points(t)
        D = {(x, y): t.distance(x, y) for x in pts for y in pts}
        _expect(t.distance(0, t.length) == t.width, {"thread": name, "property": "d(0,l)=width"})
        for x, y in itertools.product(pts, repeat=2):
            _expect(D[x, y] == D[y, x], {"thread": name, "property": "symmetry", "pair": [fmt(x), fmt(y)]})
            _expect((D[x, y] == 0) == (x == y), {"thread": name, "property": "identity", "pair": [fmt(x), fmt(y)]})
            if D[x, y] < t.width:
                _expect(D[x, y] == abs(x - y), {"thread": name, "property": "local isometry", "pair": [fmt(x), fmt(y)]})
        _expect(triangle_violation(pts, D) is None, {"thread": name, "property": "triangle", "triple": triangle_violation(pts, D)})
        checked += len(pts) ** 3
        # subthread metric equality on a random sub-range
        for _ in range(5):
            x, y = sorted(rng.sample(pts, 2))
            sub = t.subthread(x, y)
            inner = [p for p in pts if x <= p <= y]
            for u, v in itertools.product(inner, repeat=2):
                _expect(sub.distance(u - x, v - x) == D[u, v], {"thread": name, "property": "subthread", "range": [fmt(x), fmt(y)], "pair": [fmt(u), fmt(v)]})
    return checked, {}


def simulate_gaps(gammas, k):
    """Independent re-run of the min rule with a plain nested loop."""
    placed = []
    for i in range(k):
        g = gammas[i]
        n = 1
        while True:
            q = rational_at(n)
            cand = (q, q + g)
            if cand[1] < 1 and all(cand[1] <= a or b <= cand[0] for a, b in placed):
                placed.append(cand)
                break
            n += 1
    return placed


def suite_cantor(rng: random.Random) -> tuple[int, dict]:
    k = 64
    t = build_thread("half-bound", k, HALF)
    gammas = [pow2(-(i + 2)) for i in range(1, k + 1)]
    first = [(HALF, Fraction(5, 8)), (Fraction(1, 3), Fraction(19, 48)), (Fraction(2, 3), Fraction(67, 96))]
    stream = GapStream("half-bound")
    produced = []
    for i in range(k):
        gap, stream = stream.next_gap()
        produced.append(gap)
        _expect(gap.length == gammas[i], {"property": "gap length", "i": i + 1})
        measure = 1 - sum(g.length for g in produced)
        _expect(measure > HALF, {"property": "measure", "k": i + 1, "measure": fmt(measure)})
    _expect([(g.left, g.right) for g in produced[:3]] == first, {"property": "first gaps"})
    _expect([(g.left, g.right) for g in produced[:12]] == simulate_gaps(gammas, 12), {"property": "re-simulation"})
    _expect(sorted(produced) == list(t.gaps), {"property": "thread matches stream"})
    return k, {"measure_64": fmt(t.measure())}


# -- lipschitz lemmas -----------------------------------------------------------------------


def random_map(rng: random.Random, domain: Thread, codomain: Thread, step: Fraction) -> PLMap:
    support = domain.sample_points(step)
    values = codomain.sample_points(Fraction(1, 16))
    out = [ZERO] + [rng.choice(values) for _ in support[1:-1]] + [codomain.length]
    return PLMap(domain, codomain, tuple(zip(support, out)))


def lip_oracle(F: PLMap) -> Fraction:
    """Pairwise maximum recomputed from the raw three-term formula."""

    def d(l, a, x, y):
        return min(abs(x - y), x + (l - y) + a, y + (l - x) + a)

    T, S = F.domain, F.codomain
    return max(
        (d(S.length, S.width, v, w) / d(T.length, T.width, x, y) for (x, v), (y, w) in itertools.combinations(F.points, 2)),
        default=ZERO,
    )


LIP_FIXTURES = (
    ("T_A->T_LINE", fixture_ta, fixture_line, Fraction(1, 8)),
    ("T_LINE->T_A", fixture_line, fixture_ta, Fraction(1, 8)),
    ("T_A->T_A", fixture_ta, fixture_ta, Fraction(1, 16)),
    ("T_LINE/2->T_A", lambda: fixture_line(HALF), fixture_ta, Fraction(1, 8)),
)


def lipschitz_lemma_checks(rng: random.Random, count: int) -> dict:
    """Run the lemma checks on ``count`` random maps; raises on the first failure."""
    stats = {"maps": 0, "jump_witnesses": 0, "jump_checks": 0, "clips": 0}
    for n in range(count):
        name, dom, cod, step = LIP_FIXTURES[n % len(LIP_FIXTURES)]
        F = random_map(rng, dom(), cod(), step)
        K = lip_const(F)
        _expect(K == lip_oracle(F), {"fixture": name, "map": serialize.plmap_to_json(F), "property": "lip oracle"})
        G = monotone_regularize(F)
        _expect(G.is_monotone() and G.is_endpoint_fixing(), {"fixture": name, "map": serialize.plmap_to_json(F), "property": "regularize shape"})
        _expect(lip_const(G) <= K, {"fixture": name, "map": serialize.plmap_to_json(F), "property": "regularize increases lip"})
        S = G.codomain
        for Cs in S.gaps:
            Ct = find_jumping_gap(G, Cs)
            _expect(jumps_over(G, Ct, Cs), {"fixture": name, "map": serialize.plmap_to_json(G), "gap": str(Cs), "property": "jumping gap"})
            J = [g for g in S.gaps if jumps_over(G, Ct, g)]
            for Kc in (Fraction(1, 2), ONE, Fraction(2), Fraction(3)):
                if not Ct.length < S.width / Kc:
                    continue
                stats["jump_checks"] += 1
                witness = jump_bound_violation(G, Ct, J, Kc)
                if witness is not None:
                    stats["jump_witnesses"] += 1
                    _expect(not check_interval_criterion(G, Kc), {"fixture": name, "map": serialize.plmap_to_json(G), "K": fmt(Kc), "property": "witness without REJECT"})
        # clip: pin the extremes of F to random values lo < hi, keep the interior
        values = sorted(set(F.values))
        lo, hi = sorted(rng.sample(values, 2)) if len(values) > 1 else (ZERO, ZERO)
        if lo < hi:
            pinned = F.with_values([lo, *F.values[1:-1], hi])
            try:
                C = clip(pinned, lo, hi)
            except PreconditionGap:
                pass
            else:
                stats["clips"] += 1
                _expect(lip_const(C) <= lip_const(pinned), {"fixture": name, "map": serialize.plmap_to_json(pinned), "property": "clip increases lip"})
        _expect(check_interval_criterion(F, K).ok, {"fixture": name, "map": serialize.plmap_to_json(F), "property": "criterion at lip_const"})
        stats["maps"] += 1
    return stats


def suite_lipschitz(rng: random.Random) -> tuple[int, dict]:
    stats = lipschitz_lemma_checks(rng, 200)
    return stats["maps"], stats


# -- gamma* --------------------------------------------------------------------------------


def standard_family():
    return [FamilyThread.from_rule("half-bound", w) for w in (HALF, Fraction(1, 3), Fraction(1, 4))]


def suite_gammastar(rng: random.Random) -> tuple[int, dict]:
    K, eps = Fraction(2), Fraction(1, 4)
    run = gamma_star_prefix(standard_family(), K, eps, 5)
    _expect(run.produced[0] == Fraction(1, 64), {"property": "gamma*_1", "value": fmt(run.produced[0])})
    for k, g in enumerate(run.produced, start=1):
        _expect(0 < g < pow2(-(k + 1)) * eps / K, {"property": "gamma bound", "k": k})
    verdict = check_trace(run)
    _expect(verdict.ok, {"property": "trace", "reason": verdict.reason})
    again = gamma_star_prefix(standard_family(), K, eps, 5)
    _expect(serialize.dumps(serialize.run_to_json(run)) == serialize.dumps(serialize.run_to_json(again)), {"property": "determinism"})
    return len(run.produced), {"gamma_star": [fmt(g) for g in run.produced]}


def suite_impossibility(rng: random.Random, grid: Fraction = Fraction(1, 128)) -> tuple[int, dict]:
    K = Fraction(2)
    family = standard_family()
    run = gamma_star_prefix(family, K, Fraction(1, 4), 5)
    targets = [m.truncation(5) for m in family]
    checked = 0
    for target in targets:
        cert = jump_infeasibility(target, run.produced, K, 5)
        _expect(cert.infeasible, {"property": "certificate", "target_width": fmt(target.width)})
        for m in family:
            source = build_thread(GammaPrefix(run.produced), 5, m.width)
            found = brute_force_map_search(source, target, K, grid)
            _expect(found is None, {"property": "brute force found a map", "source_width": fmt(m.width), "target_width": fmt(target.width)})
            checked += 1
    return checked, {"grid": fmt(grid)}


# -- skein ---------------------------------------------------------------------------------------


def flattened_distances(tr) -> dict:
    """All-pairs shortest paths over the graph of thread segments and the A-B edge."""
    G = nx.Graph()
    G.add_edge(A, B, weight=HALF)
    for rec in tr.threads:
        nodes = [rec.parents[0], *rec.points, rec.parents[1]]
        coords = [ZERO, *(p.coord for p in rec.points), ONE]
        for i in range(len(nodes) - 1):
            G.add_edge(nodes[i], nodes[i + 1], weight=coords[i + 1] - coords[i])
    return dict(nx.all_pairs_dijkstra_path_length(G, weight="weight"))


def suite_skein(rng: random.Random) -> tuple[int, dict]:
    tr = build_skein(SkeinConfig(depth=2))
    session = Session()
    _expect(len(tr.points) <= 200, {"property": "size", "points": len(tr.points)})
    reg = registry_check(tr)
    _expect(reg.ok, {"property": "registry", "reason": reg.reason, "point": reg.witness})
    oracle = flattened_distances(tr)
    checked = 0
    for p in tr.points:
        for q in tr.points:
            _expect(session.distance(p, q) == oracle[p][q], {"property": "flattened oracle", "pair": [address(p), address(q)]})
            checked += 1
    for rec in tr.threads:
        pts = [rec.parents[0], *rec.points, rec.parents[1]]
        coords = [ZERO, *(p.coord for p in rec.points), ONE]
        width = session.distance(*rec.parents)
        for (p, x), (q, y) in itertools.combinations(zip(pts, coords), 2):
            _expect(session.distance(p, q) == rec.thread.with_width(width)._d(x, y), {"property": "thread embedding", "pair": [address(p), address(q)]})
    ball = in_ball(tr, 1, session)
    verdict = stability_report(tr, 1, itertools.combinations(ball, 2), session)
    _expect(verdict.ok, {"property": "stability", "reason": verdict.reason, "pair": verdict.witness})
    level1 = build_skein(SkeinConfig(depth=1))
    pts = level1.points
    for p, q, r in itertools.product(pts, repeat=3):
        _expect(session.distance(p, r) <= session.distance(p, q) + session.distance(q, r), {"property": "triangle", "triple": [address(p), address(q), address(r)]})
    return checked, {"points": len(tr.points), "ball_points": len(ball)}


def chain_and_isolation_checks(rng: random.Random, pairs: int = 100) -> dict:
    tr = build_skein(SkeinConfig(depth=2))
    session = Session()
    pts = tr.points
    longest = ZERO
    for _ in range(pairs):
        p, q = rng.sample(pts, 2)
        path = chain(tr, p, q, session)
        _expect(path[0] == p and path[-1] == q, {"property": "chain ends", "pair": [address(p), address(q)]})
        for u, v in zip(path, path[1:]):
            step = session.distance(u, v)
            longest = max(longest, step)
            _expect(step <= HALF, {"property": "chain step", "pair": [address(p), address(q)], "step": [address(u), address(v)]})
    K = Fraction(2)
    recipe = isolated_point_obstruction(tr, [A, B], A, K, session)
    _expect(recipe.chain == (A, B) and recipe.gap_budget == Fraction(1, 4), {"property": "recipe"})
    domain = recipe.instantiate(2, session.distance(A, B))
    _expect(all(g.length < recipe.gap_budget for g in domain.gaps), {"property": "recipe gaps"})
    codomain = line(1, recipe.eps)  # A at 0, B at 1
    support = domain.sample_points(Fraction(1, 8))
    in_s2 = lambda v: v == 1  # noqa: E731
    candidates = 0
    for bits in itertools.product((ZERO, ONE), repeat=len(support) - 2):
        F = PLMap(domain, codomain, tuple(zip(support, (ZERO, *bits, ONE))))
        candidates += 1
        witness = separation_violation(F, 0, recipe.eps, K, in_s2=in_s2)
        _expect(witness is not None, {"property": "no separation witness", "values": [fmt(v) for v in F.values]})
        _expect(witness["codomain_distance"] > K * witness["domain_distance"], {"property": "weak witness"})
        _expect(lip_const(F) > K, {"property": "K-Lipschitz retraction exists"})
    return {"pairs": pairs, "longest_step": fmt(longest), "candidates": candidates}


def suite_chain(rng: random.Random) -> tuple[int, dict]:
    stats = chain_and_isolation_checks(rng)
    return stats["pairs"] + stats["candidates"], stats


# -- serialization -----------------------------------------------------------------------------


def suite_round_trip(rng: random.Random) -> tuple[int, dict]:
    objects = [
        (fixture_ta(), serialize.thread_from_json),
        (random_map(rng, fixture_ta(), fixture_line(), Fraction(1, 8)), serialize.plmap_from_json),
        (gamma_star_prefix(standard_family(), 2, Fraction(1, 4), 3), serialize.run_from_json),
        (jump_infeasibility(fixture_ta(), [Fraction(1, 8)], 1, 1), serialize.certificate_from_json),
        (jump_infeasibility(fixture_ta(), [Fraction(1, 64)], 2, 1), serialize.certificate_from_json),
        (build_skein(SkeinConfig(depth=2)), serialize.skein_from_json),
    ]
    import json

    for obj, load in objects:
        text = serialize.dumps(serialize.to_json(obj))
        back = load(json.loads(text))
        _expect(back == obj, {"property": "round trip", "type": type(obj).__name__})
        _expect(serialize.dumps(serialize.to_json(back)) == text, {"property": "stable bytes", "type": type(obj).__name__})
    return len(objects), {}


def suite_exactnum(rng: random.Random) -> tuple[int, dict]:
    from math import gcd

    for _ in range(500):
        a, b, c = (Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**6)) for _ in range(3))
        _expect((a + b) + c == a + (b + c), {"property": "associativity", "values": [fmt(a), fmt(b), fmt(c)]})
        _expect(a * (b + c) == a * b + a * c, {"property": "distributivity", "values": [fmt(a), fmt(b), fmt(c)]})
        for v in (a + b, a * b, a - c):
            _expect(gcd(v.numerator, v.denominator) == 1 and v.denominator > 0, {"property": "lowest terms", "value": fmt(v)})
        _expect((a < b) == (a.numerator * b.denominator < b.numerator * a.denominator), {"property": "order", "values": [fmt(a), fmt(b)]})
    return 500, {}


SUITES: dict[str, Callable[[random.Random], tuple[int, dict]]] = {
    "exactnum": suite_exactnum,
    "thread_metric": suite_thread_metric,
    "cantor": suite_cantor,
    "lipschitz": suite_lipschitz,
    "gammastar": suite_gammastar,
    "impossibility": suite_impossibility,
    "skein": suite_skein,
    "chain_isolation": suite_chain,
    "round_trip": suite_round_trip,
}


def run_suite(name: str, seed: int) -> SuiteResult:
    rng = random.Random(f"{seed}:{name}")
    start = time.perf_counter()
    try:
        checked, detail = SUITES[name](rng)
        result = SuiteResult(name, True, checked, None, detail)
    except _Fail as fail:
        result = SuiteResult(name, False, 0, fail.witness)
    except Exception as exc:  # an unexpected error is a failure with its message as witness
        result = SuiteResult(name, False, 0, {"error": type(exc).__name__, "message": str(exc)})
    result.seconds = time.perf_counter() - start
    return result


def verification_report(seed: int, names: Optional[list[str]] = None, timings: bool = False) -> dict:
    names = list(SUITES) if names is None else names
    results = [run_suite(n, seed) for n in names]
    return {
        "seed": seed,
        "suites": [r.to_json(timings) for r in results],
        "passed": all(r.passed for r in results),
    }
