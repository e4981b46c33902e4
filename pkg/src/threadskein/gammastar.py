"""The diagonal gamma* sequence and two independent impossibility checks.

``gamma_star_prefix`` builds gap bounds so small that no K-Lipschitz
endpoint-fixing map can send a thread obeying them onto any family thread.
``jump_infeasibility`` certifies this combinatorially from gap-jump
bookkeeping and ``brute_force_map_search`` looks for a counterexample map
on a grid.
"""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .cantor import GapStream
from .errors import (
    DeepeningExhausted,
    FactorialGuard,
    MeasureViolation,
    PreconditionFailed,
    SearchGuard,
)
from .exactnum import OpenInterval, Q, RationalLike, Verdict, pow2, union_contains
from .lipmap import PLMap, lip_const, sweeping
from .thread import Thread

RHO = Fraction(1, 2)
FACTORIAL_GUARD = 7
DEFAULT_SEARCH_GUARD = 10**6


def guard_value(default: int) -> int:
    """A search guard, raised by the ``SKEIN_GUARD_OVERRIDE`` environment variable."""
    override = os.environ.get("SKEIN_GUARD_OVERRIDE")
    return max(default, int(override)) if override else default


# -- family members ---------------------------------------------------------


@dataclass(frozen=True)
class FamilyThread:
    """A family thread: a gap stream that can be deepened, or a fixed thread."""

    width: Fraction
    stream: Optional[GapStream] = None
    fixed: Optional[Thread] = None
    depth: int = 8

    def __post_init__(self):
        object.__setattr__(self, "width", Q(self.width))
        if (self.stream is None) == (self.fixed is None):
            raise ValueError("give exactly one of stream or fixed")

    @classmethod
    def from_rule(cls, rule: str, width: RationalLike, depth: int = 8) -> "FamilyThread":
        return cls(Q(width), stream=GapStream(rule), depth=depth)

    @classmethod
    def from_thread(cls, thread: Thread) -> "FamilyThread":
        return cls(thread.width, fixed=thread, depth=len(thread.gaps))

    def truncation(self, depth: int) -> Thread:
        if self.fixed is not None:
            if depth > len(self.fixed.gaps):
                raise DeepeningExhausted(f"fixed thread has only {len(self.fixed.gaps)} gaps")
            return self.fixed
        return self.stream.advance(depth).thread(self.width)

    def ordered_gaps(self, depth: int) -> list[OpenInterval]:
        """``G_1, G_2, ...`` by decreasing length at the given truncation depth."""
        thread = self.truncation(depth)
        return thread.gaps_by_length()[:depth] if self.stream is not None else thread.gaps_by_length()


# -- the run ----------------------------------------------------------------


@dataclass(frozen=True)
class SigmaRecord:
    ordering: tuple[int, ...]
    # per i = 1..k: (radius K*gamma_{j_i}, sweeping, selected index n_i)
    sweepings: tuple[OpenInterval, ...]
    selected: tuple[int, ...]


@dataclass(frozen=True)
class StepRecord:
    step: int
    thread_index: int
    depth: int
    alphas: tuple[Fraction, ...]
    gaps: tuple[OpenInterval, ...]
    sigmas: tuple[SigmaRecord, ...]
    n_omega: int
    gamma: Fraction


@dataclass(frozen=True)
class GammaStarRun:
    widths: tuple[Fraction, ...]
    K: Fraction
    eps: Fraction
    k_max: int
    produced: tuple[Fraction, ...]
    trace: tuple[StepRecord, ...] = field(default=(), compare=True)


def _select_next(gaps, covered, after, budget_hit):
    """Least ``n > after`` with ``G_n`` not inside the covered union (1-based)."""
    for n in range(after + 1, len(gaps) + 1):
        if not union_contains(covered, gaps[n - 1]):
            return n
    budget_hit()
    return None


def _run_sigma(gaps, K, gammas, ordering, deepen):
    covered: list[OpenInterval] = []
    sweeps, selected = [], []
    n_prev = 1
    for j in ordering:
        sweep = sweeping(gaps()[n_prev - 1], K * gammas[j - 1])
        covered.append(sweep)
        sweeps.append(sweep)
        while True:
            n = _select_next(gaps(), covered, n_prev, deepen)
            if n is not None:
                break
        selected.append(n)
        n_prev = n
    return SigmaRecord(tuple(ordering), tuple(sweeps), tuple(selected))


def gamma_star_prefix(
    family: Sequence[Union[FamilyThread, Thread]],
    K: RationalLike,
    eps: RationalLike,
    k_max: int,
    deepening_budget: int = 256,
    factorial_guard: int = FACTORIAL_GUARD,
) -> GammaStarRun:
    """Run the diagonal construction for ``k_max`` steps.

    Step ``k + 1`` works on family thread ``k mod N``.  Each step enumerates
    every ordering of ``1..k``, grows the union of sweepings along it and
    selects the next gap not covered; the least gap over all orderings bounds
    the new term, which is taken as ``RHO`` times the open bound.
    """
    K, eps = Q(K), Q(eps)
    if K < 1 or eps <= 0:
        raise PreconditionFailed("need K >= 1 and eps > 0")
    if k_max > factorial_guard:
        raise FactorialGuard(f"k_max={k_max} exceeds the guard {factorial_guard}")
    members = [m if isinstance(m, FamilyThread) else FamilyThread.from_thread(m) for m in family]
    if not members and k_max > 0:
        raise PreconditionFailed("empty family")
    produced: list[Fraction] = []
    trace: list[StepRecord] = []
    for k in range(k_max):
        idx = k % len(members)
        member = members[idx]
        state = {"depth": max(member.depth, 1)}
        cache: dict[int, list[OpenInterval]] = {}

        def gaps(member=member, state=state, cache=cache):
            d = state["depth"]
            if d not in cache:
                thread = member.truncation(d)
                if not thread.measure() > eps:
                    raise MeasureViolation(f"truncation at depth {d} has measure {thread.measure()} <= eps")
                cache[d] = member.ordered_gaps(d)
            return cache[d]

        def deepen(member=member, state=state):
            if member.fixed is not None or state["depth"] >= deepening_budget:
                raise DeepeningExhausted(f"no uncovered gap within {state['depth']} gaps")
            state["depth"] = min(2 * state["depth"], deepening_budget)

        bound = pow2(-(k + 2)) * eps / K
        if k == 0:
            sigmas: list[SigmaRecord] = []
            n_omega = 1
            alpha = gaps()[0].length
        else:
            sigmas = [_run_sigma(gaps, K, produced, perm, deepen) for perm in itertools.permutations(range(1, k + 1))]
            n_omega = max(s.selected[-1] for s in sigmas)
            alpha = gaps()[n_omega - 1].length
        candidates = [bound, alpha / K]
        if produced:
            # keeps the sequence strictly decreasing across different family threads
            candidates.append(produced[-1])
        gamma = RHO * min(candidates)
        produced.append(gamma)
        used = gaps()
        needed = max([n_omega] + [n for s in sigmas for n in s.selected])
        trace.append(
            StepRecord(
                step=k + 1,
                thread_index=idx,
                depth=state["depth"],
                alphas=tuple(g.length for g in used[:needed]),
                gaps=tuple(used[:needed]),
                sigmas=tuple(sigmas),
                n_omega=n_omega,
                gamma=gamma,
            )
        )
    return GammaStarRun(tuple(m.width for m in members), K, eps, k_max, tuple(produced), tuple(trace))


def check_trace(run: GammaStarRun) -> Verdict:
    """Re-check a run from its trace alone."""
    K, eps = run.K, run.eps
    prev = None
    for rec in run.trace:
        k = rec.step - 1
        gamma = rec.gamma
        if not 0 < gamma < pow2(-(rec.step + 1)) * eps / K:
            return Verdict(False, f"gamma bound fails at step {rec.step}", rec.step)
        if prev is not None and not gamma < prev:
            return Verdict(False, f"not decreasing at step {rec.step}", rec.step)
        gaps = rec.gaps
        for sig in rec.sigmas:
            if sorted(sig.ordering) != list(range(1, k + 1)):
                return Verdict(False, f"bad ordering {sig.ordering}", sig.ordering)
            n_prev, covered = 1, []
            for j, sweep, n in zip(sig.ordering, sig.sweepings, sig.selected):
                if sweep != sweeping(gaps[n_prev - 1], K * run.produced[j - 1]):
                    return Verdict(False, f"sweeping mismatch in {sig.ordering}", (sig.ordering, j))
                covered.append(sweep)
                if union_contains(covered, gaps[n - 1]):
                    return Verdict(False, f"selected gap {n} lies inside the sweepings", (sig.ordering, n))
                for m in range(n_prev + 1, n):
                    if not union_contains(covered, gaps[m - 1]):
                        return Verdict(False, f"gap {m} should have been selected", (sig.ordering, m))
                if not gaps[n - 1].length < gaps[n_prev - 1].length:
                    return Verdict(False, f"selected gap {n} not smaller than its predecessor", (sig.ordering, n))
                n_prev = n
        if rec.sigmas and rec.n_omega != max(s.selected[-1] for s in rec.sigmas):
            return Verdict(False, f"n_omega mismatch at step {rec.step}", rec.step)
        expected = [pow2(-(k + 2)) * eps / K, gaps[rec.n_omega - 1].length / K]
        if prev is not None:
            expected.append(prev)
        if gamma != RHO * min(expected):
            return Verdict(False, f"gamma formula mismatch at step {rec.step}", rec.step)
        prev = gamma
    return Verdict(True)


# -- combinatorial certificate ------------------------------------------------


@dataclass(frozen=True)
class JumpCertificate:
    target: Thread
    budgets: tuple[Fraction, ...]
    K: Fraction
    m: int
    outcome: str
    # FEASIBLE: blocks of target gaps with the budget slot covering each
    assignment: tuple[tuple[tuple[OpenInterval, ...], int], ...] = ()
    partitions_checked: int = 0

    @property
    def infeasible(self) -> bool:
        return self.outcome == "INFEASIBLE"


def _contiguous_partitions(items):
    n = len(items)
    for cuts in itertools.product((False, True), repeat=max(n - 1, 0)):
        blocks, start = [], 0
        for i, cut in enumerate(cuts, start=1):
            if cut:
                blocks.append(tuple(items[start:i]))
                start = i
        blocks.append(tuple(items[start:]))
        yield blocks


def _block_span(block) -> Fraction:
    if len(block) == 1:
        return block[0].length
    return block[-1].right - block[0].left


def jump_infeasibility(target: Thread, budgets: Sequence[RationalLike], K: RationalLike, m: int) -> JumpCertificate:
    """Can budget-bounded source gaps jump over the ``m`` largest target gaps?

    A monotone map lets each source gap jump a run of consecutive target
    gaps, and distinct source gaps jump disjoint runs.  Every contiguous
    partition of the analysed gaps is tried; a partition is realisable when
    its blocks can be matched to distinct budget slots ``b`` with
    ``K * b >= span(block)``.  Source gaps beyond the listed budgets are
    bounded by the last budget.
    """
    K = Q(K)
    budgets = tuple(Q(b) for b in budgets)
    if K <= 0:
        raise PreconditionFailed("K must be positive")
    if any(not 0 < b < target.width / K for b in budgets):
        raise PreconditionFailed("every budget must lie in (0, a_target / K)")
    if m < 0 or m > len(target.gaps):
        raise PreconditionFailed(f"m={m} exceeds the {len(target.gaps)} target gaps")
    if m == 0:
        return JumpCertificate(target, budgets, K, m, "FEASIBLE")
    if not budgets:
        raise PreconditionFailed("no budgets given")
    analysed = sorted(target.gaps_by_length()[:m])
    slots = sorted(budgets, reverse=True)
    checked = 0
    for blocks in _contiguous_partitions(analysed):
        checked += 1
        order = sorted(range(len(blocks)), key=lambda i: -_block_span(blocks[i]))
        ok, slot_of = True, {}
        for rank, bi in enumerate(order):
            budget = slots[min(rank, len(slots) - 1)]
            if K * budget < _block_span(blocks[bi]):
                ok = False
                break
            slot_of[bi] = min(rank, len(slots) - 1)
        if ok:
            assignment = tuple((blocks[i], slot_of[i]) for i in range(len(blocks)))
            return JumpCertificate(target, budgets, K, m, "FEASIBLE", assignment, checked)
    return JumpCertificate(target, budgets, K, m, "INFEASIBLE", (), checked)


# -- grid brute force -----------------------------------------------------------


def brute_force_map_search(
    source: Thread,
    target: Thread,
    K: RationalLike,
    grid_step: RationalLike,
    guard: Optional[int] = None,
) -> Optional[PLMap]:
    """Search grid maps ``source -> target`` that are non-decreasing, endpoint-fixing and K-Lipschitz.

    Supports are the grid points of each thread plus gap endpoints and
    extremes.  A dynamic programme over consecutive support points prunes to
    states that can still reach both endpoints; a depth-first search then
    checks every pair exactly.  Returns the first map found or None.
    """
    K, step = Q(K), Q(grid_step)
    guard = guard_value(DEFAULT_SEARCH_GUARD if guard is None else guard)
    xs = source.sample_points(step)
    vs = target.sample_points(step)
    n, m = len(xs), len(vs)
    if n * m > guard:
        raise SearchGuard(f"{n} x {m} states exceed the guard {guard}")

    # integer coordinates keep the inner loops cheap
    scale = math.lcm(
        *(q.denominator for q in xs + vs),
        K.denominator,
        source.width.denominator,
        target.width.denominator,
    )
    X = [int(x * scale) for x in xs]
    V = [int(v * scale) for v in vs]
    Kn, Kd = K.numerator, K.denominator
    lS, aS = int(source.length * scale), int(source.width * scale)
    lT, aT = int(target.length * scale), int(target.width * scale)

    def dS(i, j):
        x, y = X[i], X[j]
        return min(abs(x - y), x + lS - y + aS, y + lS - x + aS)

    def dT(u, w):
        x, y = V[u], V[w]
        return min(abs(x - y), x + lT - y + aT, y + lT - x + aT)

    def ok_step(i, j, u, w):
        return dT(u, w) * Kd <= Kn * dS(i, j)

    # forward reachability from F(x_0) = 0, backward from F(x_last) = l_T
    forward = [set() for _ in range(n)]
    forward[0] = {0}
    for i in range(n - 1):
        for u in forward[i]:
            forward[i + 1].update(w for w in range(u, m) if ok_step(i, i + 1, u, w))
    if m - 1 not in forward[n - 1]:
        return None
    viable = [set() for _ in range(n)]
    viable[n - 1] = {m - 1}
    for i in range(n - 2, -1, -1):
        viable[i] = {u for u in forward[i] if any(w >= u and ok_step(i, i + 1, u, w) for w in viable[i + 1])}
    if 0 not in viable[0]:
        return None

    visited = [0]
    chosen = [0] * n

    def consistent(i, w):
        for h in range(i):
            if dT(chosen[h], w) * Kd > Kn * dS(h, i):
                return False
        return True

    def dfs(i):
        if i == n:
            return True
        for w in sorted(viable[i]):
            if w < chosen[i - 1]:
                continue
            visited[0] += 1
            if visited[0] > guard:
                raise SearchGuard(f"search visited more than {guard} states")
            if consistent(i, w):
                chosen[i] = w
                if dfs(i + 1):
                    return True
        return False

    if not dfs(1):
        return None
    F = PLMap(source, target, tuple((xs[i], vs[chosen[i]]) for i in range(n)))
    assert lip_const(F) <= K
    return F
