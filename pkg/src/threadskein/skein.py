"""Finite-depth skein truncations.

``Sk(0)`` is two points ``A`` and ``B`` at distance 1/2.  Stage ``d + 1``
attaches, to selected pairs ``(p, q)`` with ``0 < d(p, q) <= 1/2`` and at
least one point new at stage ``d``, a few threads of length 1 and width
``d(p, q)``.  Only sampled thread points are materialized, but distances
between them are those of the full space: attaching more threads never
shortens an existing distance.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Union

from .cantor import build_thread
from .errors import (
    Ambiguous,
    CriterionMismatch,
    NotIsolated,
    NotMaterialized,
    OutsideStabilityBall,
    PairGuard,
)
from .exactnum import ONE, ZERO, Q, RationalLike, Verdict, fmt, pow2
from .thread import Thread

HALF = Fraction(1, 2)
BALL = Fraction(1, 8)


@dataclass(frozen=True)
class BasePoint:
    label: str

    def __post_init__(self):
        if self.label not in ("A", "B"):
            raise ValueError("base points are A and B")


@dataclass(frozen=True)
class InnerPoint:
    """The point at ``coord`` on thread ``gamma_id`` attached to ``parents``."""

    parents: tuple
    gamma_id: int
    coord: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coord", Q(self.coord))
        if not 0 < self.coord < 1:
            raise ValueError("inner coordinates lie strictly between 0 and 1")
        if len(self.parents) != 2 or self.parents[0] == self.parents[1]:
            raise ValueError("an inner point needs two distinct parents")

    @property
    def thread_key(self) -> tuple:
        return (self.parents, self.gamma_id)


SkeinPoint = Union[BasePoint, InnerPoint]
A = BasePoint("A")
B = BasePoint("B")


def make_point(parents: Sequence[SkeinPoint], gamma_id: int, coord: RationalLike) -> SkeinPoint:
    """Address constructor; coordinates 0 and 1 are the parents themselves."""
    coord = Q(coord)
    if coord == 0:
        return parents[0]
    if coord == 1:
        return parents[1]
    return InnerPoint(tuple(parents), gamma_id, coord)


@lru_cache(maxsize=None)
def order_of(p: SkeinPoint) -> int:
    """0 for base points, otherwise one more than the larger parent order."""
    if isinstance(p, BasePoint):
        return 0
    return 1 + max(order_of(p.parents[0]), order_of(p.parents[1]))


@lru_cache(maxsize=None)
def address(p: SkeinPoint) -> str:
    if isinstance(p, BasePoint):
        return p.label
    x, y = p.parents
    return f"({address(x)},{address(y)})#{p.gamma_id}@{fmt(p.coord)}"


_TOKEN = re.compile(r"\s*(?:(A|B)|(\()|(,)|(\))|#(\d+)@(-?\d+(?:/\d+)?))")


def parse_address(text: str) -> SkeinPoint:
    """Inverse of :func:`address`.

    >>> address(parse_address("(A,B)#1@1/16"))
    '(A,B)#1@1/16'
    """
    tokens, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad address near {text[pos:]!r}")
        tokens.append(m)
        pos = m.end()

    def parse(i):
        tok = tokens[i]
        if tok.group(1):
            return BasePoint(tok.group(1)), i + 1
        if not tok.group(2):
            raise ValueError("expected A, B or '('")
        left, i = parse(i + 1)
        if not tokens[i].group(3):
            raise ValueError("expected ','")
        right, i = parse(i + 1)
        if not tokens[i].group(4):
            raise ValueError("expected ')'")
        tail = tokens[i + 1]
        if not tail.group(5):
            raise ValueError("expected '#id@coord'")
        return make_point((left, right), int(tail.group(5)), tail.group(6)), i + 2

    try:
        point, end = parse(0)
    except IndexError:
        raise ValueError(f"truncated address {text!r}") from None
    if end != len(tokens):
        raise ValueError(f"trailing input in address {text!r}")
    return point


def point_key(p: SkeinPoint) -> tuple:
    return (order_of(p), address(p))


# -- distances ---------------------------------------------------------------


class Session:
    """Memoized exact distance evaluation; one per query context."""

    def __init__(self):
        self._memo: dict = {}

    def width(self, p: InnerPoint) -> Fraction:
        return self.distance(*p.parents)

    def to_parents(self, p: InnerPoint) -> tuple[Fraction, Fraction]:
        """In-thread distances from ``p`` to its first and second parent."""
        a, c = self.width(p), p.coord
        return min(c, 1 - c + a), min(1 - c, c + a)

    def distance(self, x: SkeinPoint, y: SkeinPoint) -> Fraction:
        if x == y:
            return ZERO
        key = (x, y)
        memo = self._memo
        if key in memo:
            return memo[key]
        if isinstance(x, BasePoint) and isinstance(y, BasePoint):
            value = HALF
        elif isinstance(x, InnerPoint) and isinstance(y, InnerPoint) and x.thread_key == y.thread_key:
            a = self.width(x)
            lo, hi = sorted((x.coord, y.coord))
            value = min(hi - lo, lo + (1 - hi) + a)
        else:
            if point_key(x) < point_key(y):
                x, y = y, x
            # x has the higher order: route through one of its parents
            dp, dq = self.to_parents(x)
            p, q = x.parents
            value = min(dp + self.distance(p, y), dq + self.distance(q, y))
        memo[key] = memo[(key[1], key[0])] = value
        return value


# -- truncations ----------------------------------------------------------------


@dataclass(frozen=True)
class SkeinConfig:
    depth: int
    gammas: int = 2
    grid: Fraction = Fraction(1, 16)
    gaps_per_thread: int = 2
    pair_limit: Optional[int] = 5
    pair_guard: int = 10_000

    def __post_init__(self):
        object.__setattr__(self, "grid", Q(self.grid))
        if self.depth < 0 or self.gammas < 1 or self.gaps_per_thread < 0:
            raise ValueError("bad skein configuration")


@dataclass(frozen=True)
class ThreadRecord:
    parents: tuple
    gamma_id: int
    thread: Thread
    points: tuple  # materialized interior points by coordinate

    @property
    def key(self) -> tuple:
        return (self.parents, self.gamma_id)


def gamma_rule(gamma_id: int) -> str:
    """Thread ``g`` uses gap lengths ``2^-(i + 1 + g)``."""
    return f"dyadic:{gamma_id}"


@dataclass(frozen=True)
class SkeinTruncation:
    config: SkeinConfig
    generations: tuple[tuple[SkeinPoint, ...], ...]
    threads: tuple[ThreadRecord, ...]
    _index: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        self._index["points"] = frozenset(p for g in self.generations for p in g)
        self._index["threads"] = {t.key: t for t in self.threads}
        self._index["session"] = Session()

    @property
    def depth(self) -> int:
        return self.config.depth

    @property
    def points(self) -> list[SkeinPoint]:
        return [p for g in self.generations for p in g]

    def __contains__(self, p) -> bool:
        return p in self._index["points"]

    def require(self, *ps):
        for p in ps:
            if p not in self:
                raise NotMaterialized(f"{address(p)} is not materialized")

    def thread_of(self, p: InnerPoint) -> ThreadRecord:
        self.require(p)
        return self._index["threads"][p.thread_key]

    def session(self) -> Session:
        """A fresh query session."""
        return Session()

    @property
    def shared_session(self) -> Session:
        return self._index["session"]

    def upto(self, beta: int) -> list[SkeinPoint]:
        """Materialized points of ``Sk(beta)``."""
        return [p for g in self.generations[: beta + 1] for p in g]


def _select_pairs(candidates: list, limit: Optional[int], guard: int) -> list:
    if limit is None:
        if len(candidates) > guard:
            raise PairGuard(f"{len(candidates)} pairs exceed the guard {guard}")
        return candidates
    if len(candidates) <= limit:
        return candidates
    # evenly spaced over the canonical order
    return [candidates[(i * len(candidates)) // limit] for i in range(limit)]


def build_skein(config: SkeinConfig) -> SkeinTruncation:
    session = Session()
    generations: list[tuple] = [(A, B)]
    threads: list[ThreadRecord] = []
    for level in range(config.depth):
        existing = [p for g in generations for p in g]
        new = set(generations[level])
        pairs = set()
        for p in existing:
            for q in new:
                if p == q:
                    continue
                first, second = sorted((p, q), key=point_key)
                if 0 < session.distance(first, second) <= HALF:
                    pairs.add((first, second))
        candidates = sorted(pairs, key=lambda pq: (point_key(pq[0]), point_key(pq[1])))
        born = []
        for parents in _select_pairs(candidates, config.pair_limit, config.pair_guard):
            width = session.distance(*parents)
            for gid in range(1, config.gammas + 1):
                thread = build_thread(gamma_rule(gid), config.gaps_per_thread, width)
                coords = [c for c in thread.sample_points(config.grid) if 0 < c < 1]
                pts = tuple(InnerPoint(parents, gid, c) for c in coords)
                threads.append(ThreadRecord(parents, gid, thread, pts))
                born.extend(pts)
        generations.append(tuple(born))
    return SkeinTruncation(config, tuple(generations), tuple(threads))


def skein_distance(tr: SkeinTruncation, p: SkeinPoint, q: SkeinPoint, session: Optional[Session] = None) -> Fraction:
    tr.require(p, q)
    return (session or tr.shared_session).distance(p, q)


def registry_check(tr: SkeinTruncation) -> Verdict:
    """Every non-base point lies inside exactly one materialized thread, at a thread point."""
    seen: dict = {}
    for rec in tr.threads:
        for p in rec.points:
            if p in seen:
                return Verdict(False, "point on two threads", address(p))
            seen[p] = rec
            if not rec.thread.is_point(p.coord) or not 0 < p.coord < 1:
                return Verdict(False, "not an interior thread point", address(p))
    for p in tr.points:
        if isinstance(p, InnerPoint) and p not in seen:
            return Verdict(False, "point without thread", address(p))
    return Verdict(True)


# -- boundness and ancestors -------------------------------------------------------


def is_bound(tr: SkeinTruncation, p: InnerPoint, s: SkeinPoint, session: Optional[Session] = None) -> bool:
    """Is ``p`` bound to its parent ``s`` within its thread?

    The closed-form criterion ``d(p, s) < d(p, other)`` and
    ``d(p, s) <= (1 - a) / 2`` is compared with the definition evaluated on
    every materialized point of order at most ``order(p)`` off the thread.
    """
    session = session or tr.shared_session
    tr.require(p)
    if s not in p.parents:
        raise ValueError("s must be a parent of p")
    other = p.parents[1] if s == p.parents[0] else p.parents[0]
    a = session.width(p)
    ds, do = session.distance(p, s), session.distance(p, other)
    closed = ds < do and ds <= (1 - a) / 2
    on_thread = set(tr.thread_of(p).points) | set(p.parents)
    level = order_of(p)
    outside = [z for z in tr.points if order_of(z) <= level and z not in on_thread]
    extensional = all(session.distance(p, z) == ds + session.distance(s, z) for z in outside)
    if closed != extensional:
        raise CriterionMismatch(
            f"closed form says {closed}, materialized points say {extensional} for {address(p)}",
            point=address(p),
        )
    return closed


def distance_to_level(tr: SkeinTruncation, p: SkeinPoint, beta: int, session: Optional[Session] = None) -> Fraction:
    session = session or tr.shared_session
    return min(session.distance(p, z) for z in tr.upto(beta))


def _nearer_parent(session: Session, p: InnerPoint) -> SkeinPoint:
    dp, dq = session.to_parents(p)
    if dp == dq:
        raise Ambiguous(f"{address(p)} is equidistant from its parents")
    return p.parents[0] if dp < dq else p.parents[1]


def ancestor(tr: SkeinTruncation, p: SkeinPoint, beta: int, session: Optional[Session] = None) -> SkeinPoint:
    """``P_beta(p)``: the nearest point of ``Sk(beta)``, found by nearer-parent descent."""
    session = session or tr.shared_session
    tr.require(p)
    if order_of(p) <= beta:
        return p
    gap = distance_to_level(tr, p, beta, session)
    if not gap < BALL:
        raise OutsideStabilityBall(f"{address(p)} is {gap} from Sk({beta})", distance=gap)
    q = p
    while order_of(q) > beta:
        q = _nearer_parent(session, q)
    nearest = [z for z in tr.upto(beta) if session.distance(p, z) == gap]
    if nearest != [q]:
        raise Ambiguous(f"nearest points of Sk({beta}) to {address(p)} are not the descent result")
    return q


def pseudo_ancestor(tr: SkeinTruncation, p: InnerPoint, session: Optional[Session] = None) -> SkeinPoint:
    """The parent of ``p`` that is not its nearer one."""
    session = session or tr.shared_session
    tr.require(p)
    near = _nearer_parent(session, p)
    return p.parents[1] if near == p.parents[0] else p.parents[0]


def in_ball(tr: SkeinTruncation, beta: int, session: Optional[Session] = None) -> list[SkeinPoint]:
    """Materialized points strictly within 1/8 of ``Sk(beta)``."""
    session = session or tr.shared_session
    return [p for p in tr.points if order_of(p) <= beta or distance_to_level(tr, p, beta, session) < BALL]


def stability_report(tr: SkeinTruncation, beta: int, pairs: Iterable, session: Optional[Session] = None) -> Verdict:
    """Check the three-term decomposition and the 1-Lipschitz property of ``P_beta``."""
    session = session or tr.shared_session
    d = session.distance
    checked = 0
    for p, q in pairs:
        pp, pq = ancestor(tr, p, beta, session), ancestor(tr, q, beta, session)
        if d(pp, pq) > d(p, q):
            return Verdict(False, "retraction is not 1-Lipschitz", (address(p), address(q)))
        if pp != pq and d(p, q) != d(p, pp) + d(pp, pq) + d(pq, q):
            return Verdict(False, "three-term decomposition fails", (address(p), address(q)))
        checked += 1
    return Verdict(True, f"{checked} pairs", checked)


# -- chains, closures, obstructions ------------------------------------------------------


def chain(tr: SkeinTruncation, p: SkeinPoint, q: SkeinPoint, session: Optional[Session] = None) -> list[SkeinPoint]:
    """A path from ``p`` to ``q`` with steps of length at most 1/2.

    The higher-order end descends to its nearer parent (at most 1/2 away on
    a thread of length 1) until both ends are base points.
    """
    session = session or tr.shared_session
    tr.require(p, q)
    head, tail = [p], [q]
    x, y = p, q
    while x != y:
        if isinstance(x, BasePoint) and isinstance(y, BasePoint):
            break
        if point_key(x) >= point_key(y):
            x = _nearest_parent_loose(session, x)
            head.append(x)
        else:
            y = _nearest_parent_loose(session, y)
            tail.append(y)
    if x == y:
        head.pop()
    return head + tail[::-1]


def _nearest_parent_loose(session: Session, p: InnerPoint) -> SkeinPoint:
    # ties (midpoints) go to the first parent; both are within 1/2
    dp, dq = session.to_parents(p)
    return p.parents[0] if dp <= dq else p.parents[1]


def ancestor_closure(tr: SkeinTruncation, sample: Iterable[SkeinPoint], session: Optional[Session] = None) -> frozenset:
    """Smallest superset closed under taking ancestors inside the 1/8 balls."""
    session = session or tr.shared_session
    out = set(sample)
    tr.require(*out)
    work = list(out)
    while work:
        x = work.pop()
        for beta in range(order_of(x)):
            if distance_to_level(tr, x, beta, session) < BALL:
                anc = ancestor(tr, x, beta, session)
                if anc not in out:
                    out.add(anc)
                    work.append(anc)
    return frozenset(out)


@dataclass(frozen=True)
class ObstructionRecipe:
    """Data showing why an isolated point blocks K-Lipschitz retractions.

    Any thread along ``chain`` whose gaps are all shorter than
    ``gap_budget = eps / K`` cannot be retracted onto ``S`` with constant
    ``K``: the retraction must leave ``p``'s part of ``S`` somewhere, and a
    short gap cannot bridge a jump of ``eps``.
    """

    point: SkeinPoint
    chain: tuple
    eps: Fraction
    K: Fraction
    gap_budget: Fraction

    @property
    def gamma_scale(self) -> Fraction:
        return min(ONE, self.gap_budget) / 2

    def gammas(self, k: int) -> tuple[Fraction, ...]:
        """``gamma_i = c * 2^-(i+1)``; every term is below the gap budget."""
        return tuple(self.gamma_scale * pow2(-(i + 1)) for i in range(1, k + 1))

    def instantiate(self, k: int, width: RationalLike) -> Thread:
        return build_thread(self.gammas(k), k, width)


def isolated_point_obstruction(
    tr: SkeinTruncation,
    S: Iterable[SkeinPoint],
    p: SkeinPoint,
    K: RationalLike,
    session: Optional[Session] = None,
) -> ObstructionRecipe:
    session = session or tr.shared_session
    K = Q(K)
    members = sorted(set(S), key=point_key)
    tr.require(*members)
    if len(members) < 2 or p not in members:
        raise NotIsolated("need at least two points including p")
    others = [(session.distance(p, s), point_key(s), s) for s in members if s != p]
    eps, _, nearest = min(others)
    if eps == 0:
        raise NotIsolated(f"{address(p)} is not isolated")
    return ObstructionRecipe(p, tuple(chain(tr, p, nearest, session)), eps, K, eps / K)
