"""Maps between threads given by their values on a finite support.

A :class:`PLMap` is defined only on its support, which always contains both
extremes and every gap endpoint of the domain.  Consequently the finite
support behaves as a thread in its own right: consecutive support points
play the role of gaps ("spacings") in every argument that needs gaps.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .errors import (
    LipIncreased,
    NoNearbyPoint,
    NotEndpointFixing,
    NotInN,
    NotMonotone,
    NotSeparableAtTruncation,
    PreconditionFailed,
    PreconditionGap,
)
from .exactnum import ZERO, OpenInterval, Q, RationalLike, Verdict
from .thread import ExtendedInterval, Kind, Thread


@dataclass(frozen=True)
class PLMap:
    domain: Thread
    codomain: Thread
    points: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        pts = tuple(sorted((Q(x), Q(v)) for x, v in self.points))
        xs = [x for x, _ in pts]
        if len(set(xs)) != len(xs):
            raise ValueError("support points must be distinct")
        for x, v in pts:
            self.domain.point(x)
            self.codomain.point(v)
        required = {ZERO, self.domain.length, *self.domain.gap_endpoints()}
        missing = required - set(xs)
        if missing:
            raise ValueError(f"support misses extremes/gap endpoints: {sorted(missing)}")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_function(cls, domain: Thread, codomain: Thread, support: Iterable, f: Callable) -> "PLMap":
        return cls(domain, codomain, tuple((Q(x), Q(f(Q(x)))) for x in support))

    @property
    def support(self) -> list[Fraction]:
        return [x for x, _ in self.points]

    @property
    def values(self) -> list[Fraction]:
        return [v for _, v in self.points]

    def __call__(self, x: RationalLike) -> Fraction:
        x = Q(x)
        xs = self.support
        i = bisect.bisect_left(xs, x)
        if i == len(xs) or xs[i] != x:
            raise KeyError(f"{x} is not a support point")
        return self.points[i][1]

    def with_values(self, values: Sequence[Fraction]) -> "PLMap":
        return PLMap(self.domain, self.codomain, tuple(zip(self.support, values)))

    def is_monotone(self) -> bool:
        vs = self.values
        return all(a <= b for a, b in zip(vs, vs[1:]))

    def is_endpoint_fixing(self) -> bool:
        vs = self.values
        return vs[0] == 0 and vs[-1] == self.codomain.length

    def spacings(self) -> list[OpenInterval]:
        """Consecutive support intervals; every domain gap is one of them."""
        xs = self.support
        return [OpenInterval(a, b) for a, b in zip(xs, xs[1:])]


def lip_const(F: PLMap) -> Fraction:
    """Exact Lipschitz constant over all support pairs."""
    xs, vs = F.support, F.values
    dT, dS = F.domain._d, F.codomain._d
    best = ZERO
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            ratio = dS(vs[i], vs[j]) / dT(xs[i], xs[j])
            if ratio > best:
                best = ratio
    return best


def check_interval_criterion(F: PLMap, K: RationalLike) -> Verdict:
    """Decide ``lip_const(F) <= K`` through the extremes-plus-segment criterion."""
    K = Q(K)
    xs, vs = F.support, F.values
    dS = F.codomain._d
    if dS(vs[0], vs[-1]) > K * F.domain.width:
        return Verdict(False, "extremes", (xs[0], xs[-1]))
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            if dS(vs[i], vs[j]) > K * (xs[j] - xs[i]):
                return Verdict(False, "pair", (xs[i], xs[j]))
    return Verdict(True)


def _require_endpoint_fixing(F: PLMap):
    if not F.is_endpoint_fixing():
        raise NotEndpointFixing("map must send 0 to 0 and the domain length to the codomain length")


def _require_monotone(F: PLMap):
    if not F.is_monotone():
        raise NotMonotone("map must be non-decreasing on its support")


def _long_spacing(F: PLMap, K: Fraction) -> Optional[OpenInterval]:
    """Longest support spacing of length >= a_S / K (leftmost on ties), if any."""
    if K == 0:
        return None
    bound = F.codomain.width / K
    long = [s for s in F.spacings() if s.length >= bound]
    if not long:
        return None
    return min(long, key=lambda s: (-s.length, s.left))


def monotone_regularize(F: PLMap) -> PLMap:
    """A non-decreasing endpoint-fixing map whose Lipschitz constant does not exceed F's.

    An already non-decreasing map is returned as is.  If some spacing is at
    least ``a_S / lip_const(F)`` long the two-step map across it is returned;
    otherwise the running maximum.
    """
    _require_endpoint_fixing(F)
    if F.is_monotone():
        return F
    cut = _long_spacing(F, lip_const(F))
    if cut is not None:
        top = F.codomain.length
        return F.with_values([ZERO if x <= cut.left else top for x in F.support])
    running, out = ZERO, []
    for v in F.values:
        running = max(running, v)
        out.append(running)
    return F.with_values(out)


def clip(F: PLMap, A: RationalLike, B: RationalLike) -> PLMap:
    """Clamp the values into ``[A, B]_S``; the result maps into ``subthread(S, A, B)``.

    Values are expressed in the coordinates of the subthread (shifted by ``-A``).
    """
    A, B = F.codomain.point(A), F.codomain.point(B)
    if not A < B:
        raise PreconditionFailed("clip needs A < B")
    vs = F.values
    if vs[0] != A or vs[-1] != B:
        raise PreconditionFailed("clip needs F(0) = A and F(l) = B")
    cut = _long_spacing(F, lip_const(F))
    if cut is not None:
        raise PreconditionGap(f"spacing {cut} is too long for the clamp to stay Lipschitz", spacing=cut)
    target = F.codomain.subthread(A, B)
    clamped = [min(max(v, A), B) - A for v in vs]
    return PLMap(F.domain, target, tuple(zip(F.support, clamped)))


def jumps_over(F: PLMap, Ct: OpenInterval, Cs: OpenInterval) -> bool:
    """Does the domain gap ``Ct`` jump over the codomain gap ``Cs``?"""
    _require_monotone(F)
    try:
        lo, hi = F(Ct.left), F(Ct.right)
    except KeyError as exc:
        raise PreconditionFailed("domain gap endpoints must be support points") from exc
    return lo <= Cs.left and hi >= Cs.right


def find_jumping_gap(F: PLMap, Cs: OpenInterval) -> OpenInterval:
    """The domain spacing that jumps over ``Cs``: last value below it to first value above it."""
    _require_monotone(F)
    _require_endpoint_fixing(F)
    xs, vs = F.support, F.values
    e_minus = max(v for v in vs if v <= Cs.left)
    e_plus = min(v for v in vs if v >= Cs.right)
    x_minus = max(x for x, v in zip(xs, vs) if v == e_minus)
    y_plus = min(x for x, v in zip(xs, vs) if v == e_plus)
    return OpenInterval(x_minus, y_plus)


def sweeping(g: OpenInterval, r: RationalLike) -> OpenInterval:
    """``D_r(a, b) = (b - r, a + r)``; empty when ``r <= (b - a) / 2``.

    >>> str(sweeping(OpenInterval(Fraction(1, 2), Fraction(5, 8)), Fraction(1, 4)))
    '(3/8, 3/4)'
    """
    r = Q(r)
    if r <= 0:
        raise ValueError("sweeping radius must be positive")
    if g.is_empty:
        raise ValueError("cannot sweep an empty interval")
    lo, hi = g.right - r, g.left + r
    if lo < hi:
        return OpenInterval(lo, hi)
    return OpenInterval.empty_at((g.left + g.right) / 2)


def span(gaps: Sequence[OpenInterval]) -> Fraction:
    """Smallest length a jumping gap's image must cover.

    For two or more gaps this is ``max_{j != j'} |y_j - x_j'|``; a single gap
    contributes its own length.
    """
    gaps = list(gaps)
    if not gaps:
        raise ValueError("span of no gaps")
    if len(gaps) == 1:
        return gaps[0].length
    return max(
        abs(gj.right - gk.left) for j, gj in enumerate(gaps) for k, gk in enumerate(gaps) if j != k
    )


def jump_bound_violation(F: PLMap, Ct: OpenInterval, J: Sequence[OpenInterval], K: RationalLike):
    """Witness that ``F`` cannot be K-Lipschitz because ``Ct`` jumps too far, or None."""
    K = Q(K)
    if K <= 0:
        raise PreconditionFailed("K must be positive")
    if not (F.is_monotone() and F.is_endpoint_fixing()):
        raise PreconditionFailed("map must be non-decreasing and endpoint-fixing")
    if not Ct.length < F.codomain.width / K:
        raise PreconditionFailed("jumping gap is not shorter than a_S / K")
    if not J:
        raise PreconditionFailed("no jumped gaps given")
    if not all(jumps_over(F, Ct, Cs) for Cs in J):
        raise PreconditionFailed("some gap of J is not jumped by Ct")
    needed = span(J)
    if K * Ct.length < needed:
        return {"gap": Ct, "K": K, "K_times_length": K * Ct.length, "span": needed}
    return None


def separation_violation(
    F: PLMap,
    split_point: RationalLike,
    eps: RationalLike,
    K: RationalLike,
    in_s2: Optional[Callable[[Fraction], bool]] = None,
):
    """Witness that ``F`` leaves a set it cannot leave when K-Lipschitz, or None.

    Codomain values are split into ``S1`` and ``S2``: by default ``S1`` is
    ``[0, split_point]_S`` and ``S2`` the rest, which requires ``split_point``
    to be the left endpoint of a codomain gap.  A predicate ``in_s2`` may be
    supplied instead; then ``eps`` is checked against the attained values.
    """
    eps, K = Q(eps), Q(K)
    if eps <= 0 or K <= 0:
        raise PreconditionFailed("eps and K must be positive")
    S = F.codomain
    xs, vs = F.support, F.values
    if in_s2 is None:
        split = S.point(split_point)
        gap = next((g for g in S.gaps if g.left == split), None)
        if gap is None:
            raise PreconditionFailed("split point is not the left endpoint of a codomain gap")
        in_s2 = lambda v: v > split  # noqa: E731
        cross = min(gap.length, S.width)
    else:
        s1 = [v for v in vs if not in_s2(v)]
        s2 = [v for v in vs if in_s2(v)]
        cross = min((S._d(a, b) for a in s1 for b in s2), default=None)
    if cross is not None and cross < eps:
        raise PreconditionFailed(f"S1 and S2 are only {cross} apart, less than eps")
    if in_s2(vs[0]):
        raise PreconditionFailed("F(0) must lie in S1")
    long = [s for s in F.spacings() if not s.length < eps / K]
    if long:
        raise PreconditionFailed(f"spacing {long[0]} is not shorter than eps / K")
    for i in range(1, len(xs)):
        if in_s2(vs[i]):
            x, P = xs[i - 1], xs[i]
            return {
                "x": x,
                "P": P,
                "domain_distance": F.domain._d(x, P),
                "codomain_distance": S._d(vs[i - 1], vs[i]),
                "bound": eps / K,
            }
    return None


def maximal_interval(F: PLMap, in_n: Callable[[Fraction], bool], t: RationalLike) -> ExtendedInterval:
    """Largest extended interval around ``t`` on which every support value lies in N."""
    t = Q(t)
    xs, vs = F.support, F.values
    try:
        i0 = xs.index(t)
    except ValueError:
        raise PreconditionFailed(f"{t} is not a support point") from None
    if not in_n(vs[i0]):
        raise NotInN(f"F({t}) is not in N")
    last = len(xs) - 1
    lo = i0
    while lo > 0 and in_n(vs[lo - 1]):
        lo -= 1
    hi = i0
    while hi < last and in_n(vs[hi + 1]):
        hi += 1
    if lo == 0 and hi == last:
        return ExtendedInterval(Kind.INNER, xs[0], xs[last])
    if lo == 0 and in_n(vs[last]):
        tail = last
        while in_n(vs[tail - 1]):
            tail -= 1
        return ExtendedInterval(Kind.OUTER, xs[hi], xs[tail])
    if hi == last and in_n(vs[0]):
        head = 0
        while in_n(vs[head + 1]):
            head += 1
        return ExtendedInterval(Kind.OUTER, xs[head], xs[lo])
    return ExtendedInterval(Kind.INNER, xs[lo], xs[hi])


def collapse_maximal(F: PLMap, interval: ExtendedInterval, s: RationalLike) -> PLMap:
    """Send the whole interval to ``s``; refuses if that raises the Lipschitz constant."""
    s = F.codomain.point(s)
    collapsed = F.with_values([s if interval.contains(x) else v for x, v in F.points])
    before, after = lip_const(F), lip_const(collapsed)
    if after > before:
        raise LipIncreased(f"collapse raised the Lipschitz constant from {before} to {after}", before=before, after=after)
    return collapsed


def _nearest(S: Thread, target: Fraction, candidates: Iterable[Fraction]):
    best = None
    for c in sorted({S.point(c) for c in candidates}):
        d = S._d(target, c)
        if best is None or d < best[0]:
            best = (d, c)
    return best


def replace_extremes(
    F: PLMap,
    D1: Iterable[RationalLike],
    D2: Iterable[RationalLike],
    eps: RationalLike,
    P: RationalLike | None = None,
    Q_: RationalLike | None = None,
):
    """Restrict ``F`` to ``[P, Q]_T`` and move the two extreme values into D1 and D2.

    By default ``P`` is the left endpoint of the leftmost domain gap and ``Q``
    the right endpoint of the rightmost one, so ``[0, P]_T`` and ``[Q, l]_T``
    are clopen.  Returns ``(P, Q, G)`` with ``G`` defined on the subthread
    (coordinates shifted by ``-P``) and ``lip_const(G) <= lip_const(F) + eps``.
    """
    eps = Q(eps)
    T, S = F.domain, F.codomain
    if not T.gaps:
        raise NotSeparableAtTruncation("domain has no gap to cut at")
    gap_p = T.gaps[0] if P is None else next((g for g in T.gaps if g.left == Q(P)), None)
    gap_q = T.gaps[-1] if Q_ is None else next((g for g in T.gaps if g.right == Q(Q_)), None)
    if gap_p is None or gap_q is None:
        raise NotSeparableAtTruncation("P must be a left and Q a right gap endpoint")
    P, Qp = gap_p.left, gap_q.right
    if not P < Qp:
        raise PreconditionFailed("need P < Q")
    delta_p = min(gap_p.length, T.width)
    delta_q = min(gap_q.length, T.width)
    picks = []
    for target, pool, delta in ((F(P), D1, delta_p), (F(Qp), D2, delta_q)):
        found = _nearest(S, target, pool)
        if found is None or not found[0] < eps * delta / 2:
            raise NoNearbyPoint(f"no candidate within {eps * delta / 2} of {target}")
        picks.append(found[1])
    sub = T.subthread(P, Qp)
    pts = []
    for x, v in F.points:
        if P <= x <= Qp:
            if x == P:
                v = picks[0]
            elif x == Qp:
                v = picks[1]
            pts.append((x - P, v))
    G = PLMap(sub, S, tuple(pts))
    bound = lip_const(F) + eps
    if lip_const(G) > bound:
        raise LipIncreased("replacement exceeded the K + eps bound")
    return P, Qp, G
