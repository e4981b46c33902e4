"""Threads: closed subsets of ``[0, l]`` with the wrap-around metric ``d_{l,a}``.

A :class:`Thread` stores finitely many gaps.  When it is a truncation of an
infinite construction it represents a superset of the limiting point set;
distances between retained points are unaffected by the truncation.
"""
from __future__ import annotations

import bisect
import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import Degenerate, InvalidPoint, NotSeparableAtTruncation
from .exactnum import ZERO, OpenInterval, Q, RationalLike


class Kind(str, enum.Enum):
    INNER = "INNER"
    OUTER = "OUTER"


@dataclass(frozen=True)
class ExtendedInterval:
    """``[p, q]_T`` (INNER) or ``[0, p]_T ∪ [q, l]_T`` (OUTER).

    A degenerate INNER interval with ``p == q`` is allowed; it stands for a
    single point.
    """

    kind: Kind
    p: Fraction
    q: Fraction

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "p", Q(self.p))
        object.__setattr__(self, "q", Q(self.q))
        if self.p > self.q or (self.kind is Kind.OUTER and self.p == self.q):
            raise ValueError(f"bad extremes for {self.kind.value} interval: {self.p}, {self.q}")

    def contains(self, x: RationalLike) -> bool:
        x = Q(x)
        if self.kind is Kind.INNER:
            return self.p <= x <= self.q
        return x <= self.p or x >= self.q

    @property
    def extremes(self) -> tuple[Fraction, Fraction]:
        return self.p, self.q


@dataclass(frozen=True)
class Thread:
    """A thread of ``length`` and ``width`` with finitely many gaps.

    Gaps are kept sorted by left endpoint.  ``0`` and ``length`` always belong
    to the thread, and no gap endpoint may sit inside another gap.
    """

    length: Fraction
    width: Fraction
    gaps: tuple[OpenInterval, ...] = ()

    def __post_init__(self):
        length, width = Q(self.length), Q(self.width)
        gaps = tuple(sorted(g if isinstance(g, OpenInterval) else OpenInterval(*g) for g in self.gaps))
        if length <= 0:
            raise ValueError("thread length must be positive")
        if not 0 < width <= length:
            raise ValueError("thread width must satisfy 0 < width <= length")
        for g in gaps:
            if not 0 < g.left < g.right < length:
                raise ValueError(f"gap {g} must satisfy 0 < left < right < length")
        for g, h in zip(gaps, gaps[1:]):
            if h.left < g.right:
                raise ValueError(f"gaps {g} and {h} overlap")
        object.__setattr__(self, "length", length)
        object.__setattr__(self, "width", width)
        object.__setattr__(self, "gaps", gaps)
        object.__setattr__(self, "_lefts", [g.left for g in gaps])

    # -- point set -----------------------------------------------------

    def is_point(self, x: RationalLike) -> bool:
        x = Q(x)
        if not 0 <= x <= self.length:
            return False
        i = bisect.bisect_left(self._lefts, x) - 1
        return i < 0 or not self.gaps[i].contains_point(x)

    def point(self, x: RationalLike) -> Fraction:
        """Validate ``x`` as a point of the thread and return it as a Fraction."""
        x = Q(x)
        if not self.is_point(x):
            raise InvalidPoint(f"{x} is not a point of the thread", coordinate=x)
        return x

    def gap_endpoints(self) -> list[Fraction]:
        return sorted({e for g in self.gaps for e in (g.left, g.right)})

    def sample_points(self, step: RationalLike) -> list[Fraction]:
        """Multiples of ``step`` that lie in the thread, plus all gap endpoints and both extremes."""
        step = Q(step)
        if step <= 0:
            raise ValueError("step must be positive")
        out = {ZERO, self.length, *self.gap_endpoints()}
        k = 1
        while k * step < self.length:
            if self.is_point(k * step):
                out.add(k * step)
            k += 1
        return sorted(out)

    # -- metric --------------------------------------------------------

    def distance(self, x: RationalLike, y: RationalLike) -> Fraction:
        x, y = self.point(x), self.point(y)
        return self._d(x, y)

    def _d(self, x: Fraction, y: Fraction) -> Fraction:
        l, a = self.length, self.width
        return min(abs(x - y), x + (l - y) + a, y + (l - x) + a)

    # -- derived threads and orderings -----------------------------------

    def subthread(self, x: RationalLike, y: RationalLike) -> "Thread":
        """``[x, y]_T`` as a thread of its own, coordinates shifted by ``-x``.

        Gaps touching ``x`` or ``y`` cannot be represented (a gap may not start
        at 0 or end at the length) and are dropped; this keeps every retained
        distance intact.
        """
        x, y = self.point(x), self.point(y)
        if x == y:
            raise Degenerate("subthread of a single point")
        if x > y:
            raise ValueError("subthread needs x < y")
        gaps = tuple(
            OpenInterval(g.left - x, g.right - x) for g in self.gaps if x < g.left and g.right < y
        )
        width = min(y - x, self.width + x + (self.length - y))
        return Thread(y - x, width, gaps)

    def gaps_by_length(self) -> list[OpenInterval]:
        """Gaps by decreasing length; equal lengths by ascending left endpoint."""
        return sorted(self.gaps, key=lambda g: (-g.length, g.left))

    def measure(self) -> Fraction:
        return self.length - sum((g.length for g in self.gaps), ZERO)

    def separating_split(self, p: RationalLike, q: RationalLike) -> tuple[ExtendedInterval, ExtendedInterval]:
        """Split the thread into two clopen pieces, one holding ``p`` and the other ``q``.

        Uses the longest gap lying between the two points.  Returns
        ``(S_p, S_q)`` where each piece is ``[0, x]_T`` or ``[y, l]_T``.
        """
        p, q = self.point(p), self.point(q)
        if p == q:
            raise Degenerate("points must differ")
        lo, hi = min(p, q), max(p, q)
        between = [g for g in self.gaps_by_length() if lo <= g.left and g.right <= hi]
        if not between:
            raise NotSeparableAtTruncation(f"no gap of the truncation lies between {lo} and {hi}")
        cut = between[0]
        low_piece = ExtendedInterval(Kind.INNER, ZERO, cut.left)
        high_piece = ExtendedInterval(Kind.INNER, cut.right, self.length)
        return (low_piece, high_piece) if p < q else (high_piece, low_piece)

    def with_width(self, width: RationalLike) -> "Thread":
        return Thread(self.length, Q(width), self.gaps)


def line(length: RationalLike = 1, width: RationalLike | None = None) -> Thread:
    """A gapless thread; ``width`` defaults to the length (a plain segment)."""
    length = Q(length)
    return Thread(length, length if width is None else Q(width), ())


def from_gaps(length: RationalLike, width: RationalLike, gaps: Iterable) -> Thread:
    return Thread(Q(length), Q(width), tuple(OpenInterval(Q(a), Q(b)) for a, b in gaps))
