"""Gluing finite metric spaces and threading spaces.

An attachment glues pieces onto a base along anchor sets.  Distances inside
the base or inside one piece are unchanged; everything else is routed
through anchors.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

from .errors import GlueNotIsometric, InvalidPoint
from .exactnum import ZERO, Q, RationalLike, Verdict
from .thread import Thread


@dataclass(frozen=True)
class FiniteMetric:
    """A finite metric space given by an explicit distance table."""

    points: tuple[Hashable, ...]
    table: Mapping[tuple[Hashable, Hashable], Fraction]

    @classmethod
    def from_function(cls, points: Sequence[Hashable], dist) -> "FiniteMetric":
        pts = tuple(points)
        return cls(pts, {(p, q): Q(dist(p, q)) for p in pts for q in pts})

    def d(self, p, q) -> Fraction:
        try:
            return self.table[(p, q)]
        except KeyError:
            raise InvalidPoint(f"unknown point pair {p!r}, {q!r}") from None


def check_metric(points: Sequence, d) -> Verdict:
    """Exhaustive metric-axiom check over all pairs and triples."""
    pts = list(points)
    for p in pts:
        if d(p, p) != 0:
            return Verdict(False, "identity", (p,))
    for p, q in itertools.combinations(pts, 2):
        if d(p, q) != d(q, p):
            return Verdict(False, "symmetry", (p, q))
        if d(p, q) <= 0:
            return Verdict(False, "positivity", (p, q))
    for p, q, r in itertools.product(pts, repeat=3):
        if d(p, r) > d(p, q) + d(q, r):
            return Verdict(False, "triangle", (p, q, r))
    return Verdict(True)


@dataclass(frozen=True)
class Piece:
    space: FiniteMetric
    glue: Mapping[Hashable, Hashable]  # anchor -> base point

    @property
    def anchors(self) -> tuple:
        return tuple(self.glue)


class AttachmentSpace:
    """The attachment of ``pieces`` to ``base``.

    Points are ``("base", p)`` or ``(i, p)`` for a non-anchor point ``p`` of
    piece ``i``; anchors are identified with their base images.
    """

    def __init__(self, base: FiniteMetric, pieces: Sequence[Piece], check_axioms: bool = True):
        self.base = base
        self.pieces = tuple(pieces)
        for i, piece in enumerate(self.pieces):
            if not piece.glue:
                raise ValueError(f"piece {i} has no anchors")
            for a, b in itertools.combinations(piece.anchors, 2):
                if piece.space.d(a, b) != base.d(piece.glue[a], piece.glue[b]):
                    raise GlueNotIsometric(f"piece {i}: anchors {a!r}, {b!r}", piece=i, pair=(a, b))
            if len(set(piece.glue.values())) != len(piece.glue):
                raise GlueNotIsometric(f"piece {i}: glue is not injective", piece=i)
        if check_axioms:
            verdict = check_metric(self.points(), self.distance)
            if not verdict:
                raise GlueNotIsometric(f"attached distance breaks the {verdict.reason} axiom", witness=verdict.witness)

    def points(self) -> list:
        out = [("base", p) for p in self.base.points]
        for i, piece in enumerate(self.pieces):
            out.extend((i, p) for p in piece.space.points if p not in piece.glue)
        return out

    def canonical(self, point):
        tag, p = point
        if tag != "base" and p in self.pieces[tag].glue:
            return ("base", self.pieces[tag].glue[p])
        return point

    def distance(self, x, y) -> Fraction:
        x, y = self.canonical(x), self.canonical(y)
        (tx, px), (ty, py) = x, y
        if tx == "base" and ty == "base":
            return self.base.d(px, py)
        if tx == ty:
            return self.pieces[tx].space.d(px, py)
        if ty == "base":
            (tx, px), (ty, py) = (ty, py), (tx, px)
        # now y lies in a piece
        ny = self.pieces[ty]
        if tx == "base":
            return min(ny.space.d(py, a) + self.base.d(ny.glue[a], px) for a in ny.anchors)
        nx = self.pieces[tx]
        return min(
            nx.space.d(px, a) + self.base.d(nx.glue[a], ny.glue[b]) + ny.space.d(b, py)
            for a in nx.anchors
            for b in ny.anchors
        )


def attach(base: FiniteMetric, pieces: Sequence[Piece], check_axioms: bool = True) -> AttachmentSpace:
    return AttachmentSpace(base, pieces, check_axioms)


# -- threading spaces -------------------------------------------------------------


@dataclass(frozen=True)
class ThreadingSpace:
    """Finitely many threads of length 1 glued at their extremes to anchors A and B.

    Points are ``"A"``, ``"B"`` or ``(gamma_id, coordinate)`` with the
    coordinate strictly between 0 and 1.
    """

    width: Fraction
    threads: tuple[tuple[int, Thread], ...]
    anchor_a: str = "A"
    anchor_b: str = "B"

    def __post_init__(self):
        width = Q(self.width)
        if not 0 < width <= Fraction(1, 2):
            raise ValueError("threading width must satisfy 0 < width <= 1/2")
        for gid, t in self.threads:
            if t.length != 1 or t.width != width:
                raise ValueError(f"thread {gid} must have length 1 and width {width}")
        if len({gid for gid, _ in self.threads}) != len(self.threads):
            raise ValueError("gamma ids must be distinct")
        object.__setattr__(self, "width", width)

    def thread(self, gid) -> Thread:
        for g, t in self.threads:
            if g == gid:
                return t
        raise InvalidPoint(f"no thread with gamma id {gid}")

    def _locate(self, p):
        """(gamma id or None, coordinate) with anchors at coordinates 0 and 1."""
        if p == self.anchor_a:
            return None, ZERO
        if p == self.anchor_b:
            return None, Fraction(1)
        gid, c = p
        c = self.thread(gid).point(c)
        if c in (0, 1):
            return None, c
        return gid, c

    def distance(self, p, q) -> Fraction:
        (gp, cp), (gq, cq) = self._locate(p), self._locate(q)
        if gp is None and gq is None:
            return ZERO if cp == cq else self.width
        if gp is None or gq is None or gp == gq:
            return self.thread(gq if gp is None else gp)._d(cp, cq)
        tp, tq = self.thread(gp), self.thread(gq)
        return min(tp._d(cp, 0) + tq._d(0, cq), tp._d(cp, 1) + tq._d(1, cq))

    def as_attachment(self, coordinates: Mapping[int, Sequence[RationalLike]]) -> AttachmentSpace:
        """The same space as an explicit attachment over ``{A, B}``, sampled at the given coordinates."""
        base = FiniteMetric.from_function(("A", "B"), lambda p, q: ZERO if p == q else self.width)
        pieces = []
        for gid, t in self.threads:
            pts = [Fraction(0), Fraction(1)] + [t.point(c) for c in coordinates.get(gid, ()) if 0 < Q(c) < 1]
            pieces.append(Piece(FiniteMetric.from_function(pts, t._d), {Fraction(0): "A", Fraction(1): "B"}))
        return AttachmentSpace(base, pieces)


def threading_distance(ts: ThreadingSpace, p, q) -> Fraction:
    return ts.distance(p, q)
