"""Greedy fat-Cantor threads.

Gaps are placed one at a time: the i-th gap has length ``gamma_i`` and starts
at the first rational of a fixed enumeration of ``Q ∩ (0, 1)`` whose candidate
interval avoids every gap placed so far.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Callable, Sequence, Union

from .errors import GammaExhausted, InvalidGamma
from .exactnum import ONE, OpenInterval, Q, RationalLike, Verdict, pow2
from .thread import Thread

# enumeration cache: _RATIONALS[n - 1] is the n-th rational
_RATIONALS: list[Fraction] = []
_NEXT_DENOMINATOR = [2]


def rational_at(n: int) -> Fraction:
    """The n-th rational of (0, 1), by denominator and then numerator, reduced only.

    >>> [str(rational_at(i)) for i in range(1, 10)]
    ['1/2', '1/3', '2/3', '1/4', '3/4', '1/5', '2/5', '3/5', '4/5']
    """
    if n < 1:
        raise ValueError("enumeration index starts at 1")
    while len(_RATIONALS) < n:
        d = _NEXT_DENOMINATOR[0]
        _RATIONALS.extend(Fraction(k, d) for k in range(1, d) if gcd(k, d) == 1)
        _NEXT_DENOMINATOR[0] = d + 1
    return _RATIONALS[n - 1]


# -- gamma sequences -----------------------------------------------------


def dyadic_rule(shift: int) -> Callable[[int], Fraction]:
    """``gamma_i = 2^-(i + 1 + shift)``; ``shift >= 1`` keeps the strict bound."""
    if shift < 1:
        raise ValueError("shift must be at least 1")
    return lambda i: pow2(-(i + 1 + shift))


GAMMA_RULES: dict[str, Callable[[int], Fraction]] = {"half-bound": dyadic_rule(1)}


def resolve_rule(name: str) -> Callable[[int], Fraction]:
    if name in GAMMA_RULES:
        return GAMMA_RULES[name]
    match = re.fullmatch(r"dyadic:(\d+)", name)
    if match:
        return dyadic_rule(int(match.group(1)))
    raise KeyError(f"unknown gamma rule {name!r}")


def validate_gamma(values: Sequence[RationalLike]) -> Verdict:
    """Check a finite gamma prefix against the admissibility conditions.

    Conditions, in the order they are reported: strictly decreasing, (i)
    positive, (ii) ``gamma_i < 2^-(i+1)``, (iii) ``q_1 + gamma_1 < 1``.
    """
    gs = [Q(v) for v in values]
    for i in range(1, len(gs)):
        if not gs[i] < gs[i - 1]:
            return Verdict(False, f"not strictly decreasing at i={i + 1}", i + 1)
    for i, g in enumerate(gs, start=1):
        if g <= 0:
            return Verdict(False, f"condition (i) at i={i}", i)
        if not g < pow2(-(i + 1)):
            return Verdict(False, f"condition (ii) at i={i}", i)
    if gs and not rational_at(1) + gs[0] < 1:
        return Verdict(False, "condition (iii)", 1)
    return Verdict(True)


@dataclass(frozen=True)
class GammaPrefix:
    """A validated finite prefix of an admissible gamma sequence."""

    values: tuple[Fraction, ...]

    def __post_init__(self):
        values = tuple(Q(v) for v in self.values)
        verdict = validate_gamma(values)
        if not verdict:
            raise InvalidGamma(verdict.reason)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]


GammaSource = Union[GammaPrefix, str]


def _gamma_value(gamma: GammaSource, i: int) -> Fraction:
    if isinstance(gamma, str):
        return resolve_rule(gamma)(i)
    if i > len(gamma):
        raise GammaExhausted(f"gamma prefix has only {len(gamma)} values, gap {i} requested")
    return gamma[i - 1]


# -- the gap stream ------------------------------------------------------


@dataclass(frozen=True)
class GapStream:
    """Resumable producer of the greedy gaps.

    ``gamma`` is either a :class:`GammaPrefix` or the name of a rule (see
    :func:`resolve_rule`).  Advancing returns a new stream; the old one is
    left untouched.
    """

    gamma: GammaSource
    emitted: tuple[OpenInterval, ...] = ()
    # index into the enumeration per emitted gap, kept for audit
    indices: tuple[int, ...] = field(default=(), compare=False)

    @property
    def cursor(self) -> int:
        return len(self.emitted) + 1

    def next_gap(self) -> tuple[OpenInterval, "GapStream"]:
        return next_gap(self)

    def advance(self, k: int) -> "GapStream":
        stream = self
        for _ in range(k):
            _, stream = next_gap(stream)
        return stream

    def thread(self, width: RationalLike) -> Thread:
        return Thread(ONE, Q(width), self.emitted)


def next_gap(stream: GapStream) -> tuple[OpenInterval, GapStream]:
    """Place the next gap: the first enumerated rational whose candidate fits."""
    i = stream.cursor
    g = _gamma_value(stream.gamma, i)
    placed = sorted(stream.emitted)
    n = 1
    while True:
        q = rational_at(n)
        # the candidate must end strictly before 1 so that 1 stays a plain extreme
        if q + g < 1:
            candidate = OpenInterval(q, q + g)
            if not any(candidate.intersects(gap) for gap in placed):
                break
        n += 1
    return candidate, GapStream(stream.gamma, stream.emitted + (candidate,), stream.indices + (n,))


def build_thread(gamma: GammaSource | Sequence[RationalLike], k: int, width: RationalLike) -> Thread:
    """The truncation of ``T_gamma(1, width)`` after ``k`` gaps."""
    if not isinstance(gamma, (GammaPrefix, str)):
        gamma = GammaPrefix(tuple(gamma))
    width = Q(width)
    if not 0 < width <= 1:
        raise ValueError("width must satisfy 0 < width <= 1")
    return GapStream(gamma).advance(k).thread(width)
