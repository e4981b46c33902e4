"""Exact scalars and open intervals.

All coordinates are :class:`fractions.Fraction` values.  ``Fraction`` already
keeps lowest terms with a positive denominator and is backed by Python's
arbitrary precision integers, so it is used directly as the rational type.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]

ZERO = Fraction(0)
ONE = Fraction(1)


def Q(value: RationalLike) -> Fraction:
    """Coerce ``value`` to a Fraction.

    Strings are accepted in ``"p/q"`` or integer form.  Floats are refused:
    nothing in this package is allowed to pass through binary floating point.

    >>> Q("3/6")
    Fraction(1, 2)
    >>> Q(2)
    Fraction(2, 1)
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise ValueError(f"not an exact rational: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot interpret {type(value).__name__} as an exact rational")


def fmt(value: RationalLike) -> str:
    """Serialize as ``"p/q"`` in lowest terms (``"0/1"`` for zero).

    >>> fmt(Fraction(4, 8))
    '1/2'
    >>> fmt(0)
    '0/1'
    """
    q = Q(value)
    return f"{q.numerator}/{q.denominator}"


def pow2(exponent: int) -> Fraction:
    """2**exponent as an exact Fraction (negative exponents allowed)."""
    if exponent >= 0:
        return Fraction(1 << exponent)
    return Fraction(1, 1 << -exponent)


@dataclass(frozen=True, order=True)
class OpenInterval:
    """The open interval ``(left, right)``; empty when ``left >= right``."""

    left: Fraction
    right: Fraction

    def __post_init__(self):
        object.__setattr__(self, "left", Q(self.left))
        object.__setattr__(self, "right", Q(self.right))
        if self.left > self.right:
            raise ValueError(f"interval endpoints out of order: {self}")

    @classmethod
    def empty_at(cls, point: RationalLike) -> "OpenInterval":
        point = Q(point)
        return cls(point, point)

    @property
    def is_empty(self) -> bool:
        return self.left >= self.right

    @property
    def length(self) -> Fraction:
        return max(self.right - self.left, ZERO)

    def intersects(self, other: "OpenInterval") -> bool:
        return interval_intersects(self, other)

    def contains(self, other: "OpenInterval") -> bool:
        return interval_contains(self, other)

    def contains_point(self, x: RationalLike) -> bool:
        x = Q(x)
        return self.left < x < self.right

    def __str__(self):
        return f"({fmt(self.left)}, {fmt(self.right)})"


def interval_intersects(i1: OpenInterval, i2: OpenInterval) -> bool:
    """True iff the two open intervals share a point."""
    if i1.is_empty or i2.is_empty:
        return False
    return max(i1.left, i2.left) < min(i1.right, i2.right)


def interval_contains(outer: OpenInterval, inner: OpenInterval) -> bool:
    """True iff ``inner`` is a subset of ``outer``; the empty set is contained in anything."""
    if inner.is_empty:
        return True
    if outer.is_empty:
        return False
    return outer.left <= inner.left and inner.right <= outer.right


def merge_open(intervals) -> list[OpenInterval]:
    """Union of open intervals as a sorted list of disjoint open intervals.

    Intervals that merely touch at an endpoint stay separate: the shared point
    is not covered by either.
    """
    parts = sorted(i for i in intervals if not i.is_empty)
    merged: list[OpenInterval] = []
    for part in parts:
        if merged and part.left < merged[-1].right:
            last = merged[-1]
            merged[-1] = OpenInterval(last.left, max(last.right, part.right))
        else:
            merged.append(part)
    return merged


def union_contains(intervals, inner: OpenInterval) -> bool:
    """True iff ``inner`` lies inside the union of the given open intervals."""
    if inner.is_empty:
        return True
    return any(interval_contains(part, inner) for part in merge_open(intervals))


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check: ``ok`` plus a reason and an optional witness."""

    ok: bool
    reason: str = ""
    witness: Any = None

    def __bool__(self):
        return self.ok

    @property
    def label(self) -> str:
        return "ACCEPT" if self.ok else "REJECT"
