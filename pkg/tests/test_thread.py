import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from threadskein.errors import Degenerate, InvalidPoint, NotSeparableAtTruncation
from threadskein.exactnum import OpenInterval
from threadskein.thread import ExtendedInterval, Kind, from_gaps, line

from oracles import thread_d

F = Fraction


class TestDistance:
    def test_extremes_are_width_apart(self):
        assert line(1, F(1, 2)).distance(0, 1) == F(1, 2)

    def test_wrap_path(self):
        t = line(1, F(1, 2))
        assert t.distance(F(1, 10), F(9, 10)) == F(7, 10)
        assert t.distance(F(1, 4), F(3, 4)) == F(1, 2)

    def test_gap_interior_is_not_a_point(self, T_A):
        with pytest.raises(InvalidPoint):
            T_A.distance(F(9, 16), 0)
        assert T_A.is_point(F(1, 2)) and T_A.is_point(F(5, 8))

    def test_width_equal_length_is_a_segment(self):
        t = from_gaps(2, 2, [(F(1, 2), F(1))])
        pts = t.sample_points(F(1, 4))
        assert all(t.distance(x, y) == abs(x - y) for x in pts for y in pts)


class TestSubthread:
    def test_width_clipped_at_length(self):
        s = line(1, F(1, 2)).subthread(F(1, 4), F(3, 4))
        assert (s.length, s.width, s.gaps) == (F(1, 2), F(1, 2), ())

    def test_whole_thread(self, T_A):
        assert T_A.subthread(0, 1) == T_A

    def test_boundary_gaps_dropped(self, T_A):
        s = T_A.subthread(F(1, 3), F(2, 3))
        assert s.length == F(1, 3)
        assert s.width == F(1, 3)
        assert s.gaps == (OpenInterval(F(1, 2) - F(1, 3), F(5, 8) - F(1, 3)),)

    def test_inherited_metric(self, T_A):
        x, y = F(1, 4), F(7, 8)
        s = T_A.subthread(x, y)
        pts = [p for p in T_A.sample_points(F(1, 32)) if x <= p <= y]
        for p, q in itertools.product(pts, repeat=2):
            assert s.distance(p - x, q - x) == T_A.distance(p, q)

    def test_degenerate(self, T_A):
        with pytest.raises(Degenerate):
            T_A.subthread(F(1, 4), F(1, 4))


class TestOrderingAndMeasure:
    def test_gaps_by_length(self, T_A):
        assert [(g.left, g.right) for g in T_A.gaps_by_length()] == [
            (F(1, 2), F(5, 8)),
            (F(1, 3), F(19, 48)),
            (F(2, 3), F(67, 96)),
        ]

    def test_tie_break(self):
        t = from_gaps(1, 1, [(F(1, 2), F(5, 8)), (F(1, 8), F(1, 4))])
        assert [g.left for g in t.gaps_by_length()] == [F(1, 8), F(1, 2)]

    def test_gapless(self, T_LINE):
        assert T_LINE.gaps_by_length() == []
        assert T_LINE.measure() == 1

    def test_measure(self, T_A):
        assert T_A.measure() == F(25, 32)


class TestSeparatingSplit:
    def test_largest_gap_between(self, T_A):
        s1, s2 = T_A.separating_split(0, 1)
        assert s1 == ExtendedInterval(Kind.INNER, F(0), F(1, 2))
        assert s2 == ExtendedInterval(Kind.INNER, F(5, 8), F(1))

    def test_adjacent_endpoints(self):
        t = from_gaps(1, 1, [(F(1, 4), F(1, 2))])
        s1, s2 = t.separating_split(F(1, 4), F(1, 2))
        assert s1.contains(F(1, 4)) and s2.contains(F(1, 2))
        assert not s1.contains(F(1, 2))

    def test_gapless_not_separable(self, T_LINE):
        with pytest.raises(NotSeparableAtTruncation):
            T_LINE.separating_split(0, 1)


def test_outer_interval_wraps():
    I = ExtendedInterval(Kind.OUTER, F(1, 4), F(3, 4))
    assert I.contains(0) and I.contains(1) and I.contains(F(1, 4))
    assert not I.contains(F(1, 2))


def test_rejects_overlapping_gaps():
    with pytest.raises(ValueError):
        from_gaps(1, 1, [(F(1, 4), F(1, 2)), (F(3, 8), F(5, 8))])


def test_metric_axioms_on_fixtures(T_A, T_LINE):
    for t in (T_A, T_LINE, line(1, F(1, 3))):
        pts = t.sample_points(F(1, 16))
        for x, y in itertools.product(pts, repeat=2):
            assert t.distance(x, y) == thread_d(t.length, t.width, x, y)
            assert t.distance(x, y) == t.distance(y, x)
            assert (t.distance(x, y) == 0) == (x == y)
        for x, y, z in itertools.product(pts, repeat=3):
            assert t.distance(x, z) <= t.distance(x, y) + t.distance(y, z)


@st.composite
def threads(draw):
    den = draw(st.sampled_from([8, 12, 16, 24]))
    length = F(draw(st.integers(den // 2, 2 * den)), den)
    width = F(draw(st.integers(1, length.numerator * den // length.denominator)), den)
    cuts = sorted(set(draw(st.lists(st.integers(1, int(length * den) - 1), max_size=6))))
    gaps = [(F(a, den), F(b, den)) for a, b in zip(cuts[::2], cuts[1::2])]
    return from_gaps(length, min(width, length), gaps)


@settings(max_examples=60, deadline=None)
@given(threads())
def test_random_thread_properties(t):
    pts = t.sample_points(t.length / 8)
    assert t.distance(0, t.length) == t.width
    for x, y in itertools.combinations(pts, 2):
        d = t.distance(x, y)
        if d < t.width:
            assert d == abs(x - y)
        for z in pts:
            assert t.distance(x, z) <= d + t.distance(y, z)
