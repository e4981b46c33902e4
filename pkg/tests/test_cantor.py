from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from threadskein.cantor import GammaPrefix, GapStream, build_thread, rational_at, validate_gamma
from threadskein.errors import GammaExhausted, InvalidGamma
from threadskein.exactnum import OpenInterval

from oracles import greedy_gaps, rationals

F = Fraction


def test_enumeration_prefix():
    assert [rational_at(n) for n in range(1, 12)] == [
        F(1, 2), F(1, 3), F(2, 3), F(1, 4), F(3, 4), F(1, 5), F(2, 5), F(3, 5), F(4, 5), F(1, 6), F(5, 6)
    ]


def test_enumeration_matches_oracle():
    assert [rational_at(n) for n in range(1, 501)] == rationals(500)


class TestValidate:
    def test_accept(self):
        assert validate_gamma([F(1, 8), F(1, 16), F(1, 32)]).ok

    def test_condition_ii_is_strict(self):
        v = validate_gamma([F(1, 4), F(1, 16)])
        assert not v.ok and "(ii)" in v.reason and v.witness == 1

    def test_not_decreasing(self):
        v = validate_gamma([F(1, 16), F(1, 8)])
        assert not v.ok and "decreasing" in v.reason

    def test_prefix_rejects(self):
        with pytest.raises(InvalidGamma):
            GammaPrefix((F(1, 4),))


class TestStream:
    def test_first_three_gaps(self):
        s = GapStream(GammaPrefix((F(1, 8), F(1, 16), F(1, 32))))
        g1, s = s.next_gap()
        g2, s = s.next_gap()
        g3, s = s.next_gap()
        assert g1 == OpenInterval(F(1, 2), F(5, 8))
        assert g2 == OpenInterval(F(1, 3), F(19, 48))
        assert g3 == OpenInterval(F(2, 3), F(2, 3) + F(1, 32))

    def test_streams_are_persistent(self):
        s = GapStream("half-bound")
        a = s.advance(2)
        b = s.advance(2)
        assert a == b and s.cursor == 1 and a.cursor == 3

    def test_exhausted(self):
        s = GapStream(GammaPrefix((F(1, 8),))).advance(1)
        with pytest.raises(GammaExhausted):
            s.next_gap()


def test_build_thread(T_A):
    assert build_thread([F(1, 8), F(1, 16), F(1, 32)], 3, F(1, 2)) == T_A
    assert build_thread("half-bound", 3, F(1, 2)) == T_A
    assert build_thread("half-bound", 0, 1).gaps == ()
    assert T_A.measure() == F(25, 32)


def test_matches_independent_simulation():
    gammas = [F(1, 2 ** (i + 2)) for i in range(1, 25)]
    t = build_thread(GammaPrefix(tuple(gammas)), 24, F(1, 2))
    assert sorted((g.left, g.right) for g in t.gaps) == sorted(greedy_gaps(gammas))


@st.composite
def gamma_prefixes(draw):
    k = draw(st.integers(1, 8))
    out, prev = [], None
    for i in range(1, k + 1):
        bound = F(1, 2 ** (i + 1))
        if prev is not None:
            bound = min(bound, prev)
        num = draw(st.integers(1, 63))
        g = bound * F(num, 64)
        out.append(g)
        prev = g
    return out


@settings(max_examples=40, deadline=None)
@given(gamma_prefixes())
def test_stream_invariants(gammas):
    t = build_thread(GammaPrefix(tuple(gammas)), len(gammas), 1)
    emitted = GapStream(GammaPrefix(tuple(gammas))).advance(len(gammas)).emitted
    assert [g.length for g in emitted] == gammas
    assert t.is_point(0) and t.is_point(1)
    for g in t.gaps:
        assert t.is_point(g.left) and t.is_point(g.right)
    assert t.measure() >= 1 - sum(F(1, 2 ** (i + 1)) for i in range(1, len(gammas) + 1))
    assert sorted((g.left, g.right) for g in emitted) == sorted(greedy_gaps(gammas))
