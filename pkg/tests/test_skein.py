import itertools
import random
from fractions import Fraction

import pytest

from threadskein.errors import NotIsolated, NotMaterialized, OutsideStabilityBall
from threadskein.skein import (
    A,
    B,
    InnerPoint,
    Session,
    SkeinConfig,
    address,
    ancestor,
    ancestor_closure,
    build_skein,
    chain,
    in_ball,
    is_bound,
    isolated_point_obstruction,
    make_point,
    order_of,
    parse_address,
    pseudo_ancestor,
    registry_check,
    skein_distance,
    stability_report,
)

from oracles import dijkstra_all, skein_graph

F = Fraction
HALF = F(1, 2)


@pytest.fixture(scope="module")
def tr():
    return build_skein(SkeinConfig(depth=2))


def on(tr, parents, gid, coord):
    p = InnerPoint(parents, gid, F(coord))
    assert p in tr
    return p


class TestStructure:
    def test_sizes(self, tr):
        assert len(tr.points) <= 200
        assert [len(g) for g in tr.generations][0] == 2

    def test_registry(self, tr):
        assert registry_check(tr).ok

    def test_orders(self, tr):
        p = on(tr, (A, B), 1, F(1, 16))
        assert order_of(A) == 0 and order_of(p) == 1
        deeper = next(q for q in tr.generations[2] if A in q.parents)
        assert order_of(deeper) == 2

    def test_address_round_trip(self, tr):
        for p in tr.points:
            assert parse_address(address(p)) == p

    def test_coordinate_zero_is_parent(self):
        assert make_point((A, B), 1, 0) == A and make_point((A, B), 1, 1) == B


class TestDistance:
    def test_base(self, tr):
        assert skein_distance(tr, A, B) == HALF
        assert skein_distance(tr, A, A) == 0

    def test_not_materialized(self, tr):
        with pytest.raises(NotMaterialized):
            skein_distance(tr, A, InnerPoint((A, B), 1, F(9, 16)))

    def test_matches_shortest_paths(self, tr):
        nodes, edges = skein_graph(tr)
        table = dijkstra_all(nodes, edges)
        s = Session()
        for p in nodes:
            for q in nodes:
                assert s.distance(p, q) == table[p][q]

    def test_route_through_parent(self, tr):
        rec = next(r for r in tr.threads if order_of(r.parents[0]) == 1 and order_of(r.parents[1]) <= 1)
        p = rec.parents[0]
        x = on(tr, rec.parents, rec.gamma_id, F(1, 16))
        d = skein_distance(tr, x, A)
        assert d <= F(1, 16) + skein_distance(tr, p, A)
        via_q = skein_distance(tr, x, rec.parents[1]) + skein_distance(tr, rec.parents[1], A)
        assert d == min(F(1, 16) + skein_distance(tr, p, A), via_q)

    def test_threads_embed_isometrically(self, tr):
        for rec in tr.threads:
            pts = [rec.parents[0], *rec.points, rec.parents[1]]
            coords = [F(0), *(p.coord for p in rec.points), F(1)]
            for (p, c), (q, e) in itertools.combinations(zip(pts, coords), 2):
                assert skein_distance(tr, p, q) == rec.thread._d(c, e)


class TestBound:
    def test_near_parent(self, tr):
        p = on(tr, (A, B), 1, F(1, 16))
        assert is_bound(tr, p, A)
        assert not is_bound(tr, p, B)

    def test_midpoint(self, tr):
        p = on(tr, (A, B), 1, HALF)
        assert not is_bound(tr, p, A) and not is_bound(tr, p, B)

    def test_too_far(self, tr):
        p = on(tr, (A, B), 2, F(3, 8))
        assert not is_bound(tr, p, A)

    def test_all_points_agree(self, tr):
        for rec in tr.threads:
            for p in rec.points:
                for s in p.parents:
                    is_bound(tr, p, s)


class TestAncestor:
    def test_low_order(self, tr):
        assert ancestor(tr, A, 0) == A

    def test_nearer_parent(self, tr):
        p = on(tr, (A, B), 1, F(1, 16))
        assert ancestor(tr, p, 0) == A
        assert pseudo_ancestor(tr, p) == B

    def test_outside_ball(self, tr):
        with pytest.raises(OutsideStabilityBall):
            ancestor(tr, on(tr, (A, B), 1, F(1, 4)), 0)

    def test_one_lipschitz(self, tr):
        ball = in_ball(tr, 1)
        for p, q in itertools.combinations(ball, 2):
            assert skein_distance(tr, ancestor(tr, p, 1), ancestor(tr, q, 1)) <= skein_distance(tr, p, q)

    def test_stability(self, tr):
        ball = in_ball(tr, 1)
        v = stability_report(tr, 1, itertools.combinations(ball, 2))
        assert v.ok

    def test_same_ancestor_pair(self, tr):
        p = on(tr, (A, B), 1, F(1, 16))
        v = stability_report(tr, 0, [(p, A)])
        assert v.ok and v.witness == 1

    def test_report_propagates_ball_error(self, tr):
        with pytest.raises(OutsideStabilityBall):
            stability_report(tr, 0, [(A, on(tr, (A, B), 1, F(1, 4)))])


class TestChain:
    def test_base(self, tr):
        assert chain(tr, A, B) == [A, B]

    def test_one_descent(self, tr):
        p = on(tr, (A, B), 1, F(1, 4))
        assert chain(tr, p, B) == [p, A, B]

    def test_random_pairs(self, tr):
        rng = random.Random(2)
        for _ in range(60):
            p, q = rng.sample(tr.points, 2)
            path = chain(tr, p, q)
            assert path[0] == p and path[-1] == q
            assert all(skein_distance(tr, u, v) <= HALF for u, v in zip(path, path[1:]))


class TestClosure:
    def test_base_sample(self, tr):
        assert ancestor_closure(tr, [A, B]) == {A, B}

    def test_deep_point(self, tr):
        deep = next(p for p in tr.generations[2] if p.coord == F(1, 16) and order_of(p.parents[0]) == 1)
        out = ancestor_closure(tr, [deep])
        assert deep in out
        for x in out:
            assert x == deep or order_of(x) < order_of(deep)

    def test_idempotent(self, tr):
        sample = tr.generations[2][:10]
        once = ancestor_closure(tr, sample)
        assert ancestor_closure(tr, once) == once


class TestObstruction:
    def test_recipe(self, tr):
        r = isolated_point_obstruction(tr, [A, B], A, 2)
        assert r.chain == (A, B) and r.eps == HALF and r.gap_budget == F(1, 4)
        t = r.instantiate(3, HALF)
        assert all(g.length < F(1, 4) for g in t.gaps)

    def test_not_a_member(self, tr):
        with pytest.raises(NotIsolated):
            isolated_point_obstruction(tr, [A, B], on(tr, (A, B), 1, F(1, 16)), 2)

    def test_singleton(self, tr):
        with pytest.raises(NotIsolated):
            isolated_point_obstruction(tr, [A], A, 2)
