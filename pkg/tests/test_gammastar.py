import dataclasses
import itertools
from fractions import Fraction

import pytest

from threadskein.cantor import build_thread
from threadskein.errors import DeepeningExhausted, FactorialGuard, PreconditionFailed, SearchGuard
from threadskein.exactnum import union_contains
from threadskein.gammastar import (
    FamilyThread,
    brute_force_map_search,
    check_trace,
    gamma_star_prefix,
    jump_infeasibility,
)
from threadskein.lipmap import lip_const
from threadskein.thread import from_gaps
from threadskein.verify import standard_family

from oracles import lip

F = Fraction


@pytest.fixture(scope="module")
def run5():
    return gamma_star_prefix(standard_family(), 2, F(1, 4), 5)


class TestRun:
    def test_first_step(self):
        run = gamma_star_prefix([FamilyThread.from_rule("half-bound", F(1, 2))], 2, F(1, 4), 1)
        assert run.produced == (F(1, 64),)
        assert run.trace[0].alphas[0] == F(1, 8)

    def test_empty(self):
        run = gamma_star_prefix(standard_family(), 2, F(1, 4), 0)
        assert run.produced == () and run.trace == ()

    def test_bound_and_decrease(self, run5):
        g = run5.produced
        assert len(g) == 5
        for k, gk in enumerate(g, start=1):
            assert 0 < gk < F(1, 2 ** (k + 1)) * F(1, 2) * F(1, 4)
        assert all(a > b for a, b in zip(g, g[1:]))

    def test_trace_checks(self, run5):
        assert check_trace(run5).ok

    def test_selected_gaps_escape_sweepings(self, run5):
        for rec in run5.trace:
            for sig in rec.sigmas:
                covered = []
                for sweep, n in zip(sig.sweepings, sig.selected):
                    covered.append(sweep)
                    assert not union_contains(covered, rec.gaps[n - 1])

    def test_alphas_shrink_along_orderings(self, run5):
        for rec in run5.trace:
            for sig in rec.sigmas:
                seen = [rec.alphas[0]]
                for n in sig.selected:
                    assert rec.alphas[n - 1] < min(seen)
                    seen.append(rec.alphas[n - 1])

    def test_tampering_is_caught(self, run5):
        rec = run5.trace[2]
        bad = dataclasses.replace(rec, gamma=rec.gamma * 2)
        tampered = dataclasses.replace(run5, trace=run5.trace[:2] + (bad,) + run5.trace[3:])
        assert not check_trace(tampered).ok

    def test_deterministic(self, run5):
        assert gamma_star_prefix(standard_family(), 2, F(1, 4), 5) == run5

    def test_factorial_guard(self):
        with pytest.raises(FactorialGuard):
            gamma_star_prefix(standard_family(), 2, F(1, 4), 8)

    def test_fixed_thread_cannot_deepen(self):
        fixed = from_gaps(1, F(1, 2), [(F(1, 2), F(5, 8))])
        with pytest.raises(DeepeningExhausted):
            gamma_star_prefix([fixed], 1, F(1, 4), 3)

    def test_needs_k_at_least_one(self):
        with pytest.raises(PreconditionFailed):
            gamma_star_prefix(standard_family(), F(1, 2), F(1, 4), 1)


class TestCertificate:
    def test_singleton_infeasible(self, T_A):
        assert jump_infeasibility(T_A, [F(1, 64)], 2, 1).infeasible

    def test_singleton_feasible(self, T_A):
        cert = jump_infeasibility(T_A, [F(1, 8)], 1, 1)
        assert cert.outcome == "FEASIBLE"
        assert cert.assignment == (((T_A.gaps_by_length()[0],), 0),)

    def test_vacuous(self, T_LINE):
        assert jump_infeasibility(T_LINE, [F(1, 8)], 1, 0).outcome == "FEASIBLE"

    def test_budget_precondition(self, T_A):
        with pytest.raises(PreconditionFailed):
            jump_infeasibility(T_A, [F(1, 4)], 2, 1)

    def test_merged_block(self, T_A):
        # one source gap of 1/4 can jump both (1/3,19/48) and (1/2,5/8) at K = 2
        assert jump_infeasibility(T_A, [F(7, 48)], 2, 2).outcome == "FEASIBLE"
        assert jump_infeasibility(T_A, [F(1, 32)], 2, 2).infeasible


class TestBruteForce:
    def test_identity(self, T_LINE):
        found = brute_force_map_search(T_LINE, T_LINE, 1, F(1, 4))
        assert found is not None and found.values == found.support

    def test_zero_lipschitz(self, T_LINE):
        assert brute_force_map_search(T_LINE, T_LINE, 0, F(1, 4)) is None

    def test_guard(self, T_A):
        with pytest.raises(SearchGuard):
            brute_force_map_search(T_A, T_A, 2, F(1, 64), guard=100)

    def test_guard_override(self, T_LINE, monkeypatch):
        monkeypatch.setenv("SKEIN_GUARD_OVERRIDE", "1000000")
        assert brute_force_map_search(T_LINE, T_LINE, 1, F(1, 8), guard=10) is not None

    @pytest.mark.parametrize("K", [F(1), F(3, 2), F(2), F(4)])
    def test_agrees_with_exhaustive_enumeration(self, T_A, K):
        source = from_gaps(1, F(1, 2), [(F(1, 4), F(1, 4) + F(1, 16))])
        found = brute_force_map_search(source, T_A, K, F(1, 4))
        xs = source.sample_points(F(1, 4))
        vs = T_A.sample_points(F(1, 4))
        exists = False
        for mid in itertools.combinations_with_replacement(vs, len(xs) - 2):
            pts = list(zip(xs, (F(0), *mid, F(1))))
            if lip(pts, (1, source.width), (1, T_A.width)) <= K:
                exists = True
                break
        assert (found is not None) == exists
        if found is not None:
            assert lip_const(found) <= K and found.is_monotone() and found.is_endpoint_fixing()

    def test_infeasible_implies_none(self, run5, T_A):
        cert = jump_infeasibility(T_A, run5.produced, 2, 3)
        assert cert.infeasible
        source = build_thread(run5.produced, len(run5.produced), F(1, 2))
        assert brute_force_map_search(source, T_A, 2, F(1, 32)) is None
