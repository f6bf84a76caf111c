"""
Tests for the brute-force oracle.
"""

from dataclasses import replace

import pytest

from dynamics.errors import DomainError, InfeasibleScheduleError
from dynamics.model import NormalizedProblem
from engine.extremals import SignBranch, build_candidates
from engine.planner import synthesize_optimal
from oracle.shooting import (
    SwitchingSchedule,
    brute_force_min_time,
    brute_force_search,
    endpoint_error,
    reference_durations,
)
from settings.model import DEFAULT_SETTINGS


def schedule_of(cand) -> SwitchingSchedule:
    return SwitchingSchedule(
        (cand.tau_i,) + (cand.tau_u2, cand.tau_u1) * cand.n + (cand.tau_f,)
    )


class TestSwitchingSchedule:
    """Test cases for SwitchingSchedule."""

    def test_properties(self, problem_gamma2):
        schedule = SwitchingSchedule((0.5, 0.25, 0.5, 0.25))
        assert schedule.n == 1
        assert schedule.total_time == pytest.approx(1.5)
        assert schedule.controls(problem_gamma2) == [1 / 16, 1.0, 1 / 16, 1.0]
        assert schedule.to_protocol(problem_gamma2).is_bang_bang()

    @pytest.mark.parametrize("durations", [(), (1.0,), (1.0, 1.0, 1.0), (1.0, 0.0)])
    def test_invalid_schedules(self, durations):
        with pytest.raises(DomainError):
            SwitchingSchedule(durations)


class TestEndpointError:
    """Test cases for endpoint_error."""

    def test_analytic_schedule_hits_target(self, one_switch_candidate, problem_gamma2):
        assert endpoint_error(schedule_of(one_switch_candidate), problem_gamma2) < 1e-8

    def test_perturbation_misses(self, one_switch_candidate, problem_gamma2):
        durations = list(schedule_of(one_switch_candidate).durations)
        durations[0] += 0.1
        assert endpoint_error(SwitchingSchedule(tuple(durations)), problem_gamma2) > 1e-3

    def test_near_trivial_target(self):
        gamma = 1.0 + 1e-6
        prob = NormalizedProblem.from_gamma(gamma)
        error = endpoint_error(SwitchingSchedule((1e-12, 1e-12)), prob)
        assert error == pytest.approx(gamma - 1.0, rel=1e-3)

    @pytest.mark.parametrize("gamma", [1.5, 2.0, 5.0])
    def test_every_analytic_candidate_feasible(self, gamma):
        prob = NormalizedProblem.from_gamma(gamma)
        for n in (0, 1):
            for cand in build_candidates(n, SignBranch.PLUS, prob):
                assert endpoint_error(schedule_of(cand), prob) < 1e-6


class TestReferenceDurations:
    """Test cases for the search box scale."""

    def test_from_analytic_candidate(self, one_switch_candidate, problem_gamma2):
        ref = reference_durations(problem_gamma2, 0)
        assert ref == pytest.approx([one_switch_candidate.tau_i, one_switch_candidate.tau_f])

    def test_quarter_period_fallback(self, problem_gamma2, monkeypatch):
        monkeypatch.setattr("oracle.shooting.build_candidates", lambda *args: [])
        ref = reference_durations(problem_gamma2, 3)
        assert len(ref) == 8
        assert ref[0] == pytest.approx(3.141592653589793 / (4.0 * 0.25))
        assert ref[1] == pytest.approx(3.141592653589793 / 4.0)


@pytest.mark.slow
class TestBruteForce:
    """Oracle agreement with the analytic extremals."""

    def test_gamma2_one_switch(self, one_switch_candidate, problem_gamma2):
        result = brute_force_search(problem_gamma2, 0)
        analytic = one_switch_candidate.total_time
        assert result.total_time == pytest.approx(analytic, rel=1e-3)
        assert result.total_time >= analytic * (1.0 - 1e-3)
        assert result.endpoint_error < DEFAULT_SETTINGS.endpoint_atol
        assert result.seeds_feasible >= 1

    def test_gamma5_three_switchings(self):
        prob = NormalizedProblem.from_gamma(5.0)
        analytic = [c.total_time for b in SignBranch for c in build_candidates(1, b, prob)]
        assert analytic
        oracle = brute_force_min_time(prob, 1)
        assert oracle == pytest.approx(min(analytic), rel=1e-3)

    def test_gamma5_matches_synthesis(self):
        prob = NormalizedProblem.from_gamma(5.0)
        _, best = synthesize_optimal(prob)
        oracle = min(brute_force_min_time(prob, n) for n in (0, 1))
        assert oracle == pytest.approx(best.total_time, rel=1e-3)
        assert oracle >= best.total_time * (1.0 - 1e-3)


def test_negative_n_rejected(problem_gamma2):
    with pytest.raises(DomainError):
        brute_force_search(problem_gamma2, -1)


def test_tiny_budget_rejected(problem_gamma2):
    with pytest.raises(DomainError, match="budget"):
        brute_force_search(problem_gamma2, 2, settings=replace(DEFAULT_SETTINGS, oracle_grid_budget=8))


def test_unreachable_tolerance_is_infeasible(problem_gamma2):
    coarse = replace(DEFAULT_SETTINGS, oracle_grid_points=4, oracle_seeds=1)
    with pytest.raises(InfeasibleScheduleError):
        brute_force_search(problem_gamma2, 0, tolerance=0.0, settings=coarse)
