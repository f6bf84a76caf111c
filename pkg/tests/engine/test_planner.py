"""
Unit tests for the planner module.
"""

from unittest.mock import patch

import pytest

from dynamics.errors import DomainError, NumericError, SynthesisError
from dynamics.model import NormalizedProblem, PhaseState, PhysicalParams
from dynamics.simulate import casimir_drift, endpoint, simulate_protocol
from engine.evaluator import Evaluator
from engine.evidence import EvidenceCollector
from engine.extremals import SignBranch, one_switch_ratio
from engine.planner import (
    CandidatePlan,
    Planner,
    default_n_max,
    enumerate_candidates,
    synthesize_optimal,
)
from settings.model import DEFAULT_SETTINGS


class TestCandidatePlan:
    """Test cases for the CandidatePlan class."""

    def test_initialization(self, problem_gamma2):
        plan = CandidatePlan(problem_gamma2)
        assert plan.entries == []
        assert len(plan) == 0

    def test_add_deduplicates(self, problem_gamma2):
        plan = CandidatePlan(problem_gamma2)
        plan.add(0, SignBranch.PLUS)
        plan.add(0, SignBranch.PLUS)
        plan.add(2, SignBranch.MINUS)
        assert len(plan) == 2
        assert plan.n_values() == [0, 2]

    def test_add_rejects_negative_n(self, problem_gamma2):
        with pytest.raises(DomainError):
            CandidatePlan(problem_gamma2).add(-1, SignBranch.PLUS)

    def test_validate(self, problem_gamma2):
        plan = CandidatePlan(problem_gamma2)
        assert plan.validate() is False
        plan.add(0, SignBranch.PLUS)
        assert plan.validate() is True


class TestPlanner:
    """Test cases for the Planner class."""

    def test_default_n_max(self):
        assert default_n_max(2.0) == 3
        assert default_n_max(100.0) == 8

    def test_create_plan_default(self, problem_gamma2):
        plan = Planner().create_plan(problem_gamma2)
        assert plan.n_values() == [0, 1, 2, 3]
        assert len(plan) == 8

    def test_create_plan_restricted(self, problem_gamma2):
        plan = Planner().create_plan(
            problem_gamma2, n_values=[4], branches=[SignBranch.PLUS]
        )
        assert plan.entries == [(4, SignBranch.PLUS)]

    def test_create_plan_rejects_negative_n_max(self, problem_gamma2):
        with pytest.raises(DomainError):
            Planner().create_plan(problem_gamma2, n_max=-1)

    def test_create_plan_enforces_gamma_cap(self):
        with pytest.raises(DomainError, match="cap"):
            Planner().create_plan(NormalizedProblem.from_gamma(2000.0))

    def test_execute_empty_plan(self, problem_gamma2):
        collector = EvidenceCollector()
        assert Planner().execute_plan(CandidatePlan(problem_gamma2), collector) == []

    def test_execute_plan_records_evidence(self, problem_gamma2):
        planner = Planner()
        collector = EvidenceCollector()
        plan = planner.create_plan(problem_gamma2, n_values=[0], branches=[SignBranch.PLUS])
        verified = planner.execute_plan(plan, collector)

        assert len(verified) == 1
        assert planner.evidence_collector is collector
        assert len(collector.evidence_list) == 3

    def test_execute_plan_survives_numeric_failure(self, problem_gamma2):
        planner = Planner()
        collector = EvidenceCollector()
        plan = planner.create_plan(problem_gamma2, n_values=[0], branches=[SignBranch.PLUS])
        with patch("engine.planner.build_candidates", side_effect=NumericError("overflow")):
            assert planner.execute_plan(plan, collector) == []
        assert collector.get_failed_checks()[0].check == "construction"


class TestSynthesizeOptimal:
    """Test cases for synthesize_optimal."""

    def test_one_switch_optimal_at_gamma2(self, problem_gamma2):
        protocol, cand = synthesize_optimal(problem_gamma2)
        assert cand.n == 0
        assert cand.branch is SignBranch.PLUS
        assert cand.s == pytest.approx(one_switch_ratio(problem_gamma2), rel=1e-10)
        assert protocol.switching_count == 1
        assert protocol.total_time == pytest.approx(cand.total_time)

    def test_no_candidate_raises(self, problem_gamma2):
        with pytest.raises(SynthesisError):
            synthesize_optimal(problem_gamma2, n_values=[3], branches=[SignBranch.PLUS])

    def test_collector_receives_evidence(self, problem_gamma2):
        collector = EvidenceCollector()
        synthesize_optimal(problem_gamma2, collector=collector)
        assert collector.get_passed_checks()

    def test_multi_switching_at_gamma100(self, problem_gamma100):
        _, cand = synthesize_optimal(problem_gamma100)
        assert cand.n >= 1

    @pytest.mark.parametrize("gamma", [1.5, 10.0, 100.0])
    def test_optimal_not_slower_than_one_switch(self, gamma):
        prob = NormalizedProblem.from_gamma(gamma)
        _, best = synthesize_optimal(prob)
        _, single = synthesize_optimal(prob, n_values=[0])
        assert best.total_time <= single.total_time + DEFAULT_SETTINGS.tie_atol

    def test_multi_switching_at_gamma_cap(self, problem_gamma1000):
        protocol, cand = synthesize_optimal(problem_gamma1000)
        assert cand.n >= 2
        # the one-switch protocol needs about gamma time units here
        assert cand.total_time < 100.0
        final = endpoint(protocol, PhaseState(1.0, 0.0))
        assert abs(final.x1 - 1000.0) < DEFAULT_SETTINGS.endpoint_atol
        assert abs(final.x2) < DEFAULT_SETTINGS.endpoint_atol

    def test_enumerate_candidates_sorted(self, problem_gamma100):
        candidates = enumerate_candidates(problem_gamma100)
        times = [c.total_time for c in candidates]
        assert times == sorted(times)
        best = Evaluator.select_optimal(candidates)
        assert best.total_time == pytest.approx(times[0], abs=DEFAULT_SETTINGS.tie_atol)


@pytest.mark.integration
@pytest.mark.parametrize("gamma", [1.2, 1.5, 2.0, 5.0, 10.0, 50.0, 100.0, 1000.0])
def test_optimal_protocol_end_to_end(gamma):
    """Endpoint, Casimir drift and switching geometry of the optimal protocol."""
    prob = NormalizedProblem.from_gamma(gamma)
    params = PhysicalParams.from_gamma(gamma)
    protocol, cand = synthesize_optimal(prob)
    start = PhaseState(1.0, 0.0)

    final = endpoint(protocol, start)
    assert abs(final.x1 - gamma) < 1e-6
    assert abs(final.x2) < 1e-6

    samples = simulate_protocol(protocol, start)
    assert casimir_drift(samples, params) < DEFAULT_SETTINGS.casimir_rtol

    geometry = Evaluator.switching_geometry(cand, prob)
    assert len(geometry.points) == cand.switchings
