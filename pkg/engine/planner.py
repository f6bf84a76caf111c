"""
Planning and orchestration of extremal synthesis.
"""

import logging
import math

from dynamics.errors import DomainError, NumericError, SynthesisError
from dynamics.model import NormalizedProblem, Protocol
from settings.model import DEFAULT_SETTINGS, SolverSettings

from .evaluator import Evaluator
from .evidence import EvidenceCollector
from .extremals import (
    ExtremalCandidate,
    SignBranch,
    build_candidates,
    candidate_to_protocol,
)

logger = logging.getLogger(__name__)


def default_n_max(gamma: float) -> int:
    """ceil(2 ln(gamma) / ln 5) + 2: two indices past the largest feasible N."""
    return math.ceil(2.0 * math.log(gamma) / math.log(5.0)) + 2


class CandidatePlan:
    """The (n, branch) pairs to enumerate for one problem."""

    def __init__(self, prob: NormalizedProblem):
        self.prob = prob
        self.entries: list[tuple[int, SignBranch]] = []

    def add(self, n: int, branch: SignBranch) -> None:
        if n < 0:
            raise DomainError(f"n must be non-negative, got {n}")
        if (n, branch) not in self.entries:
            self.entries.append((n, branch))

    def n_values(self) -> list[int]:
        return sorted({n for n, _ in self.entries})

    def __len__(self) -> int:
        return len(self.entries)

    def validate(self) -> bool:
        if not self.entries:
            logger.warning(f"Candidate plan for γ={self.prob.gamma} is empty")
            return False

        logger.info(
            f"Candidate plan validated: γ={self.prob.gamma}, {len(self.entries)} "
            f"(n, branch) pairs, n ≤ {max(self.n_values())}"
        )
        return True


class Planner:
    """Plans and runs the enumeration of extremal candidates."""

    def __init__(self, settings: SolverSettings = DEFAULT_SETTINGS):
        self.settings = settings
        self.evidence_collector: EvidenceCollector | None = None

    def create_plan(
        self,
        prob: NormalizedProblem,
        n_max: int | None = None,
        n_values: list[int] | None = None,
        branches: list[SignBranch] | None = None,
    ) -> CandidatePlan:
        """
        Enumerate n = 0..n_max (or exactly ``n_values``) on every requested branch.
        """
        if prob.gamma > self.settings.gamma_cap:
            raise DomainError(
                f"γ={prob.gamma} exceeds the double-precision cap {self.settings.gamma_cap}"
            )

        if n_values is None:
            n_max = default_n_max(prob.gamma) if n_max is None else n_max
            if n_max < 0:
                raise DomainError(f"n_max must be non-negative, got {n_max}")
            n_values = list(range(n_max + 1))
        branches = branches or list(SignBranch)

        plan = CandidatePlan(prob)
        for n in n_values:
            for branch in branches:
                plan.add(n, branch)
        return plan

    def execute_plan(
        self, plan: CandidatePlan, evidence_collector: EvidenceCollector
    ) -> list[ExtremalCandidate]:
        """
        Build every candidate in the plan and keep those that pass verification.

        Candidates that fail are logged and recorded as evidence, never returned.
        """
        if not plan.validate():
            logger.error("Cannot execute an empty candidate plan")
            return []

        self.evidence_collector = evidence_collector
        prob = plan.prob
        verified: list[ExtremalCandidate] = []

        for n, branch in plan.entries:
            subject = f"γ={prob.gamma:.12g} n={n}{branch.value}"
            try:
                candidates = build_candidates(n, branch, prob, self.settings)
            except (NumericError, DomainError) as e:
                logger.warning(f"  {subject}: candidate construction failed: {e}")
                evidence_collector.add_check(
                    "construction", subject, False, error_message=str(e)
                )
                continue

            if not candidates:
                logger.debug(f"  {subject}: no switching ratio")
                continue

            for cand in candidates:
                result = Evaluator.evaluate_candidate(
                    cand, prob, evidence_collector, self.settings
                )
                if result["passed"]:
                    verified.append(cand)

        logger.info(
            f"Synthesis for γ={prob.gamma}: {len(verified)} verified candidate(s)"
        )
        return verified


def synthesize_optimal(
    prob: NormalizedProblem,
    n_max: int | None = None,
    *,
    n_values: list[int] | None = None,
    branches: list[SignBranch] | None = None,
    settings: SolverSettings = DEFAULT_SETTINGS,
    collector: EvidenceCollector | None = None,
) -> tuple[Protocol, ExtremalCandidate]:
    """
    The minimum-time verified extremal and its protocol.

    Args:
        prob: Problem to solve
        n_max: Largest n to enumerate (default ceil(2 ln γ / ln 5) + 2)
        n_values: Enumerate exactly these n instead of 0..n_max
        branches: Restrict the sign branches (default both)
        settings: Solver tolerances
        collector: Receives the per-candidate verification evidence

    Returns:
        (protocol, candidate) of the fastest verified extremal
    """
    planner = Planner(settings)
    plan = planner.create_plan(prob, n_max, n_values, branches)
    collector = collector if collector is not None else EvidenceCollector()

    candidates = planner.execute_plan(plan, collector)
    if not candidates:
        logger.error(f"No verified extremal for γ={prob.gamma}")
        raise SynthesisError(f"No extremal candidate found for γ={prob.gamma}")

    winner = Evaluator.select_optimal(candidates, settings.tie_atol)
    logger.info(
        f"Optimal protocol for γ={prob.gamma}: {winner.label}, "
        f"s={winner.s:.12g}, total_time={winner.total_time:.12g}"
    )
    return candidate_to_protocol(winner, prob), winner


def enumerate_candidates(
    prob: NormalizedProblem,
    n_max: int | None = None,
    settings: SolverSettings = DEFAULT_SETTINGS,
    collector: EvidenceCollector | None = None,
) -> list[ExtremalCandidate]:
    """Every verified candidate, fastest first (the candidate table)."""
    planner = Planner(settings)
    plan = planner.create_plan(prob, n_max)
    candidates = planner.execute_plan(plan, collector or EvidenceCollector())
    return sorted(candidates, key=lambda c: (c.total_time, c.n))
