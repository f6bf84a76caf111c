import logging
import math
from dataclasses import dataclass

import numpy as np

from dynamics.errors import ConsistencyError, SynthesisError
from dynamics.model import NormalizedProblem, PhaseState, Protocol, TrajectorySample
from dynamics.simulate import endpoint, simulate_protocol
from propagators.closed_form import propagate_batch, propagate_segment
from settings.model import DEFAULT_SETTINGS, SolverSettings

from .evidence import EvidenceCollector
from .extremals import ExtremalCandidate, SignBranch, candidate_to_protocol

logger = logging.getLogger(__name__)

_START = PhaseState(1.0, 0.0)
_TIMING_ULPS = 16.0
_FD_SCALE = 1e3


@dataclass(frozen=True)
class SwitchingGeometry:
    """
    States at the switching instants of an extremal, in order.

    ``tolerances`` holds, per point, the relative spread of (x2/x1)^2 that
    rounding the segment durations can produce on its own.
    """

    points: tuple[PhaseState, ...]
    tolerances: tuple[float, ...] = ()

    @property
    def ratios(self) -> list[float]:
        return [p.x2 / p.x1 for p in self.points]

    def tolerance(self, k: int, rtol: float) -> float:
        floor = self.tolerances[k] if k < len(self.tolerances) else 0.0
        return max(rtol, floor)

    def check(self, s: float, rtol: float) -> None:
        """Raise ConsistencyError unless every (x2/x1)^2 equals s and signs alternate."""
        for k, ratio in enumerate(self.ratios):
            if not math.isclose(ratio**2, s, rel_tol=self.tolerance(k, rtol)):
                raise ConsistencyError(
                    f"Switching point {k}: (x2/x1)^2 = {ratio**2!r} differs from s = {s!r}"
                )
            expected_sign = 1.0 if k % 2 == 0 else -1.0
            if math.copysign(1.0, ratio) != expected_sign:
                raise ConsistencyError(
                    f"Switching point {k}: ratio {ratio!r} breaks the sign alternation"
                )


def timing_conditioning(protocol: Protocol) -> tuple[float, ...]:
    """
    Relative spread of (x2/x1)^2 at each switching point under duration rounding.

    Slopes with respect to every duration come from forward differences,
    all perturbations propagated at once. Each duration is taken to carry
    a few ulps of absolute error, scaled by the segment's own period.
    """
    segments = protocol.segments
    m = len(segments)
    if m < 2:
        return ()

    durations = np.array([seg.duration for seg in segments])
    periods = np.array([1.0 / math.sqrt(seg.u) for seg in segments])
    timing = _TIMING_ULPS * np.finfo(float).eps * (durations + periods)
    # differences taken close to the error scale, where the response is linear
    steps = _FD_SCALE * timing

    # row 0 is the unperturbed run, row j + 1 perturbs duration j
    table = np.tile(durations, (m + 1, 1))
    table[1:] += np.diag(steps)

    x1, x2 = np.ones(m + 1), np.zeros(m + 1)
    ratios = []
    for k in range(m - 1):
        x1, x2 = propagate_batch(x1, x2, segments[k].u, table[:, k])
        ratios.append(x2 / x1)
    r = np.array(ratios)

    slopes = np.abs(r[:, 1:] - r[:, :1]) / steps
    spread = 2.0 * (slopes @ timing) / np.abs(r[:, 0])
    return tuple(float(v) for v in spread)


def target_distance(state: PhaseState, prob: NormalizedProblem) -> float:
    """Largest coordinate distance from the target (gamma, 0)."""
    return max(abs(state.x1 - prob.gamma), abs(state.x2))


class Evaluator:
    """Verifies candidates against forward simulation and picks the fastest."""

    @staticmethod
    def switching_geometry(
        cand: ExtremalCandidate,
        prob: NormalizedProblem,
        settings: SolverSettings = DEFAULT_SETTINGS,
    ) -> SwitchingGeometry:
        protocol = candidate_to_protocol(cand, prob)
        state = _START
        points = []
        for seg in protocol.segments[:-1]:
            state = propagate_segment(state, seg.u, seg.duration)
            points.append(state)

        geometry = SwitchingGeometry(tuple(points), timing_conditioning(protocol))
        geometry.check(cand.s, settings.ratio_rtol)
        return geometry

    @staticmethod
    def evaluate_candidate(
        cand: ExtremalCandidate,
        prob: NormalizedProblem,
        collector: EvidenceCollector | None = None,
        settings: SolverSettings = DEFAULT_SETTINGS,
    ) -> dict:
        """
        Run the endpoint, switching-geometry and time-identity checks.

        Acceptance rests on the endpoint and the time identity; the geometry
        check is evidence for reports and ``verify``.

        Returns a result dict; every check is also recorded in ``collector``.
        """
        collector = collector if collector is not None else EvidenceCollector()
        subject = f"γ={prob.gamma:.12g} {cand.label} s={cand.s:.12g}"
        protocol = candidate_to_protocol(cand, prob)

        final = endpoint(protocol, _START)
        error = target_distance(final, prob)
        endpoint_ok = error < settings.endpoint_atol
        collector.add_check(
            "endpoint",
            subject,
            endpoint_ok,
            measured=error,
            threshold=settings.endpoint_atol,
            details={"x1": final.x1, "x2": final.x2},
        )

        try:
            Evaluator.switching_geometry(cand, prob, settings)
            geometry_ok, message = True, ""
        except ConsistencyError as e:
            geometry_ok, message = False, str(e)
        worst = max(timing_conditioning(protocol), default=0.0)
        # recorded only; endpoint and time identity decide acceptance
        collector.add_check(
            "switching_geometry",
            subject,
            geometry_ok,
            threshold=max(settings.ratio_rtol, worst),
            error_message=message,
        )

        simulated_total = protocol.boundaries[-1]
        identity_gap = abs(simulated_total - cand.total_time) / cand.total_time
        identity_ok = identity_gap < 1e-9
        collector.add_check(
            "time_identity", subject, identity_ok, measured=identity_gap, threshold=1e-9
        )

        passed = endpoint_ok and identity_ok
        if passed:
            logger.debug(f"  {subject}: verified, total_time={cand.total_time:.12g}")
        else:
            logger.warning(f"  {subject}: verification failed (endpoint error {error:.3e})")

        return {
            "candidate": cand,
            "passed": passed,
            "endpoint": final,
            "endpoint_error": error,
        }

    @staticmethod
    def select_optimal(
        candidates: list[ExtremalCandidate], tie_atol: float = DEFAULT_SETTINGS.tie_atol
    ) -> ExtremalCandidate:
        """
        The fastest candidate.

        Times within ``tie_atol`` count as equal; ties go to fewer switchings,
        then to the PLUS branch.
        """
        if not candidates:
            raise SynthesisError("No extremal candidate to select from")

        fastest = min(c.total_time for c in candidates)
        tied = [c for c in candidates if c.total_time - fastest <= tie_atol]
        return min(
            tied, key=lambda c: (c.n, c.branch is not SignBranch.PLUS, c.total_time)
        )

    @staticmethod
    def simulate_candidate(
        cand: ExtremalCandidate,
        prob: NormalizedProblem,
        sample_dt: float = DEFAULT_SETTINGS.sample_dt,
    ) -> list[TrajectorySample]:
        return simulate_protocol(candidate_to_protocol(cand, prob), _START, sample_dt)
