"""
Brute-force check of the analytic extremal times.

The search space is the alternating bang-bang class itself: 2n+2 segment
durations, u1 first and u2 last. A coarse grid over the durations picks
seeds, SLSQP minimizes the total time under the two terminal equality
constraints, and a least-squares shoot on the last two durations polishes
the endpoint.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares, minimize

from dynamics.errors import DomainError, InfeasibleScheduleError, NumericError
from dynamics.model import NormalizedProblem, PhaseState, Protocol
from engine.extremals import SignBranch, build_candidates
from propagators.closed_form import propagate_batch, propagate_segment
from settings.model import DEFAULT_SETTINGS, SolverSettings

logger = logging.getLogger(__name__)

_LOWER = 1e-12


@dataclass(frozen=True)
class SwitchingSchedule:
    """Durations of an alternating schedule, u1 first."""

    durations: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "durations", tuple(float(d) for d in self.durations))
        if len(self.durations) < 2 or len(self.durations) % 2:
            raise DomainError(
                f"A schedule needs an even number (≥ 2) of durations, got {len(self.durations)}"
            )
        if not all(d > 0.0 for d in self.durations):
            raise DomainError(f"All durations must be positive, got {self.durations}")

    @property
    def n(self) -> int:
        return len(self.durations) // 2 - 1

    @property
    def total_time(self) -> float:
        return math.fsum(self.durations)

    def controls(self, prob: NormalizedProblem) -> list[float]:
        return [prob.u1 if k % 2 == 0 else prob.u2 for k in range(len(self.durations))]

    def to_protocol(self, prob: NormalizedProblem) -> Protocol:
        return Protocol.from_segments(
            prob.gamma, list(zip(self.controls(prob), self.durations))
        )


@dataclass(frozen=True)
class OracleResult:
    n: int
    total_time: float
    schedule: SwitchingSchedule
    endpoint_error: float
    seeds_tried: int
    seeds_feasible: int


def _terminal_residual(durations: np.ndarray, prob: NormalizedProblem) -> np.ndarray:
    state = PhaseState(1.0, 0.0)
    for k, d in enumerate(durations):
        u = prob.u1 if k % 2 == 0 else prob.u2
        state = propagate_segment(state, u, max(float(d), 0.0))
    return np.array([state.x1 - prob.gamma, state.x2])


def endpoint_error(schedule: SwitchingSchedule, prob: NormalizedProblem) -> float:
    """Euclidean distance from the simulated endpoint to (gamma, 0)."""
    return float(np.hypot(*_terminal_residual(np.array(schedule.durations), prob)))


def reference_durations(
    prob: NormalizedProblem, n: int, settings: SolverSettings = DEFAULT_SETTINGS
) -> list[float]:
    """
    Per-slot scale of the search box.

    Taken from the fastest analytic candidate with the same n; without one,
    a quarter period of the slot's control.
    """
    candidates = []
    for branch in SignBranch:
        try:
            candidates.extend(build_candidates(n, branch, prob, settings))
        except (NumericError, DomainError) as e:
            logger.warning(f"n={n}{branch.value}: no reference candidate ({e})")

    if candidates:
        best = min(candidates, key=lambda c: c.total_time)
        return [best.tau_i] + [best.tau_u2, best.tau_u1] * n + [best.tau_f]

    logger.warning(f"γ={prob.gamma}, n={n}: no analytic candidate, using quarter periods")
    return [
        math.pi / (4.0 * math.sqrt(prob.u1 if k % 2 == 0 else prob.u2))
        for k in range(2 * n + 2)
    ]


def _grid_errors(
    axes: list[np.ndarray], prob: NormalizedProblem
) -> tuple[np.ndarray, np.ndarray]:
    """Endpoint errors and total times on the full tensor grid of ``axes``."""
    x1 = np.ones(())
    x2 = np.zeros(())
    totals = np.zeros(())
    for k, axis in enumerate(axes):
        u = prob.u1 if k % 2 == 0 else prob.u2
        shape = [1] * k + [len(axis)]
        d = axis.reshape(shape)
        x1, x2 = propagate_batch(x1[..., None], x2[..., None], u, d)
        totals = totals[..., None] + d
    return np.hypot(x1 - prob.gamma, x2), totals


def _pick_seeds(
    errors: np.ndarray, totals: np.ndarray, count: int
) -> list[tuple[int, ...]]:
    """Closest-to-target grid points plus the fastest among the near ones."""
    flat_errors = errors.ravel()
    flat_totals = np.broadcast_to(totals, errors.shape).ravel()
    count = min(count, flat_errors.size)

    closest = np.argpartition(flat_errors, count - 1)[:count]
    near = np.flatnonzero(flat_errors <= np.quantile(flat_errors, 0.01))
    fastest = near[np.argsort(flat_totals[near])[:count]]

    picked = list(dict.fromkeys(int(i) for i in np.concatenate([closest, fastest])))
    return [np.unravel_index(i, errors.shape) for i in picked]


def _refine(
    seed: np.ndarray, box: np.ndarray, prob: NormalizedProblem, settings: SolverSettings
) -> np.ndarray:
    """SLSQP on the total time with the terminal constraints, then a shooting polish."""
    bounds = [(_LOWER, b) for b in box]
    result = minimize(
        lambda d: float(np.sum(d)),
        seed,
        jac=lambda d: np.ones_like(d),
        method="SLSQP",
        bounds=bounds,
        constraints=[{"type": "eq", "fun": lambda d: _terminal_residual(d, prob)}],
        tol=settings.oracle_refine_tol**2,
        options={"maxiter": 300},
    )
    durations = np.clip(result.x, _LOWER, box)

    head = durations[:-2]
    polish = least_squares(
        lambda tail: _terminal_residual(np.concatenate([head, tail]), prob),
        np.maximum(durations[-2:], 2.0 * _LOWER),
        bounds=(_LOWER, np.inf),
        xtol=1e-15,
        ftol=1e-15,
        gtol=1e-15,
    )
    return np.concatenate([head, polish.x])


def brute_force_search(
    prob: NormalizedProblem,
    n: int,
    tolerance: float = DEFAULT_SETTINGS.endpoint_atol,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> OracleResult:
    if n < 0:
        raise DomainError(f"n must be non-negative, got {n}")

    dims = 2 * n + 2
    box = settings.oracle_box_factor * np.array(reference_durations(prob, n, settings))
    points = min(
        settings.oracle_grid_points,
        int(math.floor(settings.oracle_grid_budget ** (1.0 / dims) + 1e-9)),
    )
    if points < 2:
        raise DomainError(
            f"Grid budget {settings.oracle_grid_budget} too small for n={n}"
        )
    axes = [np.linspace(b / points, b, points) for b in box]
    logger.info(
        f"Oracle γ={prob.gamma}, n={n}: {points}^{dims} grid over box {box.tolist()}"
    )

    errors, totals = _grid_errors(axes, prob)
    seeds = _pick_seeds(errors, totals, settings.oracle_seeds)

    best: tuple[float, np.ndarray, float] | None = None
    feasible = 0
    for index in seeds:
        seed = np.array([axes[k][i] for k, i in enumerate(index)])
        try:
            durations = _refine(seed, box, prob, settings)
        except (NumericError, DomainError, ValueError) as e:
            logger.warning(f"  seed {seed.tolist()} failed to refine: {e}")
            continue

        error = float(np.hypot(*_terminal_residual(durations, prob)))
        if error >= tolerance:
            logger.debug(f"  seed {seed.tolist()} converged off target ({error:.3e})")
            continue

        feasible += 1
        total = math.fsum(durations)
        if best is None or total < best[0]:
            best = (total, durations, error)

    if best is None:
        logger.error(f"Oracle γ={prob.gamma}, n={n}: no feasible schedule from {len(seeds)} seeds")
        raise InfeasibleScheduleError(
            f"No schedule with {2 * n + 1} switchings reached (γ, 0) within {tolerance} "
            f"from a {points}^{dims} grid; refine the grid"
        )

    total, durations, error = best
    logger.info(f"Oracle γ={prob.gamma}, n={n}: best total time {total:.10g}")
    return OracleResult(
        n=n,
        total_time=total,
        schedule=SwitchingSchedule(tuple(durations)),
        endpoint_error=error,
        seeds_tried=len(seeds),
        seeds_feasible=feasible,
    )


def brute_force_min_time(
    prob: NormalizedProblem,
    n: int,
    tolerance: float = DEFAULT_SETTINGS.endpoint_atol,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> float:
    """Shortest schedule with 2n+1 switchings found by the grid-and-refine search."""
    return brute_force_search(prob, n, tolerance, settings).total_time
