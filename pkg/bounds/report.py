"""
Comparisons between synthesized optimal times and the asymptotic laws:
per-gamma bound reports, log-spaced sweeps, the scaling fit, and the gamma
where extra switchings start to pay off.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import partial

import numpy as np
from scipy.optimize import bisect

from dynamics.errors import DomainError
from dynamics.model import NormalizedProblem
from engine.extremals import SignBranch, build_candidate
from engine.planner import enumerate_candidates, synthesize_optimal
from settings.model import DEFAULT_SETTINGS, SolverSettings

from .asymptotics import limiting_time, s_bracket, switch_count_window, tau0

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundReport:
    """Exact PLUS extremal at n = N against its large-gamma limit."""

    gamma: float
    N_lo: float
    N_hi: float
    N: int | None
    limiting_time: float | None = None
    exact_time: float | None = None
    relative_gap: float | None = None
    s: float | None = None
    s_lower: float | None = None
    s_upper: float | None = None

    @property
    def has_window_integer(self) -> bool:
        return self.N is not None

    @property
    def s_in_bracket(self) -> bool | None:
        if self.s is None or self.s_lower is None or self.s_upper is None:
            return None
        return self.s_lower <= self.s <= self.s_upper

    def to_dict(self) -> dict:
        data = asdict(self)
        data["s_in_bracket"] = self.s_in_bracket
        return data


def bound_report(
    gamma: float, settings: SolverSettings = DEFAULT_SETTINGS
) -> BoundReport:
    n_lo, n_hi, n = switch_count_window(gamma)
    if n is None:
        logger.warning(f"γ={gamma}: no positive integer in ({n_lo:.6g}, {n_hi:.6g})")
        return BoundReport(gamma, n_lo, n_hi, None)

    prob = NormalizedProblem.from_gamma(gamma)
    _, cand = synthesize_optimal(
        prob, n_values=[n], branches=[SignBranch.PLUS], settings=settings
    )
    limit = limiting_time(n)
    lower, upper = s_bracket(gamma, n)
    report = BoundReport(
        gamma=gamma,
        N_lo=n_lo,
        N_hi=n_hi,
        N=n,
        limiting_time=limit,
        exact_time=cand.total_time,
        relative_gap=abs(cand.total_time - limit) / limit,
        s=cand.s,
        s_lower=lower,
        s_upper=upper,
    )
    logger.info(
        f"γ={gamma}: N={n}, exact {cand.total_time:.12g} vs limit {limit:.12g} "
        f"(gap {report.relative_gap:.3e})"
    )
    return report


def solve_optimal_time(
    gamma: float, settings: SolverSettings = DEFAULT_SETTINGS
) -> dict:
    """One sweep row: the optimal extremal at gamma, next to the one-switch time."""
    prob = NormalizedProblem.from_gamma(gamma)
    _, cand = synthesize_optimal(prob, settings=settings)

    one_switch = build_candidate(0, SignBranch.PLUS, prob, settings) or build_candidate(
        0, SignBranch.MINUS, prob, settings
    )
    return {
        "gamma": gamma,
        "n": cand.n,
        "branch": cand.branch.value,
        "s": cand.s,
        "total_time": cand.total_time,
        "log_temperature_ratio": 2.0 * math.log(gamma),
        "one_switch_time": one_switch.total_time if one_switch else None,
    }


def log_spaced_gammas(gamma_min: float, gamma_max: float, points: int) -> list[float]:
    if not 1.0 < gamma_min <= gamma_max:
        raise DomainError(
            f"Need 1 < gamma_min ≤ gamma_max (γ > 1), got {gamma_min}, {gamma_max}"
        )
    if points < 1:
        raise DomainError(f"points must be at least 1, got {points}")
    if points == 1:
        return [float(gamma_min)]
    return [float(g) for g in np.geomspace(gamma_min, gamma_max, points)]


def sweep_optimal_times(
    gamma_min: float,
    gamma_max: float,
    points: int,
    workers: int = 1,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> list[dict]:
    """Optimal times over log-spaced gamma, in grid order."""
    gammas = log_spaced_gammas(gamma_min, gamma_max, points)
    logger.info(
        f"Sweeping {len(gammas)} γ values in [{gamma_min}, {gamma_max}] "
        f"with {workers} worker(s)"
    )
    solve = partial(solve_optimal_time, settings=settings)
    if workers <= 1:
        return [solve(g) for g in gammas]

    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(solve, gammas))


def sweep_bound_reports(
    gammas: list[float],
    workers: int = 1,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> list[BoundReport]:
    report = partial(bound_report, settings=settings)
    if workers <= 1:
        return [report(g) for g in gammas]

    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(report, gammas))


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares line total_time = slope * ln(T_h/T_c) + intercept."""

    slope: float
    intercept: float
    points: int

    @property
    def tau0(self) -> float:
        return tau0()

    @property
    def relative_deviation(self) -> float:
        return abs(self.slope - self.tau0) / self.tau0

    def to_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "points": self.points,
            "tau0": self.tau0,
            "relative_deviation": self.relative_deviation,
        }


def fit_time_scaling(rows: list[dict]) -> ScalingFit:
    """Regress optimal time on ln(T_h/T_c) = 2 ln(gamma)."""
    if len(rows) < 2:
        raise DomainError(f"A scaling fit needs at least 2 rows, got {len(rows)}")
    x = np.array([2.0 * math.log(r["gamma"]) for r in rows])
    y = np.array([r["total_time"] for r in rows])
    slope, intercept = np.polyfit(x, y, 1)
    fit = ScalingFit(float(slope), float(intercept), len(rows))
    logger.info(
        f"Scaling fit over {len(rows)} points: slope {fit.slope:.6g} vs τ0 "
        f"{fit.tau0:.6g} ({fit.relative_deviation:.2%})"
    )
    return fit


def _multi_switch_advantage(gamma: float, settings: SolverSettings) -> float:
    """One-switch time minus the best time with 2n+1 > 1 switchings (or -1)."""
    prob = NormalizedProblem.from_gamma(gamma)
    candidates = enumerate_candidates(prob, settings=settings)
    single = [c.total_time for c in candidates if c.n == 0]
    multi = [c.total_time for c in candidates if c.n >= 1]
    if not multi:
        return -1.0
    if not single:
        return 1.0
    return min(single) - min(multi)


def locate_switching_crossover(
    gamma_lo: float = 1.5,
    gamma_hi: float = 100.0,
    xtol: float = 1e-8,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> float | None:
    """
    The gamma above which the optimum needs more than one switching.

    Returns None when the sign of the advantage does not change on
    [gamma_lo, gamma_hi].
    """
    advantage = partial(_multi_switch_advantage, settings=settings)
    lo_value, hi_value = advantage(gamma_lo), advantage(gamma_hi)
    if not (lo_value < 0.0 < hi_value):
        logger.warning(
            f"No one→three switching crossover on [{gamma_lo}, {gamma_hi}] "
            f"(advantages {lo_value:.3e}, {hi_value:.3e})"
        )
        return None

    gamma = float(bisect(advantage, gamma_lo, gamma_hi, xtol=xtol))
    logger.info(f"Multi-switching protocols win above γ ≈ {gamma:.10g}")
    return gamma
