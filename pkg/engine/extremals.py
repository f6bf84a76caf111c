"""
Extremal trajectories of the time-optimal cooling problem.

An extremal with 2n+1 switchings starts with u1, alternates, and ends with
u2. All its switching points lie on the rays x2 = +-sqrt(s) x1, and the
switching ratio s solves l(s) = r_n(s) with

    l+(s) = (c + D) / (c1 + D1),  l-(s) = (c + D) / (c1 - D1)
    r_n(s) = ((s + u2) / (s + u1)) ** (n + 1)
    D1 = sqrt(c1^2 - 4(s + u1)),   D = sqrt(c^2 - 4(s + u2))

on 0 < s <= s_m = (1 - u1)^2 / 4. The segment times are arccosines whose
arguments sit within u1 = gamma**-4 of +-1 at large gamma, so every arccos
below is evaluated as 2 atan2(sqrt(1 - A), sqrt(1 + A)) with both 1 - A
and 1 + A in rationalized, cancellation-free form.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np
from scipy.optimize import bisect

from dynamics.errors import DomainError, NumericError
from dynamics.model import NormalizedProblem, PhaseState, Protocol
from settings.model import DEFAULT_SETTINGS, SolverSettings

logger = logging.getLogger(__name__)


class SignBranch(Enum):
    """Sign in front of D1 in the transcendental equation."""

    PLUS = "+"
    MINUS = "-"

    @property
    def sign(self) -> int:
        return 1 if self is SignBranch.PLUS else -1


class SegmentTimes(NamedTuple):
    tau_i: float
    tau_u1: float
    tau_u2: float
    tau_f: float


@dataclass(frozen=True)
class ExtremalCandidate:
    """One extremal: 2n+1 switchings on the given branch with ratio s."""

    n: int
    branch: SignBranch
    s: float
    tau_i: float
    tau_u1: float
    tau_u2: float
    tau_f: float
    total_time: float

    def __post_init__(self) -> None:
        if self.n < 0:
            raise DomainError(f"n must be non-negative, got {self.n}")
        if not self.s > 0.0:
            raise DomainError(f"Switching ratio must be positive, got s={self.s}")
        for name in ("tau_i", "tau_u1", "tau_u2", "tau_f"):
            if not getattr(self, name) > 0.0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)}")
        expected = composed_time(self.times, self.n)
        if not math.isclose(self.total_time, expected, rel_tol=1e-12):
            raise DomainError(
                f"total_time {self.total_time} differs from the composed time {expected}"
            )

    @property
    def times(self) -> SegmentTimes:
        return SegmentTimes(self.tau_i, self.tau_u1, self.tau_u2, self.tau_f)

    @property
    def switchings(self) -> int:
        return 2 * self.n + 1

    @property
    def label(self) -> str:
        return f"n={self.n}{self.branch.value}"


def composed_time(times: SegmentTimes, n: int) -> float:
    """tau_i + n (tau_u1 + tau_u2) + tau_f."""
    return math.fsum([times.tau_i, n * times.tau_u1, n * times.tau_u2, times.tau_f])


def s_max(prob: NormalizedProblem) -> float:
    """Upper end s_m = (1 - u1)^2 / 4 of the admissible switching ratios."""
    return (1.0 - prob.u1) ** 2 / 4.0


def _check_ratio(s: float, prob: NormalizedProblem) -> None:
    if not 0.0 < s <= s_max(prob):
        raise DomainError(f"Switching ratio s={s} outside (0, {s_max(prob)}]")


def _d1(s: float, prob: NormalizedProblem) -> float:
    # c1^2 - 4(s + u1) = (1 - u1)^2 - 4s, zero at s = s_m
    return math.sqrt(max((1.0 - prob.u1) ** 2 - 4.0 * s, 0.0))


def _excess(prob: NormalizedProblem) -> float:
    """E = sqrt(c^2 - 4 u2) = gamma^2 - gamma^-2."""
    g = prob.gamma
    return (g - 1.0 / g) * (g + 1.0 / g)


def _d(s: float, prob: NormalizedProblem) -> float:
    # c^2 - 4(s + u2) = E^2 - 4s
    return math.sqrt(max(_excess(prob) ** 2 - 4.0 * s, 0.0))


def transcendental_lhs(s: float, branch: SignBranch, prob: NormalizedProblem) -> float:
    _check_ratio(s, prob)
    d1 = _d1(s, prob)
    numerator = prob.c + _d(s, prob)
    if branch is SignBranch.PLUS:
        return numerator / (prob.c1 + d1)
    # c1 - D1 = 4(s + u1) / (c1 + D1)
    return numerator * (prob.c1 + d1) / (4.0 * (s + prob.u1))


def transcendental_rhs(s: float, n: int, prob: NormalizedProblem) -> float:
    if not s > 0.0:
        raise DomainError(f"Switching ratio must be positive, got s={s}")
    if n < 0:
        raise DomainError(f"n must be non-negative, got {n}")
    return math.exp((n + 1) * math.log1p((prob.u2 - prob.u1) / (s + prob.u1)))


def _log_residual(
    s: np.ndarray, n: int, branch: SignBranch, prob: NormalizedProblem
) -> np.ndarray:
    """log l(s) - log r_n(s), vectorized; zero at switching ratios."""
    u1 = prob.u1
    d1 = np.sqrt(np.maximum((1.0 - u1) ** 2 - 4.0 * s, 0.0))
    d = np.sqrt(np.maximum(_excess(prob) ** 2 - 4.0 * s, 0.0))
    log_lhs = np.log(prob.c + d)
    if branch is SignBranch.PLUS:
        log_lhs = log_lhs - np.log(prob.c1 + d1)
    else:
        log_lhs = log_lhs + np.log(prob.c1 + d1) - np.log(4.0 * (s + u1))
    return log_lhs - (n + 1) * np.log1p((prob.u2 - u1) / (s + u1))


def scan_grid(
    prob: NormalizedProblem, settings: SolverSettings = DEFAULT_SETTINGS
) -> np.ndarray:
    """
    Bracket endpoints for the root scan: uniform plus log-spaced points.

    The log-spaced half keeps roots near 1/gamma^2 bracketed at large gamma.
    """
    s_m = s_max(prob)
    floor = min(settings.scan_floor_factor * s_m, 1e-2 / prob.gamma**2)
    uniform = np.linspace(floor, s_m, settings.scan_brackets + 1)
    logarithmic = np.geomspace(floor, s_m, settings.scan_brackets + 1)
    grid = np.unique(np.concatenate([uniform, logarithmic]))
    grid[-1] = s_m
    return grid


def find_switch_ratios(
    n: int,
    branch: SignBranch,
    prob: NormalizedProblem,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> list[float]:
    """Every root of l(s) = r_n(s) in (0, s_m], ascending."""
    if n < 0:
        raise DomainError(f"n must be non-negative, got {n}")

    grid = scan_grid(prob, settings)
    with np.errstate(divide="ignore", invalid="ignore"):
        values = _log_residual(grid, n, branch, prob)

    def residual(s: float) -> float:
        return float(_log_residual(np.asarray(s), n, branch, prob))

    finite = np.isfinite(values)
    exact = np.flatnonzero(finite & (values == 0.0))
    crossing = np.flatnonzero(
        finite[:-1] & finite[1:] & (values[:-1] * values[1:] < 0.0)
    )

    roots = [float(grid[i]) for i in exact]
    for i in crossing:
        lo, hi = float(grid[i]), float(grid[i + 1])
        # relative to the bracket so small roots at large gamma keep their digits
        xtol = settings.root_xtol * min(1.0, lo)
        root = float(bisect(residual, lo, hi, xtol=xtol, maxiter=400))
        # l / r_n - 1 at the root; a sign flip across a kink is not a root
        mismatch = abs(math.expm1(residual(root)))
        if mismatch < settings.root_rtol:
            roots.append(root)
        else:
            logger.warning(
                f"n={n}{branch.value}, γ={prob.gamma}: dropping s={root!r}, "
                f"relative mismatch {mismatch:.2e}"
            )
    roots.sort()

    logger.debug(f"n={n}{branch.value}, γ={prob.gamma}: {len(roots)} root(s) {roots}")
    return roots


def solve_switch_ratio(
    n: int,
    branch: SignBranch,
    prob: NormalizedProblem,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> float | None:
    """
    The switching ratio for (n, branch), or None when l - r_n never changes sign.

    The PLUS root is unique; for MINUS the smallest root is returned.
    """
    roots = find_switch_ratios(n, branch, prob, settings)
    return roots[0] if roots else None


def stable_arccos(
    one_minus: float, one_plus: float, clamp: float = DEFAULT_SETTINGS.acos_clamp
) -> float:
    """
    arccos(A) given 1 - A and 1 + A.

    Each may undershoot zero by ``clamp`` before the argument is declared
    outside [-1, 1].
    """
    if one_minus < -clamp or one_plus < -clamp:
        raise NumericError(
            f"arccos argument outside [-1, 1]: 1-A={one_minus}, 1+A={one_plus}"
        )
    return 2.0 * math.atan2(math.sqrt(max(one_minus, 0.0)), math.sqrt(max(one_plus, 0.0)))


def segment_times(
    s: float,
    branch: SignBranch,
    prob: NormalizedProblem,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> SegmentTimes:
    """Durations of the first, intermediate u1, intermediate u2 and last segments."""
    _check_ratio(s, prob)
    u1, g = prob.u1, prob.gamma
    clamp = settings.acos_clamp

    # first segment, on the orbit c1 through (1, 0)
    d1 = _d1(s, prob)
    a = 1.0 - u1 - 2.0 * s
    den = (s + u1) * (1.0 - u1)
    if branch is SignBranch.PLUS:
        one_minus = u1 * (a + d1) / den
        one_plus = (2.0 * s + u1 * 4.0 * s / (1.0 - u1 + d1)) / den
    else:
        one_minus = 4.0 * s * u1 / ((a + d1) * (1.0 - u1))
        one_plus = (2.0 * s + u1 * (1.0 - u1) + u1 * d1) / den
    tau_i = stable_arccos(one_minus, one_plus, clamp) * g**2 / 2.0

    # last segment, on the orbit c through (gamma, 0)
    e = _excess(prob)
    d = _d(s, prob)
    c = prob.c
    p = (s + 1.0) * e + s * c
    one_minus = 2.0 * s * (c**2 - 2.0 + c * e) / ((p + d) * e)
    one_plus = (e - 2.0 * s / g**2 + d) / ((s + 1.0) * e)
    tau_f = stable_arccos(one_minus, one_plus, clamp) / 2.0

    tau_u1 = math.atan2(math.sqrt(u1), math.sqrt(s)) * g**2
    tau_u2 = math.pi - math.atan2(1.0, math.sqrt(s))

    return SegmentTimes(tau_i, tau_u1, tau_u2, tau_f)


def one_switch_ratio(prob: NormalizedProblem) -> float:
    """Closed-form ratio of the unique one-switching extremal."""
    g, u1 = prob.gamma, prob.u1
    # (c1 u2 - c u1) / (c - c1) reduces to gamma^-2
    return 1.0 / g**2 - ((1.0 - u1) / ((g - 1.0) * (g + 1.0) * (1.0 + u1))) ** 2


def one_switch_point(prob: NormalizedProblem) -> PhaseState:
    """Where the orbits c1 (control u1) and c (control u2) intersect with x2 > 0."""
    g, u1 = prob.gamma, prob.u1
    # (c - c1) / (u2 - u1) with c - c1 = (gamma^2 - 1)(1 + u1)
    x1 = math.sqrt((g - 1.0) * (g + 1.0) * (1.0 + u1) / (1.0 - u1))
    return PhaseState(x1, math.sqrt(one_switch_ratio(prob)) * x1)


def candidate_from_ratio(
    n: int,
    branch: SignBranch,
    s: float,
    prob: NormalizedProblem,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> ExtremalCandidate:
    times = segment_times(s, branch, prob, settings)
    return ExtremalCandidate(
        n=n,
        branch=branch,
        s=s,
        tau_i=times.tau_i,
        tau_u1=times.tau_u1,
        tau_u2=times.tau_u2,
        tau_f=times.tau_f,
        total_time=composed_time(times, n),
    )


def build_candidates(
    n: int,
    branch: SignBranch,
    prob: NormalizedProblem,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> list[ExtremalCandidate]:
    """One candidate per switching ratio found for (n, branch)."""
    return [
        candidate_from_ratio(n, branch, s, prob, settings)
        for s in find_switch_ratios(n, branch, prob, settings)
    ]


def build_candidate(
    n: int,
    branch: SignBranch,
    prob: NormalizedProblem,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> ExtremalCandidate | None:
    s = solve_switch_ratio(n, branch, prob, settings)
    if s is None:
        return None
    return candidate_from_ratio(n, branch, s, prob, settings)


def candidate_to_protocol(
    cand: ExtremalCandidate, prob: NormalizedProblem
) -> Protocol:
    """u1 for tau_i, then n (u2, u1) pairs, then u2 for tau_f."""
    segments = [(prob.u1, cand.tau_i)]
    for _ in range(cand.n):
        segments.append((prob.u2, cand.tau_u2))
        segments.append((prob.u1, cand.tau_u1))
    segments.append((prob.u2, cand.tau_f))
    return Protocol.from_segments(prob.gamma, segments)


def candidate_to_dict(cand: ExtremalCandidate) -> dict:
    return {
        "n": cand.n,
        "branch": cand.branch.value,
        "s": cand.s,
        "times": cand.times._asdict(),
        "total_time": cand.total_time,
    }
