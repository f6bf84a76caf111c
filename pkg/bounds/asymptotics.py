"""
Large-gamma limits of the optimal extremals and the temperature bounds
they imply. All times are normalized by 1/omega_h unless stated otherwise.
"""

import logging
import math

from scipy.optimize import brentq

from dynamics.errors import DomainError

logger = logging.getLogger(__name__)

LN5 = math.log(5.0)
ACOS_3_5 = math.acos(3.0 / 5.0)

# limits of tau_i, tau_f and one (tau_u1 + tau_u2) period as s -> 1/4
FIRST_SEGMENT_LIMIT = 1.0
LAST_SEGMENT_LIMIT = ACOS_3_5 / 2.0
PERIOD_LIMIT = 2.0 + (math.pi + ACOS_3_5) / 2.0


def switch_count_window(gamma: float) -> tuple[float, float, int | None]:
    """
    The open unit interval (N_lo, N_hi) around ln(2 gamma^2)/ln 5 - 3/2 and
    the positive integer N inside it, if any.
    """
    if not gamma > 1.0:
        raise DomainError(f"Frequency ratio must satisfy γ > 1, got γ={gamma}")

    base = (2.0 * math.log(gamma) + math.log(2.0)) / LN5
    n_lo, n_hi = base - 2.0, base - 1.0
    candidate = math.floor(n_lo) + 1
    if candidate < n_hi and candidate >= 1:
        return n_lo, n_hi, candidate
    return n_lo, n_hi, None


def limiting_time(n: int) -> float:
    """Large-gamma total time of the PLUS extremal with 2n+1 switchings."""
    if n < 0:
        raise DomainError(f"N must be non-negative, got {n}")
    return FIRST_SEGMENT_LIMIT + LAST_SEGMENT_LIMIT + n * PERIOD_LIMIT


def tau0() -> float:
    """Time per e-fold of cooling, about 2.507."""
    return PERIOD_LIMIT / LN5


def min_time_for_temperature(T_c: float, T_h: float) -> float:
    """tau0 ln(T_h / T_c); zero when no cooling is asked for."""
    if not (T_c > 0.0 and T_h > 0.0):
        raise DomainError(f"Temperatures must be positive, got T_c={T_c}, T_h={T_h}")
    if T_c > T_h:
        raise DomainError(f"Need T_c ≤ T_h, got T_c={T_c} > T_h={T_h}")
    return tau0() * math.log(T_h / T_c)


def min_temperature_for_time(tau: float, T_h: float) -> float:
    """T_h exp(-tau / tau0), the lowest temperature reachable within tau."""
    if tau < 0.0:
        raise DomainError(f"Duration must be non-negative, got {tau}")
    return T_h * math.exp(-tau / tau0())


def power_law_bound(tau: float, T_h: float, omega_h: float) -> float:
    """T_h / (omega_h tau)^2, the one-switching bound; tau in physical time."""
    if not tau > 0.0:
        raise DomainError(f"Duration must be positive, got {tau}")
    return T_h / (omega_h * tau) ** 2


def power_law_crossover(omega_h: float = 1.0) -> float:
    """
    Physical time beyond which the exponential bound stays below the
    power law.

    In normalized time x the two bounds meet where 2 ln x = x / tau0; the
    difference peaks at x = 2 tau0, so the later crossing lies above it.
    """
    if not omega_h > 0.0:
        raise DomainError(f"omega_h must be positive, got {omega_h}")
    t0 = tau0()

    def gap(x: float) -> float:
        return 2.0 * math.log(x) - x / t0

    lo = 2.0 * t0
    hi = 2.0 * lo
    while gap(hi) > 0.0:
        hi *= 2.0
    x = brentq(gap, lo, hi, xtol=1e-14)
    logger.debug(f"Exponential bound beats the power law beyond ω_h τ = {x:.12g}")
    return x / omega_h


def s_bracket(gamma: float, n: int) -> tuple[float, float]:
    """
    Lower and upper bounds on the PLUS switching ratio at n = N.

    The lower bound comes from r_N(s_hat) = l+(s_m) at large gamma.
    """
    if not gamma > 1.0:
        raise DomainError(f"Frequency ratio must satisfy γ > 1, got γ={gamma}")
    if n < 0:
        raise DomainError(f"N must be non-negative, got {n}")
    q = 5.0 ** (1.0 + 1.0 / (n + 1))
    u1 = gamma**-4
    lower = (1.0 - q * u1) / (q - 1.0)
    upper = (1.0 - u1) ** 2 / 4.0
    return lower, upper
