"""
The classic one-switching protocol: hold omega_c, then omega_h.
"""

import math

from dynamics.errors import DomainError
from dynamics.model import NormalizedProblem, Protocol
from engine.extremals import stable_arccos


def _check_frequencies(omega_c: float, omega_h: float) -> None:
    if not 0.0 < omega_c < omega_h:
        raise DomainError(
            f"Frequency ratio must satisfy γ > 1 (0 < omega_c < omega_h), "
            f"got omega_c={omega_c}, omega_h={omega_h}"
        )


def salamon_times(omega_c: float, omega_h: float) -> tuple[float, float]:
    """
    Physical durations (tau_c, tau_h) at omega_c and omega_h.

    Both share arccos((w_c^2 + w_h^2) / (w_c + w_h)^2).
    """
    _check_frequencies(omega_c, omega_h)
    total_sq = (omega_c + omega_h) ** 2
    one_minus = 2.0 * omega_c * omega_h / total_sq
    one_plus = 2.0 * (omega_c**2 + omega_h**2 + omega_c * omega_h) / total_sq
    angle = stable_arccos(one_minus, one_plus)
    return angle / (2.0 * omega_c), angle / (2.0 * omega_h)


def salamon_protocol(omega_c: float, omega_h: float) -> Protocol:
    """The two-segment protocol in normalized time (durations times omega_h)."""
    prob = NormalizedProblem.from_frequencies(omega_c, omega_h)
    tau_c, tau_h = salamon_times(omega_c, omega_h)
    return Protocol.from_segments(
        prob.gamma, [(prob.u1, omega_h * tau_c), (prob.u2, omega_h * tau_h)]
    )


def salamon_limit_time(omega_c: float, omega_h: float) -> float:
    """Physical duration 1 / sqrt(w_h w_c) approached as omega_c -> 0."""
    _check_frequencies(omega_c, omega_h)
    return 1.0 / math.sqrt(omega_h * omega_c)


def salamon_min_time(T_c: float, T_h: float, omega_h: float) -> float:
    """Physical duration sqrt(T_h / T_c) / omega_h the protocol needs to reach T_c."""
    if not 0.0 < T_c <= T_h:
        raise DomainError(f"Need 0 < T_c ≤ T_h, got T_c={T_c}, T_h={T_h}")
    return math.sqrt(T_h / T_c) / omega_h
