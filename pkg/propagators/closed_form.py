"""
Exact propagation of the Ermakov system under a constant control.

Along a segment with control u the quantity c = x2^2 + u x1^2 + 1/x1^2 is
conserved, and y = x1^2 oscillates between the turning points

    y_min = 2 / (c + sqrt(c^2 - 4u)),    y_max = 1 / (u y_min)

at angular frequency 2 sqrt(u). With theta the phase measured from the
inner turning point,

    y(t)  = y_min cos^2(theta) + y_max sin^2(theta)
    y'(t) = (sqrt(c^2 - 4u) / sqrt(u)) sin(2 theta),    theta = theta0 + sqrt(u) t

Both terms of y are non-negative, so a deep dive towards y_min keeps its
relative precision. c^2 - 4u is formed as (c - 2 sqrt(u)) (c + 2 sqrt(u))
with c - 2 sqrt(u) = x2^2 + (sqrt(u) x1 - 1/x1)^2, which is exact near
the fixed point.
"""

import math

import numpy as np

from dynamics.errors import DomainError, NumericError
from dynamics.model import PhaseState

from .base import BasePropagator


def _check_inputs(u: float, duration: float) -> None:
    if not u > 0.0:
        raise DomainError(f"Control must be positive (repulsive traps unsupported), got u={u}")
    if duration < 0.0:
        raise DomainError(f"Duration must be non-negative, got {duration}")


def propagate_segment(state: PhaseState, u: float, duration: float) -> PhaseState:
    """Advance ``state`` exactly under constant control ``u``."""
    _check_inputs(u, duration)
    if duration == 0.0:
        return state

    x1, x2 = state.x1, state.x2
    w = math.sqrt(u)
    y0 = x1 * x1
    c = x2 * x2 + u * y0 + 1.0 / y0
    root = math.sqrt((x2 * x2 + (w * x1 - 1.0 / x1) ** 2) * (c + 2.0 * w))
    y_min = 2.0 / (c + root)
    y_max = (c + root) / (2.0 * u)

    # cos and sin of 2 theta0 are proportional to these
    theta = 0.5 * math.atan2(2.0 * x1 * x2 * w, x2 * x2 + 1.0 / y0 - u * y0) + w * duration
    sin_t, cos_t = math.sin(theta), math.cos(theta)

    y = y_min * cos_t**2 + y_max * sin_t**2
    ydot = root / w * 2.0 * sin_t * cos_t

    if not (y > 0.0 and math.isfinite(y)):
        raise NumericError(f"Closed-form propagation left x1 > 0: y={y}")

    new_x1 = math.sqrt(y)
    return PhaseState(new_x1, ydot / (2.0 * new_x1))


def propagate_batch(
    x1: np.ndarray, x2: np.ndarray, u: float, duration: np.ndarray | float
) -> tuple[np.ndarray, np.ndarray]:
    """
    Vectorized ``propagate_segment`` over arrays of states and/or durations.

    Inputs broadcast against each other; returns (x1, x2) arrays.
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    duration = np.asarray(duration, dtype=float)
    if not u > 0.0:
        raise DomainError(f"Control must be positive (repulsive traps unsupported), got u={u}")
    if np.any(duration < 0.0):
        raise DomainError("Durations must be non-negative")
    if np.any(x1 <= 0.0):
        raise DomainError("x1 must be positive")

    w = math.sqrt(u)
    y0 = x1 * x1
    c = x2 * x2 + u * y0 + 1.0 / y0
    root = np.sqrt((x2 * x2 + (w * x1 - 1.0 / x1) ** 2) * (c + 2.0 * w))
    y_min = 2.0 / (c + root)
    y_max = (c + root) / (2.0 * u)

    theta = 0.5 * np.arctan2(2.0 * x1 * x2 * w, x2 * x2 + 1.0 / y0 - u * y0) + w * duration
    sin_t, cos_t = np.sin(theta), np.cos(theta)

    y = y_min * cos_t**2 + y_max * sin_t**2
    ydot = root / w * 2.0 * sin_t * cos_t

    if np.any(~(y > 0.0)):
        raise NumericError("Closed-form propagation left x1 > 0")

    new_x1 = np.sqrt(y)
    return new_x1, ydot / (2.0 * new_x1)


class ClosedFormPropagator(BasePropagator):
    """Exact harmonic solution in y = x1^2."""

    exact = True

    def propagate(self, state: PhaseState, u: float, duration: float) -> PhaseState:
        return propagate_segment(state, u, duration)

    def can_handle(self, u: float) -> bool:
        return u > 0.0
