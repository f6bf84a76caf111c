import math

from dynamics.errors import DomainError, NumericError
from dynamics.model import PhaseState
from settings.model import DEFAULT_SETTINGS

from .base import BasePropagator


def _rhs(x1: float, x2: float, u: float) -> tuple[float, float]:
    return x2, -u * x1 + 1.0 / x1**3


def integrate_numeric(
    state: PhaseState,
    u: float,
    duration: float,
    dt: float,
    x1_floor: float = DEFAULT_SETTINGS.x1_floor,
) -> PhaseState:
    """
    Fixed-step classical RK4 integration of x1' = x2, x2' = -u x1 + 1/x1^3.

    The step is shrunk to duration / ceil(duration / dt) so the last step
    lands on ``duration`` exactly.
    """
    if not dt > 0.0:
        raise DomainError(f"Step size must be positive, got dt={dt}")
    if duration < 0.0:
        raise DomainError(f"Duration must be non-negative, got {duration}")
    if not u > 0.0:
        raise DomainError(f"Control must be positive, got u={u}")
    if duration == 0.0:
        return state

    steps = max(1, math.ceil(duration / dt - 1e-9))
    h = duration / steps
    x1, x2 = state.x1, state.x2

    for _ in range(steps):
        k1 = _rhs(x1, x2, u)
        a = x1 + 0.5 * h * k1[0]
        if a < x1_floor:
            raise NumericError(f"x1 fell below {x1_floor} (dt={dt} too coarse)")
        k2 = _rhs(a, x2 + 0.5 * h * k1[1], u)
        a = x1 + 0.5 * h * k2[0]
        if a < x1_floor:
            raise NumericError(f"x1 fell below {x1_floor} (dt={dt} too coarse)")
        k3 = _rhs(a, x2 + 0.5 * h * k2[1], u)
        a = x1 + h * k3[0]
        if a < x1_floor:
            raise NumericError(f"x1 fell below {x1_floor} (dt={dt} too coarse)")
        k4 = _rhs(a, x2 + h * k3[1], u)

        x1 += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
        x2 += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])

        if not (x1 >= x1_floor and math.isfinite(x2)):
            raise NumericError(f"x1 fell below {x1_floor} (dt={dt} too coarse)")

    return PhaseState(x1, x2)


class RungeKuttaPropagator(BasePropagator):
    """Fixed-step RK4, the cross-check for the closed form."""

    exact = False

    def __init__(self, dt: float, x1_floor: float = DEFAULT_SETTINGS.x1_floor):
        if not dt > 0.0:
            raise DomainError(f"Step size must be positive, got dt={dt}")
        self.dt = dt
        self.x1_floor = x1_floor

    def propagate(self, state: PhaseState, u: float, duration: float) -> PhaseState:
        return integrate_numeric(state, u, duration, self.dt, self.x1_floor)

    def can_handle(self, u: float) -> bool:
        return u > 0.0
