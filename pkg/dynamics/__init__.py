"""
Core dynamics of the parametric oscillator: states, moments, propagation
of piecewise-constant protocols.
"""

from .errors import (
    ConsistencyError,
    CoolingError,
    DomainError,
    InfeasibleScheduleError,
    NumericError,
    SynthesisError,
)
from .model import (
    ControlSegment,
    NormalizedProblem,
    PhaseState,
    PhysicalParams,
    Protocol,
    TrajectorySample,
    ZState,
)

__all__ = [
    "ConsistencyError",
    "ControlSegment",
    "CoolingError",
    "DomainError",
    "InfeasibleScheduleError",
    "NormalizedProblem",
    "NumericError",
    "PhaseState",
    "PhysicalParams",
    "Protocol",
    "SynthesisError",
    "TrajectorySample",
    "ZState",
]
