"""
Exceptions raised across the cooling solver.
"""


class CoolingError(Exception):
    """Base class for every error raised by this package."""


class DomainError(CoolingError, ValueError):
    """An input violates a precondition (gamma <= 1, negative duration, ...)."""


class NumericError(CoolingError, ArithmeticError):
    """Floating-point evaluation left its valid range."""


class ConsistencyError(CoolingError):
    """A structural law that must hold by construction was violated."""


class SynthesisError(CoolingError):
    """No extremal candidate could be built."""


class InfeasibleScheduleError(CoolingError):
    """The oracle grid contains no schedule that reaches the target."""
