from .base import BasePropagator
from .closed_form import ClosedFormPropagator, propagate_batch, propagate_segment
from .runge_kutta import RungeKuttaPropagator, integrate_numeric

__all__ = [
    "BasePropagator",
    "ClosedFormPropagator",
    "RungeKuttaPropagator",
    "integrate_numeric",
    "propagate_batch",
    "propagate_segment",
]
