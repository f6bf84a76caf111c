"""
Asymptotic bounds, the one-switching baseline and sweeps against them.
"""

from .asymptotics import (
    limiting_time,
    min_temperature_for_time,
    min_time_for_temperature,
    power_law_bound,
    power_law_crossover,
    s_bracket,
    switch_count_window,
    tau0,
)
from .baseline import salamon_limit_time, salamon_min_time, salamon_protocol, salamon_times
from .report import (
    BoundReport,
    ScalingFit,
    bound_report,
    fit_time_scaling,
    locate_switching_crossover,
    sweep_bound_reports,
    sweep_optimal_times,
)

__all__ = [
    "BoundReport",
    "ScalingFit",
    "bound_report",
    "fit_time_scaling",
    "limiting_time",
    "locate_switching_crossover",
    "min_temperature_for_time",
    "min_time_for_temperature",
    "power_law_bound",
    "power_law_crossover",
    "s_bracket",
    "salamon_limit_time",
    "salamon_min_time",
    "salamon_protocol",
    "salamon_times",
    "sweep_bound_reports",
    "sweep_optimal_times",
    "switch_count_window",
    "tau0",
]
