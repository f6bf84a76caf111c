"""
Independent brute-force check of the analytic minimum times.
"""

from .shooting import (
    OracleResult,
    SwitchingSchedule,
    brute_force_min_time,
    brute_force_search,
    endpoint_error,
)

__all__ = [
    "OracleResult",
    "SwitchingSchedule",
    "brute_force_min_time",
    "brute_force_search",
    "endpoint_error",
]
