"""
Solver settings: one record of tolerances, loadable from YAML.
"""

from .loader import apply_overrides, load_settings
from .model import DEFAULT_SETTINGS, SolverSettings

__all__ = [
    "DEFAULT_SETTINGS",
    "SolverSettings",
    "apply_overrides",
    "load_settings",
]
