from dataclasses import dataclass, fields


@dataclass(frozen=True)
class SolverSettings:
    """Every tolerance and numerical knob used by the solver, in one record."""

    # core dynamics
    casimir_rtol: float = 1e-9  # closed-form trajectories
    numeric_casimir_rtol: float = 1e-6  # Runge-Kutta trajectories
    invariant_rtol: float = 1e-12  # x2^2 + u x1^2 + 1/x1^2 within a segment
    roundtrip_atol: float = 1e-12
    group_atol: float = 1e-10
    x1_floor: float = 1e-12  # integrator underflow guard
    sample_dt: float = 0.01

    # extremal synthesis
    endpoint_atol: float = 1e-6
    root_rtol: float = 1e-10
    ratio_rtol: float = 1e-9
    acos_clamp: float = 1e-12
    root_xtol: float = 1e-14
    scan_brackets: int = 2048
    scan_floor_factor: float = 1e-16
    tie_atol: float = 1e-12
    gamma_cap: float = 1e3  # double-precision guarantees stop here

    # oracle
    oracle_grid_points: int = 64
    oracle_grid_budget: int = 1 << 20
    oracle_box_factor: float = 1.2
    oracle_refine_tol: float = 1e-6
    oracle_seeds: int = 8

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.field_names()}


DEFAULT_SETTINGS = SolverSettings()
