import math
from dataclasses import dataclass, field
from itertools import accumulate

from .errors import DomainError

# u values of a protocol may differ from gamma**-4 by rounding when the
# protocol was built from frequencies rather than from gamma.
_BOUND_RTOL = 1e-12


@dataclass(frozen=True)
class PhysicalParams:
    """Trap frequencies, bath temperature and physical constants."""

    omega_c: float
    omega_h: float
    T_h: float
    hbar: float = 1.0
    k_b: float = 1.0
    mass: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 < self.omega_c < self.omega_h:
            raise DomainError(
                f"Frequency ratio must satisfy γ > 1 (0 < omega_c < omega_h), "
                f"got omega_c={self.omega_c}, "
                f"omega_h={self.omega_h}"
            )
        for name in ("T_h", "hbar", "k_b", "mass"):
            if not getattr(self, name) > 0.0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)}")

    @classmethod
    def from_gamma(
        cls, gamma: float, omega_h: float = 1.0, T_h: float = 1.0
    ) -> "PhysicalParams":
        """Physical data consistent with a bare frequency ratio (natural units)."""
        if not (math.isfinite(gamma) and gamma > 1.0):
            raise DomainError(f"Frequency ratio must satisfy γ > 1, got γ={gamma}")
        return cls(omega_c=omega_h / gamma**2, omega_h=omega_h, T_h=T_h)

    @property
    def gamma(self) -> float:
        return math.sqrt(self.omega_h / self.omega_c)

    @property
    def cold_temperature(self) -> float:
        """The effective temperature T_c = (omega_c / omega_h) T_h."""
        return self.omega_c / self.omega_h * self.T_h


@dataclass(frozen=True)
class NormalizedProblem:
    """The dimensionless time-optimal problem: reach (gamma, 0) from (1, 0)."""

    gamma: float
    u1: float = field(init=False)
    u2: float = field(init=False)

    def __post_init__(self) -> None:
        if not (math.isfinite(self.gamma) and self.gamma > 1.0):
            raise DomainError(f"Frequency ratio must satisfy γ > 1, got γ={self.gamma}")
        object.__setattr__(self, "u1", self.gamma**-4)
        object.__setattr__(self, "u2", 1.0)

    @classmethod
    def from_gamma(cls, gamma: float) -> "NormalizedProblem":
        return cls(float(gamma))

    @classmethod
    def from_frequencies(cls, omega_c: float, omega_h: float) -> "NormalizedProblem":
        if not 0.0 < omega_c < omega_h:
            raise DomainError(
                f"Frequency ratio must satisfy γ > 1 (0 < omega_c < omega_h), "
                f"got omega_c={omega_c}, omega_h={omega_h}"
            )
        return cls(math.sqrt(omega_h / omega_c))

    @classmethod
    def from_params(cls, params: PhysicalParams) -> "NormalizedProblem":
        return cls.from_frequencies(params.omega_c, params.omega_h)

    @property
    def c1(self) -> float:
        """Orbit constant of the first segment, through (1, 0) with u = u1."""
        return self.u1 + 1.0

    @property
    def c(self) -> float:
        """Orbit constant of the last segment, through (gamma, 0) with u = u2."""
        return self.u2 * self.gamma**2 + 1.0 / self.gamma**2

    def contains(self, u: float) -> bool:
        lo = self.u1 * (1.0 - _BOUND_RTOL)
        hi = self.u2 * (1.0 + _BOUND_RTOL)
        return lo <= u <= hi


@dataclass(frozen=True)
class PhaseState:
    """Dimensionless state: x1 = b, x2 = db/dt / omega_h."""

    x1: float
    x2: float

    def __post_init__(self) -> None:
        if not self.x1 > 0.0:
            raise DomainError(f"x1 must be positive, got {self.x1}")

    def as_tuple(self) -> tuple[float, float]:
        return (self.x1, self.x2)


@dataclass(frozen=True)
class ZState:
    """Second moments <m q^2>, <p^2/m>, <qp + pq>."""

    z1: float
    z2: float
    z3: float

    def __post_init__(self) -> None:
        if not (self.z1 > 0.0 and self.z2 > 0.0):
            raise DomainError(f"z1 and z2 must be positive, got z1={self.z1}, z2={self.z2}")

    @property
    def is_physical(self) -> bool:
        return self.z1 * self.z2 - self.z3**2 / 4.0 > 0.0


@dataclass(frozen=True)
class ControlSegment:
    """Constant control u held for a (normalized) duration."""

    u: float
    duration: float

    def __post_init__(self) -> None:
        if not self.u > 0.0:
            raise DomainError(f"Control must be positive, got u={self.u}")
        if not self.duration > 0.0:
            raise DomainError(f"Segment duration must be positive, got {self.duration}")

    def to_dict(self) -> dict:
        return {"u": self.u, "duration": self.duration}


@dataclass(frozen=True)
class Protocol:
    """Piecewise-constant control schedule on (0, total_time)."""

    gamma: float
    segments: tuple[ControlSegment, ...]
    total_time: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "segments", tuple(self.segments))
        expected = math.fsum(s.duration for s in self.segments)
        if not math.isclose(self.total_time, expected, rel_tol=1e-14, abs_tol=1e-300):
            raise DomainError(
                f"total_time {self.total_time} differs from the segment sum {expected}"
            )
        if self.segments:
            problem = NormalizedProblem(self.gamma)
            for seg in self.segments:
                if not problem.contains(seg.u):
                    raise DomainError(
                        f"Control u={seg.u} outside [{problem.u1}, {problem.u2}]"
                    )

    @classmethod
    def from_segments(
        cls, gamma: float, segments: list[tuple[float, float]]
    ) -> "Protocol":
        built = tuple(ControlSegment(u, d) for u, d in segments)
        return cls(gamma, built, math.fsum(s.duration for s in built))

    @classmethod
    def from_dict(cls, data: dict) -> "Protocol":
        segments = tuple(
            ControlSegment(float(s["u"]), float(s["duration"])) for s in data["segments"]
        )
        return cls(float(data["gamma"]), segments, float(data["total_time"]))

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "segments": [s.to_dict() for s in self.segments],
            "total_time": self.total_time,
        }

    @property
    def boundaries(self) -> list[float]:
        """Cumulative segment end times."""
        return list(accumulate(s.duration for s in self.segments))

    @property
    def switching_count(self) -> int:
        return max(len(self.segments) - 1, 0)

    def is_bang_bang(self) -> bool:
        """True for u1-first, u2-last strictly alternating schedules."""
        if len(self.segments) < 2 or len(self.segments) % 2:
            return False
        problem = NormalizedProblem(self.gamma)
        for k, seg in enumerate(self.segments):
            target = problem.u1 if k % 2 == 0 else problem.u2
            if not math.isclose(seg.u, target, rel_tol=_BOUND_RTOL):
                return False
        return True


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    state: PhaseState
    u: float
