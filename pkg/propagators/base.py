from abc import ABC, abstractmethod

from dynamics.model import PhaseState


class BasePropagator(ABC):
    """Abstract base class for constant-control segment propagators."""

    # Exact propagators may jump straight from a segment start to any
    # sample time; approximate ones must be stepped sample to sample.
    exact: bool = False

    @abstractmethod
    def propagate(self, state: PhaseState, u: float, duration: float) -> PhaseState:
        """Advance ``state`` under constant control ``u`` for ``duration``."""
        pass

    @abstractmethod
    def can_handle(self, u: float) -> bool:
        """Check if this propagator supports the given control value."""
        pass

    @property
    def name(self) -> str:
        return self.__class__.__name__
