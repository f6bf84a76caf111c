"""
Trajectory simulation under piecewise-constant control, and the invariant
checks run along simulated trajectories.
"""

import logging
import math

from propagators.base import BasePropagator
from propagators.closed_form import ClosedFormPropagator
from settings.model import DEFAULT_SETTINGS

from .errors import DomainError
from .model import PhaseState, PhysicalParams, Protocol, TrajectorySample
from .moments import casimir_of_state

logger = logging.getLogger(__name__)

# Sample times closer than this to a segment boundary are merged into it.
_MERGE_RTOL = 1e-12


def segment_invariant(state: PhaseState, u: float) -> float:
    """c = x2^2 + u x1^2 + 1/x1^2, constant along a segment with control u."""
    return state.x2**2 + u * state.x1**2 + 1.0 / state.x1**2


def _segment_sample_offsets(
    start: float, duration: float, sample_dt: float
) -> list[float]:
    """Offsets of grid times k * sample_dt lying strictly inside (start, start + duration)."""
    end = start + duration
    merge = _MERGE_RTOL * max(1.0, end)
    k = math.floor(start / sample_dt) + 1
    offsets = []
    while True:
        t = k * sample_dt
        if t >= end - merge:
            break
        if t > start + merge:
            offsets.append(t - start)
        k += 1
    return offsets


def simulate_protocol(
    protocol: Protocol,
    x0: PhaseState,
    sample_dt: float = DEFAULT_SETTINGS.sample_dt,
    propagator: BasePropagator | None = None,
) -> list[TrajectorySample]:
    """
    Simulate ``protocol`` from ``x0``.

    Samples are taken on the grid k * sample_dt and at every segment
    boundary. A boundary sample carries the control that starts there; the
    final sample carries the last control and holds the protocol endpoint.
    """
    if not sample_dt > 0.0:
        raise DomainError(f"sample_dt must be positive, got {sample_dt}")
    propagator = propagator or ClosedFormPropagator()

    if not protocol.segments:
        return [TrajectorySample(0.0, x0, 1.0)]

    for seg in protocol.segments:
        if not propagator.can_handle(seg.u):
            raise DomainError(f"{propagator.name} cannot handle u={seg.u}")

    samples = [TrajectorySample(0.0, x0, protocol.segments[0].u)]
    state = x0
    start = 0.0
    last = len(protocol.segments) - 1

    for index, seg in enumerate(protocol.segments):
        current = state
        elapsed = 0.0
        for offset in _segment_sample_offsets(start, seg.duration, sample_dt):
            if propagator.exact:
                current = propagator.propagate(state, seg.u, offset)
            else:
                current = propagator.propagate(current, seg.u, offset - elapsed)
            elapsed = offset
            samples.append(TrajectorySample(start + offset, current, seg.u))

        if propagator.exact:
            state = propagator.propagate(state, seg.u, seg.duration)
        else:
            state = propagator.propagate(current, seg.u, seg.duration - elapsed)

        start = protocol.total_time if index == last else start + seg.duration
        next_u = seg.u if index == last else protocol.segments[index + 1].u
        samples.append(TrajectorySample(start, state, next_u))

    logger.debug(
        f"Simulated {len(protocol.segments)} segments with {propagator.name}: "
        f"{len(samples)} samples, endpoint ({state.x1:.12g}, {state.x2:.12g})"
    )
    return samples


def endpoint(
    protocol: Protocol, x0: PhaseState, propagator: BasePropagator | None = None
) -> PhaseState:
    """Final state of ``protocol`` without intermediate sampling."""
    propagator = propagator or ClosedFormPropagator()
    state = x0
    for seg in protocol.segments:
        state = propagator.propagate(state, seg.u, seg.duration)
    return state


def casimir_values(
    samples: list[TrajectorySample], params: PhysicalParams
) -> list[float]:
    return [casimir_of_state(s.state, params) for s in samples]


def casimir_drift(samples: list[TrajectorySample], params: PhysicalParams) -> float:
    """Relative spread (max - min) / mean of the Casimir value along a trajectory."""
    values = casimir_values(samples, params)
    mean = math.fsum(values) / len(values)
    return (max(values) - min(values)) / abs(mean)

