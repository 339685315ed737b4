"""Switch-controlled memristor pair that records the black->output and
output->white intervals and turns them into signed weight updates.

The first spike of a slot closes k1, the second moves recording over to
k2, the third opens everything. Timestamps are kept by spike kind, so the
intervals handed to the learning rule do not depend on switch order.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Optional

from .codec import EventKind, SpikeEvent, TimingConfig
from .device import MemristorParams, MemristorState, conductance, integrate_interval


class ProtocolError(RuntimeError):
    """Spike delivered twice, out of order, or after the unit finished."""


class Phase(enum.Enum):
    IDLE = 0
    RECORDING_FIRST = 1
    RECORDING_SECOND = 2
    DONE = 3


_NEXT = {
    Phase.IDLE: Phase.RECORDING_FIRST,
    Phase.RECORDING_FIRST: Phase.RECORDING_SECOND,
    Phase.RECORDING_SECOND: Phase.DONE,
}
_FIELD = {EventKind.BLACK: "t_black", EventKind.OUTPUT: "t_out", EventKind.WHITE: "t_white"}


@dataclass(frozen=True)
class UnitPhase:
    tick_us: float
    m1: MemristorState
    m2: MemristorState
    phase: Phase = Phase.IDLE
    t_black: Optional[int] = None
    t_out: Optional[int] = None
    t_white: Optional[int] = None
    last_tick: Optional[int] = None

    @property
    def switch_k1(self) -> bool:
        return self.phase is Phase.RECORDING_FIRST

    @property
    def switch_k2(self) -> bool:
        return self.phase is Phase.RECORDING_SECOND


def new_unit(params: MemristorParams, timing: TimingConfig) -> UnitPhase:
    return UnitPhase(timing.tick_us, MemristorState(params), MemristorState(params))


def on_spike(unit: UnitPhase, event: SpikeEvent) -> UnitPhase:
    if unit.phase is Phase.DONE:
        raise ProtocolError(f"unit already done, got {event.kind.name} at {event.tick}")
    field = _FIELD[event.kind]
    if getattr(unit, field) is not None:
        raise ProtocolError(f"duplicate {event.kind.name} spike at tick {event.tick}")
    if unit.last_tick is not None and event.tick < unit.last_tick:
        raise ProtocolError(f"tick {event.tick} delivered after {unit.last_tick}")

    changes = {field: event.tick, "last_tick": event.tick, "phase": _NEXT[unit.phase]}
    if unit.phase is not Phase.IDLE:
        # close out whichever memristor was recording
        span = (event.tick - unit.last_tick) * unit.tick_us
        key = "m1" if unit.phase is Phase.RECORDING_FIRST else "m2"
        changes[key] = integrate_interval(getattr(unit, key), span)
    return replace(unit, **changes)


@dataclass(frozen=True)
class IntervalPair:
    dt1: float  # t_out - t_black, microseconds
    dt2: float  # t_out - t_white, microseconds


def read_intervals(unit: UnitPhase, timing: TimingConfig) -> Optional[IntervalPair]:
    """Intervals of a finished slot, or None when the neuron never fired."""
    if unit.t_black is None or unit.t_white is None:
        raise ProtocolError("both volleys must be observed before reading intervals")
    if unit.t_out is None:
        return None
    return IntervalPair(
        (unit.t_out - unit.t_black) * timing.tick_us,
        (unit.t_out - unit.t_white) * timing.tick_us,
    )


@dataclass(frozen=True)
class WeightUpdate:
    dw_black: float = 0.0
    dw_white: float = 0.0


def normalized_gain(params: MemristorParams, x: float) -> float:
    """u(x) = (G(|x|) - G(0)) / G(0): zero at zero, increasing in |x|."""
    g0 = conductance(params, 0.0)
    return (conductance(params, abs(x)) - g0) / g0


def weight_updates(params: MemristorParams, iv: Optional[IntervalPair],
                   is_winner: bool, eta: float) -> WeightUpdate:
    if iv is None:
        return WeightUpdate()
    sign = 1.0 if is_winner else -1.0
    return WeightUpdate(
        sign * eta * normalized_gain(params, iv.dt1),
        -sign * eta * normalized_gain(params, iv.dt2),
    )


def run_unit(params: MemristorParams, timing: TimingConfig, fire_tick: Optional[int]) -> UnitPhase:
    """Drive one unit through a slot: both volleys plus its own output, if any."""
    events = [SpikeEvent(timing.t_black_tick, EventKind.BLACK),
              SpikeEvent(timing.t_white_tick, EventKind.WHITE)]
    if fire_tick is not None:
        events.append(SpikeEvent(fire_tick, EventKind.OUTPUT))
    unit = new_unit(params, timing)
    for ev in sorted(events, key=lambda e: (e.tick, e.kind)):
        unit = on_spike(unit, ev)
    return unit


def unit_bank(params: MemristorParams, timing: TimingConfig, n: int) -> list:
    """One memristor pair per output neuron: 2n memristors, 2n switches."""
    return [new_unit(params, timing) for _ in range(n)]
