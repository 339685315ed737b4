"""Output neuron on the tick axis: linear PSP ramps summed into a membrane
potential, a single threshold crossing per slot."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

PEAK_TIME = 4.0 * math.log(2.0)  # argmax of the double-exponential kernel


@dataclass(frozen=True)
class PspConfig:
    a: float = 0.09
    b: float = 2.77
    ticks_per_unit: int = 180

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError("a and b must be positive")
        if self.ticks_per_unit < 1:
            raise ValueError("ticks_per_unit must be at least 1")

    def peak_error(self) -> float:
        """Relative gap between the ramp's plateau a*b and the exact peak 0.25."""
        return abs(self.a * self.b - 0.25) / 0.25


@dataclass(frozen=True)
class SrmTraceShape:
    # used only to draw spike waveforms in traces
    s1: float = 1.0
    s2: float = 0.5
    s3: float = -1.0


def psp_exact(w: float, t: float) -> float:
    if t < 0:
        raise ValueError("t must be nonnegative")
    return w * (math.exp(-t / 4.0) - math.exp(-t / 2.0))


def psp_lin(cfg: PspConfig, w: float, t: float) -> float:
    if t < 0:
        raise ValueError("t must be nonnegative")
    return cfg.a * w * min(t, cfg.b)


@dataclass
class NeuronState:
    inputs: list = field(default_factory=list)  # (arrival tick, effective weight)
    membrane: float = 0.0
    fired_at: Optional[int] = None
    last_now: Optional[int] = None


def accumulate(neuron: NeuronState, cfg: PspConfig, now: int) -> float:
    """Recompute the membrane potential at `now` from inputs that have arrived."""
    v = 0.0
    for arrival, w in neuron.inputs:
        if arrival <= now:
            v += psp_lin(cfg, w, (now - arrival) / cfg.ticks_per_unit)
    neuron.membrane = v
    return v


def step_fire(neuron: NeuronState, cfg: PspConfig, v_threshold: float, now: int) -> Optional[int]:
    """Advance to `now`. Returns the fire tick once fired, else None."""
    if neuron.last_now is not None and now <= neuron.last_now:
        raise ValueError(f"now must increase strictly, got {now} after {neuron.last_now}")
    neuron.last_now = now
    if neuron.fired_at is not None:
        return neuron.fired_at  # silent for the rest of the slot
    v = accumulate(neuron, cfg, now)
    if v >= v_threshold and v > 0:  # a silent membrane never fires
        neuron.fired_at = now
    return neuron.fired_at


def simulate(inputs, cfg: PspConfig, v_threshold: float, start: int, stop: int) -> Optional[int]:
    """Step one neuron tick by tick over [start, stop)."""
    n = NeuronState(list(inputs))
    for t in range(start, stop):
        if step_fire(n, cfg, v_threshold, t) is not None:
            return n.fired_at
    return None


def volley_fire_ticks(cfg: PspConfig, v_threshold: float, volleys: Sequence,
                      start: int, stop: int) -> list:
    """Fire ticks for a batch of neurons driven by whole volleys.

    `volleys` is a list of (arrival_tick, summed_weights) where summed_weights
    holds one total per neuron. A volley of simultaneous inputs produces the
    same ramp as its summed weight, so this matches stepping each neuron
    through `simulate` without the per-input loop.
    """
    ticks = np.arange(start, stop)
    sums = [np.asarray(s, dtype=float) for _, s in volleys]
    v = np.zeros((len(sums[0]), ticks.size))
    for (arrival, _), s in zip(volleys, sums):
        ramp = np.minimum(np.clip(ticks - arrival, 0, None) / cfg.ticks_per_unit, cfg.b)
        v += cfg.a * s[:, None] * ramp[None, :]
    hit = (v >= v_threshold) & (v > 0)
    first = hit.argmax(axis=1)
    return [int(ticks[f]) if hit[k, f] else None for k, f in enumerate(first)]


def spike_waveform(fire_tick: int, threshold: float, cfg: PspConfig,
                   shape: SrmTraceShape = SrmTraceShape()) -> list:
    """Piecewise-linear spike glyph for plotting, in units of the threshold:
    rise at s1 for one PSP unit, at s2 for one more, then fall at s3 to rest.
    Returns (tick, potential) vertices."""
    step = cfg.ticks_per_unit
    peak1 = 1.0 + shape.s1
    peak2 = peak1 + shape.s2
    fall = int(round(step * peak2 / -shape.s3))
    return [
        (fire_tick, threshold),
        (fire_tick + step, threshold * peak1),
        (fire_tick + 2 * step, threshold * peak2),
        (fire_tick + 2 * step + fall, 0.0),
    ]
