"""Linear memristor law: memristance falls linearly with the interval
recorded under unit current.

    M(dt) = k1 - k2 * dt,   G(dt) = 1 / M(dt)

k1 plays the role of R_off and k2 of (R_off - R_on) * mu_v * R_on / D**2.
"""
from __future__ import annotations

from dataclasses import dataclass


class DomainError(ValueError):
    """An interval the device cannot record (negative or longer than dt_max)."""


class SaturationError(DomainError):
    """The device would be pushed past its fully switched state."""


@dataclass(frozen=True)
class MemristorParams:
    k1: float = 100.0  # ohm
    k2: float = 1.0  # ohm per microsecond
    dt_max: float = 4.0  # microseconds

    def __post_init__(self):
        if not (self.k1 > 0 and self.k2 > 0):
            raise ValueError(f"k1 and k2 must be positive, got k1={self.k1}, k2={self.k2}")
        if not self.dt_max > 0:
            raise ValueError(f"dt_max must be positive, got {self.dt_max}")
        if self.dt_max >= self.k1 / self.k2:
            raise ValueError(
                f"dt_max={self.dt_max} reaches k1/k2={self.k1 / self.k2}; memristance would cross zero"
            )


@dataclass(frozen=True)
class PhysicalParams:
    r_on: float
    r_off: float
    mu_v: float
    d: float

    def __post_init__(self):
        if not 0 < self.r_on < self.r_off:
            raise ValueError(f"need 0 < r_on < r_off, got r_on={self.r_on}, r_off={self.r_off}")
        if not (self.mu_v > 0 and self.d > 0):
            raise ValueError("mu_v and d must be positive")

    @property
    def drift(self) -> float:
        """(R_off - R_on) * mu_v * R_on / D**2, the charge coefficient."""
        return (self.r_off - self.r_on) * self.mu_v * self.r_on / self.d**2


def params_from_physical(p: PhysicalParams, dt_max: float) -> MemristorParams:
    # MemristorParams validates dt_max < k1/k2
    return MemristorParams(k1=p.r_off, k2=p.drift, dt_max=dt_max)


def _check(params: MemristorParams, dt: float) -> None:
    if not 0.0 <= dt <= params.dt_max:
        raise DomainError(f"interval {dt} outside [0, {params.dt_max}]")


def memristance(params: MemristorParams, dt: float) -> float:
    _check(params, dt)
    return params.k1 - params.k2 * dt


def conductance(params: MemristorParams, dt: float) -> float:
    return 1.0 / memristance(params, dt)


def delta_conductance(params: MemristorParams, dt_new: float, dt_old: float) -> float:
    return conductance(params, dt_new) - conductance(params, dt_old)


def hp_voltage(p: PhysicalParams, charge: float, current: float = 1.0) -> float:
    """Voltage across the unwindowed HP device carrying `current` after `charge`."""
    return (p.r_off - p.drift * charge) * current


def windowed_memristance(p: PhysicalParams, charge: float, window: float = 1.0) -> float:
    """Memristance with a scalar window factor applied to the dopant drift.

    window=1 gives back the plain linear law.
    """
    if not 0.0 <= window <= 1.0:
        raise ValueError(f"window must lie in [0, 1], got {window}")
    m = p.r_off - p.drift * window * charge
    if not p.r_on <= m <= p.r_off:
        raise SaturationError(f"memristance {m} outside [{p.r_on}, {p.r_off}]")
    return m


@dataclass(frozen=True)
class MemristorState:
    params: MemristorParams = MemristorParams()
    accumulated: float = 0.0  # microseconds at unit current

    def __post_init__(self):
        if not 0.0 <= self.accumulated <= self.params.dt_max:
            raise SaturationError(
                f"accumulated {self.accumulated} outside [0, {self.params.dt_max}]"
            )

    @property
    def memristance(self) -> float:
        return memristance(self.params, self.accumulated)

    @property
    def read_voltage(self) -> float:
        # unit current, so the read voltage equals the memristance
        return self.memristance


def integrate_interval(state: MemristorState, duration: float) -> MemristorState:
    if duration < 0:
        raise DomainError(f"negative duration {duration}")
    total = state.accumulated + duration
    if total > state.params.dt_max:
        raise SaturationError(
            f"accumulating {duration} on top of {state.accumulated} exceeds dt_max={state.params.dt_max}"
        )
    return MemristorState(state.params, total)
