"""FPGA resource measurements of networks at several scales and growth-law
fits against the N*T^2 size metric (N image side, T class count)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

LINEAR = "linear"  # alm = c0 + c1 * metric
POWER = "power"  # log(alm) = log(c) + s * log(metric)
MODELS = (LINEAR, POWER)


@dataclass(frozen=True)
class ResourcePoint:
    n_side: int
    t_classes: int
    alm_without: int
    alm_with: int

    def __post_init__(self):
        if min(self.n_side, self.t_classes, self.alm_without, self.alm_with) <= 0:
            raise ValueError("all resource counts must be positive")


# ALMs on a Stratix V part, with and without the shared weight bank
_MEASURED_ROWS = (
    (3, 3, 199, 122),
    (5, 3, 395, 214),
    (7, 3, 516, 237),
    (5, 5, 869, 428),
    (7, 5, 1309, 475),
    (9, 5, 1917, 540),
)

# The 3x3x3 network on three device families. Logic units differ between
# families, so these are reference values only and never fitted.
PLATFORM_POINTS = (
    {"device": "Stratix V", "unit": "ALM", "without": 199, "with": 122},
    {"device": "Cyclone 10 LP", "unit": "LE", "without": 542, "with": 477},
    {"device": "Arria 10", "unit": "ALM", "without": 203, "with": 130},
)


def metric(n_side: int, t_classes: int) -> int:
    if n_side < 1 or t_classes < 1:
        raise ValueError("n_side and t_classes must be at least 1")
    return n_side * t_classes**2


def measured_points() -> list:
    return [ResourcePoint(*row) for row in _MEASURED_ROWS]


def series(points: Sequence[ResourcePoint], which: str) -> list:
    """(metric, alm) pairs for the 'with' or 'without' sharing column."""
    attr = {"with": "alm_with", "without": "alm_without"}[which]
    return [(metric(p.n_side, p.t_classes), getattr(p, attr)) for p in points]


@dataclass(frozen=True)
class ResourceFit:
    model: str
    coefficients: tuple  # (c0, c1) linear; (c, s) power
    residuals: tuple  # in the space the model is fitted in (log space for power)
    log_log_slope: Optional[float] = None


def fit(points: Sequence, model: str = POWER) -> ResourceFit:
    x = np.array([p[0] for p in points], dtype=float)
    y = np.array([p[1] for p in points], dtype=float)
    if x.size < 2 or np.unique(x).size < 2:
        raise ValueError("need at least two distinct abscissas")
    if model == POWER:
        if (x <= 0).any() or (y <= 0).any():
            raise ValueError("power-law fit needs positive data")
        x, y = np.log(x), np.log(y)
    elif model != LINEAR:
        raise ValueError(f"unknown model {model!r}")
    A = np.column_stack([np.ones_like(x), x])
    (c0, c1), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = tuple(float(r) for r in y - A @ np.array([c0, c1]))
    if model == POWER:
        return ResourceFit(POWER, (float(np.exp(c0)), float(c1)), resid, float(c1))
    return ResourceFit(LINEAR, (float(c0), float(c1)), resid)


def predict(f: ResourceFit, n_side: int, t_classes: int) -> float:
    m = metric(n_side, t_classes)
    c0, c1 = f.coefficients
    if f.model == POWER:
        return c0 * m**c1
    return c0 + c1 * m
