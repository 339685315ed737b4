"""Single-layer unsupervised spiking network trained by self-competition.

Each presentation encodes an image into a black volley and a later white
volley. Output neurons integrate linear PSPs, the earliest to cross
threshold wins, and every fired neuron's memristor pair turns its own
spike intervals into weight updates: potentiation of black synapses for
the winner, depression for the losers, with the opposite sign on white
synapses. Labels are carried for reporting only.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Hashable, Optional, Sequence

import numpy as np

from .codec import BinaryImage, TimingConfig, encode, EventKind
from .device import MemristorParams
from .neuron import PspConfig, volley_fire_ticks
from .timeunit import IntervalPair, WeightUpdate, read_intervals, run_unit, weight_updates

# Calibrated defaults, see README "Calibration".
DEFAULT_ETA = 250.0
DEFAULT_FIRE_TICK = 6  # initial fire tick of an average-density image at w0
DEFAULT_THETA = 0.2  # times w0
DEFAULT_CLAMP = (-4.0, 1.05)  # times w0


class Sharing(enum.Enum):
    UNSHARED = "unshared"
    SHARED = "shared"


@dataclass(frozen=True)
class NetworkConfig:
    width: int
    height: int
    n_classes: int
    sharing: Sharing = Sharing.UNSHARED
    timing: TimingConfig = field(default_factory=TimingConfig)
    psp: PspConfig = field(default_factory=PspConfig)
    device: MemristorParams = field(default_factory=MemristorParams)
    eta: float = DEFAULT_ETA
    w0: float = 1.0
    v_threshold: Optional[float] = None  # None: derived from the training set
    theta_conv: Optional[float] = None  # None: DEFAULT_THETA * w0
    max_cycles: int = 50
    weight_clamp: Optional[tuple] = None  # None: DEFAULT_CLAMP * w0

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("width and height must be at least 1")
        if self.n_classes < 2:
            raise ValueError("n_classes must be at least 2")
        if self.theta_conv is not None and not self.theta_conv > 0:
            raise ValueError("theta_conv must be positive")
        if self.max_cycles < 1:
            raise ValueError("max_cycles must be at least 1")
        lo, hi = self.clamp
        if not lo < self.w0 < hi:
            raise ValueError(f"need w_min < w0 < w_max, got {lo} < {self.w0} < {hi}")

    @property
    def n_pixels(self) -> int:
        return self.width * self.height

    @property
    def clamp(self) -> tuple:
        if self.weight_clamp is not None:
            return tuple(float(x) for x in self.weight_clamp)
        return (DEFAULT_CLAMP[0] * self.w0, DEFAULT_CLAMP[1] * self.w0)

    @property
    def theta(self) -> float:
        return self.theta_conv if self.theta_conv is not None else DEFAULT_THETA * self.w0

    def threshold_for(self, templates: Sequence[BinaryImage]) -> float:
        """Explicit v_threshold, or one that fires an average-density image
        at DEFAULT_FIRE_TICK with uniform weights w0."""
        if self.v_threshold is not None:
            return self.v_threshold
        n_ref = float(np.mean([t.n_black for t in templates]))
        return self.psp.a * self.w0 * n_ref * DEFAULT_FIRE_TICK / self.psp.ticks_per_unit


class UnsharedBank:
    """Full pixel x class weight matrix."""

    def __init__(self, n_pixels: int, n_classes: int, w0: float, clamp: tuple):
        self.W = np.full((n_pixels, n_classes), float(w0))
        self.clamp = clamp

    @property
    def scalar_count(self) -> int:
        return self.W.size

    def selection(self, k: int, image: BinaryImage) -> np.ndarray:
        return image.black

    def weights_for(self, image: BinaryImage) -> np.ndarray:
        return self.W.T.copy()

    def apply(self, dws: np.ndarray, image: BinaryImage) -> np.ndarray:
        """Add per-neuron (dw_black, dw_white) to this image's black/white
        synapses, clamp, and return the largest applied change per group."""
        black = image.black
        step = np.where(black[:, None], dws[None, :, 0], dws[None, :, 1])
        new = np.clip(self.W + step, *self.clamp)
        delta = new - self.W
        self.W = new
        applied = np.zeros_like(dws)
        for col, mask in ((0, black), (1, ~black)):
            if mask.any():
                d = delta[mask]
                pick = np.abs(d).argmax(axis=0)
                applied[:, col] = d[pick, np.arange(d.shape[1])]
        return applied


class SharedBank:
    """Two scalars per class plus a pixel->colour selection map.

    A neuron's map is latched from the template pool the first time it wins
    (nearest unused template to the winning image). Before that it selects
    by the colours of whatever image is being presented.
    """

    def __init__(self, templates: Sequence[BinaryImage], w0: float, clamp: tuple):
        n = len(templates)
        self.w_black = np.full(n, float(w0))
        self.w_white = np.full(n, float(w0))
        self.pool = list(templates)
        self.latched: list = [None] * n
        self.clamp = clamp

    @property
    def scalar_count(self) -> int:
        return self.w_black.size + self.w_white.size

    def template(self, k: int) -> Optional[BinaryImage]:
        i = self.latched[k]
        return None if i is None else self.pool[i]

    def selection(self, k: int, image: BinaryImage) -> np.ndarray:
        t = self.template(k)
        return (t if t is not None else image).black

    def weights_for(self, image: BinaryImage) -> np.ndarray:
        return np.stack([
            np.where(self.selection(k, image), self.w_black[k], self.w_white[k])
            for k in range(self.w_black.size)
        ])

    def apply(self, dws: np.ndarray, image: BinaryImage) -> np.ndarray:
        old = np.stack([self.w_black, self.w_white], axis=1)
        new = np.clip(old + dws, *self.clamp)
        self.w_black, self.w_white = new[:, 0].copy(), new[:, 1].copy()
        return new - old

    def latch(self, k: int, image: BinaryImage) -> None:
        if self.latched[k] is not None:
            return
        used = {i for i in self.latched if i is not None}
        free = [i for i in range(len(self.pool)) if i not in used]
        self.latched[k] = min(free, key=lambda i: (self.pool[i].hamming(image), i))


class Network:
    def __init__(self, cfg: NetworkConfig, templates: Sequence[BinaryImage]):
        self.cfg = cfg
        self.v_threshold = cfg.threshold_for(templates)
        if cfg.sharing is Sharing.SHARED:
            self.bank = SharedBank(templates, cfg.w0, cfg.clamp)
        else:
            self.bank = UnsharedBank(cfg.n_pixels, cfg.n_classes, cfg.w0, cfg.clamp)
        self.won: set = set()  # neurons that have won during the current cycle
        self.assignment: Optional[dict] = None  # label -> neuron, set by train

    def begin_cycle(self) -> None:
        self.won = set()


def init_network(cfg: NetworkConfig, training_templates: Sequence[BinaryImage]) -> Network:
    if len(training_templates) != cfg.n_classes:
        raise ValueError(f"expected {cfg.n_classes} templates, got {len(training_templates)}")
    for i, t in enumerate(training_templates):
        if (t.width, t.height) != (cfg.width, cfg.height):
            raise ValueError(
                f"template {i} is {t.width}x{t.height}, network expects {cfg.width}x{cfg.height}"
            )
    if len(set(training_templates)) != len(training_templates):
        raise ValueError("duplicate training templates; classes must be separable")
    return Network(cfg, training_templates)


def effective_weight(net: Network, pixel: int, k: int, current_image: BinaryImage) -> float:
    bank = net.bank
    if isinstance(bank, SharedBank):
        black = bank.selection(k, current_image)[pixel]
        return float(bank.w_black[k] if black else bank.w_white[k])
    return float(bank.W[pixel, k])


@dataclass(frozen=True)
class PresentationResult:
    fire_ticks: tuple  # per neuron, None for no fire
    winner: Optional[int]
    updates: tuple  # per neuron WeightUpdate from the memristor pair
    applied: tuple  # per neuron (black, white) change after clamping
    intervals: tuple  # per neuron IntervalPair or None
    max_abs_dw: float  # largest applied change in this slot
    label_hint: Optional[Hashable] = None
    flagged: bool = False


def _fire_ticks(net: Network, image: BinaryImage):
    cfg = net.cfg
    sched = encode(image, cfg.timing)
    w = net.bank.weights_for(image)
    black = image.black
    volleys = [
        (sched.volley(EventKind.BLACK).tick, w[:, black].sum(axis=1)),
        (sched.volley(EventKind.WHITE).tick, w[:, ~black].sum(axis=1)),
    ]
    return volley_fire_ticks(cfg.psp, net.v_threshold, volleys,
                             cfg.timing.t_black_tick, cfg.timing.slot_ticks), sched.flagged


def _pick_winner(ticks: Sequence, prefer_not: set) -> Optional[int]:
    fired = [(t, k) for k, t in enumerate(ticks) if t is not None]
    if not fired:
        return None
    first = min(t for t, _ in fired)
    tied = [k for t, k in fired if t == first]
    fresh = [k for k in tied if k not in prefer_not]
    return (fresh or tied)[0]


def present(net: Network, image: BinaryImage, label_hint=None, train: bool = True) -> PresentationResult:
    cfg = net.cfg
    if (image.width, image.height) != (cfg.width, cfg.height):
        raise ValueError(f"image is {image.width}x{image.height}, network expects {cfg.width}x{cfg.height}")
    ticks, flagged = _fire_ticks(net, image)
    winner = _pick_winner(ticks, net.won)
    n = cfg.n_classes
    zero = tuple(WeightUpdate() for _ in range(n))
    if winner is None or not train:
        return PresentationResult(tuple(ticks), winner, zero, ((0.0, 0.0),) * n,
                                  (None,) * n, 0.0, label_hint, flagged or winner is None)

    intervals, updates = [], []
    for k in range(n):
        iv = read_intervals(run_unit(cfg.device, cfg.timing, ticks[k]), cfg.timing)
        intervals.append(iv)
        updates.append(weight_updates(cfg.device, iv, k == winner, cfg.eta))
    dws = np.array([[u.dw_black, u.dw_white] for u in updates])
    applied = net.bank.apply(dws, image)
    if isinstance(net.bank, SharedBank):
        net.bank.latch(winner, image)
    net.won.add(winner)
    return PresentationResult(
        tuple(ticks), winner, tuple(updates),
        tuple((float(a), float(b)) for a, b in applied), tuple(intervals),
        float(np.abs(applied).max()), label_hint, flagged,
    )


@dataclass(frozen=True)
class DwRecord:
    cycle: int
    slot: int
    neuron: int
    dw_black: float
    dw_white: float
    applied_black: float
    applied_white: float


@dataclass(frozen=True)
class FireRecord:
    cycle: int
    slot: int
    label: Hashable
    fire_ticks: tuple
    winner: Optional[int]


@dataclass
class TrainReport:
    cycles_run: int
    converged: bool
    dw_history: list  # DwRecord per (presentation, neuron)
    fire_history: list  # FireRecord per presentation
    winner_assignment: dict  # label -> neuron, from the final cycle
    results: list = field(default_factory=list, repr=False)  # PresentationResult per slot

    def cycle_max(self, neuron: Optional[int] = None) -> list:
        """Largest applied |dw| per cycle, optionally for one neuron."""
        out = [0.0] * self.cycles_run
        for r in self.dw_history:
            if neuron is None or r.neuron == neuron:
                out[r.cycle - 1] = max(out[r.cycle - 1], abs(r.applied_black), abs(r.applied_white))
        return out

    @property
    def bijective(self) -> bool:
        vals = list(self.winner_assignment.values())
        return len(set(vals)) == len(vals)


def train(net: Network, dataset: Sequence) -> TrainReport:
    """Present the dataset in fixed order, cycle after cycle, until every
    applied change in a cycle stays below theta or max_cycles is reached."""
    cfg = net.cfg
    dw_hist, fire_hist, results = [], [], []
    assignment: dict = {}
    converged = False
    cycle = 0
    while cycle < cfg.max_cycles:
        cycle += 1
        net.begin_cycle()
        assignment = {}
        worst = 0.0
        for slot, (label, image) in enumerate(dataset):
            key = slot if label is None else label
            res = present(net, image, label, train=True)
            results.append(res)
            worst = max(worst, res.max_abs_dw)
            fire_hist.append(FireRecord(cycle, slot, key, res.fire_ticks, res.winner))
            for k, (u, a) in enumerate(zip(res.updates, res.applied)):
                dw_hist.append(DwRecord(cycle, slot, k, u.dw_black, u.dw_white, a[0], a[1]))
            if res.winner is not None:
                assignment[key] = res.winner
        if worst < cfg.theta:
            converged = True
            break
    net.assignment = assignment
    return TrainReport(cycle, converged, dw_hist, fire_hist, assignment, results)


def classify(net: Network, image: BinaryImage):
    """Label whose assigned neuron fires first, or None if none fires."""
    if net.assignment is None:
        raise ValueError("network has not been trained")
    ticks, _ = _fire_ticks(net, image)
    best, best_tick = None, math.inf
    for label, k in net.assignment.items():
        t = ticks[k]
        if t is not None and t < best_tick:
            best, best_tick = label, t
    return best


@dataclass(frozen=True)
class ConfusionMatrix:
    labels: tuple
    counts: np.ndarray  # rows expected, columns predicted plus a final "none" column
    total: int
    accuracy: float
    flagged: bool = False  # empty test set, accuracy undefined

    @property
    def correct(self) -> int:
        return int(np.trace(self.counts[:, :-1]))


def evaluate(net: Network, testset: Sequence) -> ConfusionMatrix:
    if net.assignment is None:
        raise ValueError("network has not been trained")
    labels = tuple(net.assignment)
    # labels the network never claimed still get a row; they can only miss
    labels += tuple(dict.fromkeys(lab for lab, _ in testset if lab not in net.assignment))
    index = {lab: i for i, lab in enumerate(labels)}
    counts = np.zeros((len(labels), len(labels) + 1), dtype=int)
    for label, image in testset:
        pred = classify(net, image)
        counts[index[label], len(labels) if pred is None else index[pred]] += 1
    total = int(counts.sum())
    if total == 0:
        return ConfusionMatrix(labels, counts, 0, 0.0, flagged=True)
    return ConfusionMatrix(labels, counts, total, np.trace(counts[:, :-1]) / total)
