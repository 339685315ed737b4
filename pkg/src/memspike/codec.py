"""Binary images, latency coding into two spike volleys, the plain-bitmap
text format, glyph fixtures and exact-count pixel noise."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Optional, Sequence

import numpy as np

GLYPH_SIDES = (3, 5, 7, 9)
GLYPH_CLASSES = ("Z", "V", "N", "X", "C")


class ImageFormatError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class BinaryImage:
    """Row-major binary image; True marks a black pixel."""

    __slots__ = ("_px",)

    def __init__(self, pixels):
        px = np.array(pixels, dtype=bool)
        if px.ndim != 2 or px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError(f"image must be a non-empty 2-D array, got shape {px.shape}")
        px.setflags(write=False)
        self._px = px

    @classmethod
    def from_rows(cls, rows: Sequence[str]) -> "BinaryImage":
        return cls([[c == "1" for c in r] for r in rows])

    @property
    def pixels(self) -> np.ndarray:
        return self._px

    @property
    def width(self) -> int:
        return self._px.shape[1]

    @property
    def height(self) -> int:
        return self._px.shape[0]

    @property
    def size(self) -> int:
        return self._px.size

    @property
    def black(self) -> np.ndarray:
        """Flat boolean mask of black pixels."""
        return self._px.ravel()

    @property
    def n_black(self) -> int:
        return int(self._px.sum())

    def hamming(self, other: "BinaryImage") -> int:
        return int(np.count_nonzero(self._px != other._px))

    def __eq__(self, other):
        if not isinstance(other, BinaryImage):
            return NotImplemented
        return self._px.shape == other._px.shape and bool(np.array_equal(self._px, other._px))

    def __hash__(self):
        return hash((self._px.shape, self._px.tobytes()))

    def __repr__(self):
        return f"BinaryImage({self.width}x{self.height}, black={self.n_black})"


@dataclass(frozen=True)
class TimingConfig:
    tick_ns: float = 4.0
    slot_ticks: int = 1000
    t_black_tick: int = 0
    t_white_tick: int = 500

    def __post_init__(self):
        if not self.tick_ns > 0:
            raise ValueError("tick_ns must be positive")
        if not 0 <= self.t_black_tick < self.t_white_tick < self.slot_ticks:
            raise ValueError(
                "need 0 <= t_black_tick < t_white_tick < slot_ticks, got "
                f"{self.t_black_tick}, {self.t_white_tick}, {self.slot_ticks}"
            )

    @property
    def tick_us(self) -> float:
        return self.tick_ns / 1000.0

    def to_us(self, ticks: int) -> float:
        return ticks * self.tick_us


class EventKind(enum.IntEnum):
    # value doubles as the delivery order for events sharing a tick
    BLACK = 0
    OUTPUT = 1
    WHITE = 2


@dataclass(frozen=True)
class SpikeEvent:
    tick: int
    kind: EventKind
    sources: frozenset = frozenset()
    neuron: Optional[int] = None  # set for OUTPUT events


@dataclass(frozen=True)
class SpikeSchedule:
    events: tuple

    def __post_init__(self):
        ticks = [e.tick for e in self.events]
        if ticks != sorted(ticks):
            raise ValueError("events must be sorted by tick")
        kinds = [e.kind for e in self.events]
        if kinds.count(EventKind.BLACK) != 1 or kinds.count(EventKind.WHITE) != 1:
            raise ValueError("a slot needs exactly one black and one white volley")

    def volley(self, kind: EventKind) -> SpikeEvent:
        return next(e for e in self.events if e.kind == kind)

    @property
    def flagged(self) -> bool:
        """True when one of the volleys is empty (all-black or all-white image)."""
        return any(not e.sources for e in self.events if e.kind != EventKind.OUTPUT)


def encode(image: BinaryImage, timing: TimingConfig) -> SpikeSchedule:
    idx = np.arange(image.size)
    black = frozenset(idx[image.black].tolist())
    white = frozenset(idx[~image.black].tolist())
    return SpikeSchedule((
        SpikeEvent(timing.t_black_tick, EventKind.BLACK, black),
        SpikeEvent(timing.t_white_tick, EventKind.WHITE, white),
    ))


def parse_image(text: str) -> BinaryImage:
    """Read the plain-bitmap format: a "W H" header, then H rows of W
    characters from {0,1}. Surrounding whitespace on a line and trailing
    blank lines are tolerated."""
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ImageFormatError("empty input", 1)
    head = lines[0].split()
    if len(head) != 2 or not all(h.isdigit() for h in head):
        raise ImageFormatError(f"expected '<width> <height>', got {lines[0]!r}", 1)
    w, h = int(head[0]), int(head[1])
    if w < 1 or h < 1:
        raise ImageFormatError("width and height must be at least 1", 1)
    rows = []
    for n, raw in enumerate(lines[1:], start=2):
        row = raw.strip()
        bad = set(row) - {"0", "1"}
        if bad:
            raise ImageFormatError(f"unexpected character {sorted(bad)[0]!r}", n)
        if len(row) != w:
            raise ImageFormatError(f"row has {len(row)} pixels, expected {w}", n)
        rows.append(row)
    if len(rows) != h:
        raise ImageFormatError(f"expected {h} rows, found {len(rows)}", len(lines) + 1)
    return BinaryImage.from_rows(rows)


def serialize_image(image: BinaryImage) -> str:
    rows = ("".join("1" if p else "0" for p in r) for r in image.pixels)
    return f"{image.width} {image.height}\n" + "\n".join(rows) + "\n"


def flip_noise(image: BinaryImage, flips: int, seed: int) -> BinaryImage:
    """Invert exactly `flips` distinct pixels chosen by a seeded generator."""
    if not 0 <= flips <= image.size:
        raise ValueError(f"flips must lie in [0, {image.size}], got {flips}")
    rng = np.random.default_rng(seed)
    where = rng.choice(image.size, size=flips, replace=False)
    flat = image.black.copy()
    flat[where] = ~flat[where]
    return BinaryImage(flat.reshape(image.height, image.width))


def glyph_dataset(side: int, classes: Iterable[str] = GLYPH_CLASSES) -> list:
    """Committed glyph fixtures as (label, image) pairs, in the requested order."""
    classes = list(classes)
    if side not in GLYPH_SIDES:
        raise ValueError(f"no glyphs at side {side}; available sides {GLYPH_SIDES}")
    unknown = [c for c in classes if c not in GLYPH_CLASSES]
    if unknown or not classes:
        raise ValueError(f"unsupported glyph classes {unknown}; choose from {GLYPH_CLASSES}")
    if len(set(classes)) != len(classes):
        raise ValueError("duplicate glyph classes requested")
    root = resources.files("memspike") / "glyphs" / str(side)
    out = [(c, parse_image((root / f"{c}.txt").read_text())) for c in classes]
    for i, (a, ia) in enumerate(out):
        for b, ib in out[i + 1:]:
            if ia == ib:
                raise ValueError(f"glyphs {a} and {b} coincide at side {side}")
    return out
