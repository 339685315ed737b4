"""Run configuration and the train/test orchestration shared by the CLI
and the demo scripts."""
from __future__ import annotations

import json
import zlib
from dataclasses import dataclass, field, fields, replace
from typing import Optional

import numpy as np

from .codec import GLYPH_CLASSES, TimingConfig, flip_noise, glyph_dataset
from .device import MemristorParams
from .network import (DEFAULT_ETA, Network, NetworkConfig, SharedBank, Sharing,
                      init_network)
from .neuron import PspConfig


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"config key '{key}': {message}")
        self.key = key


def _bool(v: str) -> bool:
    s = v.strip().lower()
    if s in ("on", "true", "yes", "1", "shared"):
        return True
    if s in ("off", "false", "no", "0", "unshared"):
        return False
    raise ValueError(f"expected on/off, got {v!r}")


def _classes(v: str) -> tuple:
    out = tuple(c.strip().upper() for c in v.replace(",", " ").split() if c.strip())
    if not out:
        raise ValueError("empty class list")
    bad = [c for c in out if c not in GLYPH_CLASSES]
    if bad:
        raise ValueError(f"unknown classes {bad}")
    return out


def _opt_float(v: str) -> Optional[float]:
    return None if v.strip().lower() in ("", "auto", "none") else float(v)


# key -> parser; field names of RunConfig match the keys
_PARSERS = {
    "side": int, "classes": _classes, "sharing": _bool,
    "eta": float, "w0": float, "v_threshold": _opt_float, "theta_conv": _opt_float,
    "max_cycles": int, "w_min": _opt_float, "w_max": _opt_float,
    "flips": int, "n_sets": int, "seed": int,
    "tick_ns": float, "slot_ticks": int, "t_black_tick": int, "t_white_tick": int,
    "psp_a": float, "psp_b": float, "ticks_per_unit": int,
    "k1": float, "k2": float, "dt_max": float,
    "stdp_points": int,
}
NUMERIC_KEYS = tuple(k for k in _PARSERS if k not in ("classes", "sharing"))


@dataclass(frozen=True)
class RunConfig:
    side: Optional[int] = None
    classes: Optional[tuple] = None
    sharing: bool = False
    eta: float = DEFAULT_ETA
    w0: float = 1.0
    v_threshold: Optional[float] = None
    theta_conv: Optional[float] = None
    max_cycles: int = 50
    w_min: Optional[float] = None
    w_max: Optional[float] = None
    flips: int = 8
    n_sets: int = 150
    seed: int = 0
    tick_ns: float = 4.0
    slot_ticks: int = 1000
    t_black_tick: int = 0
    t_white_tick: int = 500
    psp_a: float = 0.09
    psp_b: float = 2.77
    ticks_per_unit: int = 180
    k1: float = 100.0
    k2: float = 1.0
    dt_max: float = 4.0
    stdp_points: int = 81
    grid: tuple = field(default=(), compare=False)  # ((key, (values...)), ...)

    def with_values(self, **kw) -> "RunConfig":
        return replace(self, **kw)

    def require_dataset(self) -> None:
        for key in ("side", "classes"):
            if getattr(self, key) is None:
                raise ConfigError(key, "required but missing")

    def network_config(self) -> NetworkConfig:
        self.require_dataset()
        clamp = None
        if self.w_min is not None or self.w_max is not None:
            lo, hi = NetworkConfig(2, 2, 2, w0=self.w0).clamp
            clamp = (lo if self.w_min is None else self.w_min,
                     hi if self.w_max is None else self.w_max)
        try:
            return NetworkConfig(
                width=self.side, height=self.side, n_classes=len(self.classes),
                sharing=Sharing.SHARED if self.sharing else Sharing.UNSHARED,
                timing=TimingConfig(self.tick_ns, self.slot_ticks, self.t_black_tick, self.t_white_tick),
                psp=PspConfig(self.psp_a, self.psp_b, self.ticks_per_unit),
                device=MemristorParams(self.k1, self.k2, self.dt_max),
                eta=self.eta, w0=self.w0, v_threshold=self.v_threshold,
                theta_conv=self.theta_conv, max_cycles=self.max_cycles, weight_clamp=clamp,
            )
        except ValueError as e:
            raise ConfigError("network", str(e)) from None

    def as_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self) if f.name != "grid"}
        d["classes"] = None if self.classes is None else ",".join(self.classes)
        return d


def parse_config(text: str, base: RunConfig = RunConfig()) -> RunConfig:
    """Parse `key=value` lines; '#' starts a comment. Lines of the form
    `grid.<key>=v1,v2,...` declare a sweep axis."""
    values, grid = {}, []
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(line, f"line {n} is not key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        if key.startswith("grid."):
            sub = key[5:]
            if sub not in NUMERIC_KEYS:
                raise ConfigError(key, "grid axes must be numeric config keys")
            try:
                grid.append((sub, tuple(_PARSERS[sub](v) for v in val.split(",") if v.strip())))
            except ValueError as e:
                raise ConfigError(key, str(e)) from None
            continue
        if key not in _PARSERS:
            raise ConfigError(key, "unknown key")
        try:
            values[key] = _PARSERS[key](val)
        except ValueError as e:
            raise ConfigError(key, str(e)) from None
    return replace(base, grid=tuple(grid), **values)


def derive_seed(root: int, label: str, *index: int) -> int:
    """Independent stream per purpose: the label picks the stream, the
    indices pick a draw within it."""
    ss = np.random.SeedSequence(entropy=root, spawn_key=(zlib.crc32(label.encode()), *index))
    return int(ss.generate_state(1)[0])


def dataset(cfg: RunConfig) -> list:
    cfg.require_dataset()
    try:
        return glyph_dataset(cfg.side, cfg.classes)
    except ValueError as e:
        raise ConfigError("side", str(e)) from None


def build_network(cfg: RunConfig) -> Network:
    return init_network(cfg.network_config(), [img for _, img in dataset(cfg)])


def noisy_testset(cfg: RunConfig) -> list:
    """n_sets noisy copies of every class, set-major order."""
    data = dataset(cfg)
    return [
        (label, flip_noise(img, cfg.flips, derive_seed(cfg.seed, "noise", s, j)))
        for s in range(cfg.n_sets)
        for j, (label, img) in enumerate(data)
    ]


def snapshot(net: Network, cfg: RunConfig) -> dict:
    bank = net.bank
    if isinstance(bank, SharedBank):
        weights = {"w_black": bank.w_black.tolist(), "w_white": bank.w_white.tolist(),
                   "latched": list(bank.latched)}
    else:
        weights = {"W": bank.W.tolist()}
    return {
        "side": cfg.side, "classes": list(cfg.classes), "sharing": cfg.sharing,
        "v_threshold": net.v_threshold, "weights": weights,
        "assignment": [[k, v] for k, v in (net.assignment or {}).items()],
    }


def restore(snap: dict, cfg: RunConfig) -> Network:
    """Rebuild a trained network from a snapshot under a matching config."""
    for key in ("side", "sharing"):
        if snap[key] != getattr(cfg, key):
            raise ConfigError(key, f"snapshot has {snap[key]!r}, config has {getattr(cfg, key)!r}")
    if tuple(snap["classes"]) != tuple(cfg.classes):
        raise ConfigError("classes", f"snapshot has {','.join(snap['classes'])}")
    net = build_network(cfg)
    net.v_threshold = snap["v_threshold"]
    w = snap["weights"]
    if isinstance(net.bank, SharedBank):
        net.bank.w_black = np.array(w["w_black"], dtype=float)
        net.bank.w_white = np.array(w["w_white"], dtype=float)
        net.bank.latched = list(w["latched"])
    else:
        net.bank.W = np.array(w["W"], dtype=float)
    net.assignment = {k: v for k, v in snap["assignment"]}
    return net


def dump_snapshot(snap: dict) -> str:
    return json.dumps(snap, indent=1, sort_keys=True) + "\n"
