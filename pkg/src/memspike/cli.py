"""Command-line front end.

    memspike train        --config run.cfg --out results/
    memspike test         --config run.cfg --snapshot results/snapshot.json
    memspike sweep        --config sweep.cfg
    memspike stdp-curve   [--config run.cfg]
    memspike resource-fit
    memspike trace        --config run.cfg

MEMSPIKE_OUT, when set, overrides --out.
"""
from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import resources
from .device import DomainError, MemristorParams
from .experiment import (ConfigError, RunConfig, build_network, dataset, dump_snapshot,
                         noisy_testset, parse_config, restore, snapshot)
from .network import classify, evaluate, train
from .neuron import spike_waveform
from .timeunit import normalized_gain


def _fmt(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(path: Path, header, rows) -> None:
    lines = [",".join(header)] + [",".join(_fmt(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def write_summary(path: Path, items) -> None:
    path.write_text("".join(f"{k}={_fmt(v)}\n" for k, v in items), encoding="utf-8", newline="\n")


def run_train(cfg: RunConfig):
    net = build_network(cfg)
    data = dataset(cfg)
    report = train(net, data)
    clean = evaluate(net, data)
    return net, report, clean


def cmd_train(cfg: RunConfig, out: Path) -> dict:
    net, report, clean = run_train(cfg)
    write_csv(out / "dw_history.csv",
              ["cycle", "slot", "class", "dw_black", "dw_white", "applied_black", "applied_white"],
              [(r.cycle, r.slot, r.neuron, r.dw_black, r.dw_white, r.applied_black, r.applied_white)
               for r in report.dw_history])
    n = len(cfg.classes)
    write_csv(out / "fire_history.csv",
              ["cycle", "slot", "label", "winner"] + [f"tick_{k}" for k in range(n)],
              [(r.cycle, r.slot, r.label, r.winner, *r.fire_ticks) for r in report.fire_history])
    (out / "snapshot.json").write_text(dump_snapshot(snapshot(net, cfg)), newline="\n")
    summary = [
        ("command", "train"), ("side", cfg.side), ("classes", ",".join(cfg.classes)),
        ("sharing", "on" if cfg.sharing else "off"),
        ("cycles_run", report.cycles_run), ("converged", report.converged),
        ("clean_accuracy", clean.accuracy),
        ("assignment", " ".join(f"{k}:{v}" for k, v in report.winner_assignment.items())),
    ]
    write_summary(out / "summary.txt", summary)
    return dict(summary)


def _confusion_rows(cm):
    return [(lab, *cm.counts[i]) for i, lab in enumerate(cm.labels)]


def cmd_test(cfg: RunConfig, out: Path, snapshot_path: Path) -> dict:
    try:
        snap = json.loads(Path(snapshot_path).read_text())
    except FileNotFoundError:
        raise ConfigError("snapshot", f"no snapshot at {snapshot_path}") from None
    net = restore(snap, cfg)
    tests = noisy_testset(cfg)
    cm = evaluate(net, tests)
    write_csv(out / "confusion.csv", ["expected", *cm.labels, "none"], _confusion_rows(cm))
    write_csv(out / "predictions.csv", ["row", "expected", "predicted"],
              [(i, lab, classify(net, img)) for i, (lab, img) in enumerate(tests)])
    summary = [("command", "test"), ("flips", cfg.flips), ("n_sets", cfg.n_sets), ("seed", cfg.seed),
               ("total", cm.total), ("correct", cm.correct), ("accuracy", cm.accuracy),
               ("empty", cm.flagged)]
    write_summary(out / "test_summary.txt", summary)
    return dict(summary)


def _sweep_point(cfg: RunConfig) -> tuple:
    net, report, clean = run_train(cfg)
    noisy = evaluate(net, noisy_testset(cfg))
    return report.cycles_run, report.converged, clean.accuracy, noisy.correct, noisy.total, noisy.accuracy


def cmd_sweep(cfg: RunConfig, out: Path, jobs: int = 1) -> list:
    if not cfg.grid:
        raise ConfigError("grid", "sweep needs at least one grid.<key>=v1,v2,... line")
    keys = [k for k, _ in cfg.grid]
    points = list(itertools.product(*(vals for _, vals in cfg.grid)))
    if not points:
        raise ConfigError("grid", "empty grid")
    cfgs = [cfg.with_values(**dict(zip(keys, p))) for p in points]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            results = list(ex.map(_sweep_point, cfgs))
    else:
        results = [_sweep_point(c) for c in cfgs]
    rows = [(*p, *r) for p, r in zip(points, results)]
    write_csv(out / "sweep.csv",
              [*keys, "cycles_run", "converged", "clean_accuracy", "noisy_correct", "noisy_total",
               "noisy_accuracy"], rows)
    return rows


def cmd_stdp_curve(cfg: RunConfig, out: Path) -> list:
    device = MemristorParams(cfg.k1, cfg.k2, cfg.dt_max)
    # mirror the nonnegative half so the grid is exactly symmetric; an even
    # point count is rounded up to the next odd one
    half = np.linspace(0.0, device.dt_max, cfg.stdp_points // 2 + 1)
    grid = np.concatenate([-half[:0:-1], half])
    rows = [(float(dt), float(np.sign(dt)) * cfg.eta * normalized_gain(device, dt)) for dt in grid]
    write_csv(out / "stdp_curve.csv", ["dt_us", "dw"], rows)
    return rows


def cmd_resource_fit(out: Path) -> dict:
    pts = resources.measured_points()
    fits = {}
    for series in ("without", "with"):
        for model in resources.MODELS:
            fits[series, model] = resources.fit(resources.series(pts, series), model)
    rows = []
    for i, p in enumerate(pts):
        row = [p.n_side, p.t_classes, resources.metric(p.n_side, p.t_classes), p.alm_without, p.alm_with]
        for series in ("without", "with"):
            for model in resources.MODELS:
                f = fits[series, model]
                row += [resources.predict(f, p.n_side, p.t_classes), f.residuals[i]]
        rows.append(row)
    header = ["n_side", "t_classes", "metric", "alm_without", "alm_with"]
    for series in ("without", "with"):
        for model in resources.MODELS:
            header += [f"fit_{series}_{model}", f"resid_{series}_{model}"]
    write_csv(out / "resource_points.csv", header, rows)
    write_csv(out / "resource_fits.csv", ["series", "model", "c0", "c1", "log_log_slope"],
              [(s, m, f.coefficients[0], f.coefficients[1], f.log_log_slope)
               for (s, m), f in fits.items()])
    return fits


def cmd_trace(cfg: RunConfig, out: Path) -> None:
    net, report, _ = run_train(cfg)
    rows = []
    for i, res in enumerate(report.results):
        rec = report.fire_history[i]
        for k in range(len(res.fire_ticks)):
            iv = res.intervals[k]
            u = res.updates[k]
            rows.append((rec.cycle, rec.slot, rec.label, k, res.fire_ticks[k],
                         None if iv is None else iv.dt1, None if iv is None else iv.dt2,
                         u.dw_black, u.dw_white))
    write_csv(out / "trace.csv",
              ["cycle", "slot", "label", "class", "fire_tick", "dt1_us", "dt2_us", "dw_black", "dw_white"],
              rows)
    # spike glyphs of every output spike, for waveform plots
    wave = []
    for i, res in enumerate(report.results):
        rec = report.fire_history[i]
        for k, t in enumerate(res.fire_ticks):
            if t is not None:
                for j, (tick, v) in enumerate(spike_waveform(t, net.v_threshold, cfg.network_config().psp)):
                    wave.append((rec.cycle, rec.slot, k, j, tick, v))
    write_csv(out / "spike_waveforms.csv", ["cycle", "slot", "class", "vertex", "tick", "potential"], wave)


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="memspike", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("train", "test", "sweep", "stdp-curve", "resource-fit", "trace"):
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path)
        p.add_argument("--out", type=Path, default=Path("."))
        p.add_argument("--seed", type=int)
        p.add_argument("--snapshot", type=Path)
        if name == "sweep":
            p.add_argument("--jobs", type=int, default=1)
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    started = time.perf_counter()
    try:
        cfg = RunConfig()
        if args.config is not None:
            try:
                text = args.config.read_text(encoding="utf-8")
            except OSError as e:
                raise ConfigError("config", str(e)) from None
            cfg = parse_config(text)
        if args.seed is not None:
            cfg = cfg.with_values(seed=args.seed)
        out = Path(os.environ.get("MEMSPIKE_OUT") or args.out)
        out.mkdir(parents=True, exist_ok=True)
        cmd = args.command
        if cmd == "train":
            cmd_train(cfg, out)
        elif cmd == "test":
            cmd_test(cfg, out, args.snapshot or out / "snapshot.json")
        elif cmd == "sweep":
            cmd_sweep(cfg, out, args.jobs)
        elif cmd == "stdp-curve":
            cmd_stdp_curve(cfg, out)
        elif cmd == "resource-fit":
            cmd_resource_fit(out)
        elif cmd == "trace":
            cmd_trace(cfg, out)
    except (ConfigError, DomainError, ValueError) as e:
        print(f"memspike: error: {e}", file=sys.stderr)
        return 2
    print(f"{args.command} finished in {time.perf_counter() - started:.3f} s", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
