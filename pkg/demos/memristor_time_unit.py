#!/usr/bin/env python3
"""
Walk one output neuron through a presentation slot.

The black volley closes k1, the neuron's own spike hands recording over to
k2, and the white volley ends the slot. The two memristors then hold the
intervals, and the normalized conductance excess becomes the update.

    python demos/memristor_time_unit.py
"""
from memspike.codec import EventKind, SpikeEvent, TimingConfig
from memspike.device import MemristorParams, conductance
from memspike.timeunit import new_unit, normalized_gain, on_spike, read_intervals, weight_updates

params = MemristorParams()  # k1=100, k2=1, dt_max=4 us
timing = TimingConfig()  # 4 ns ticks, volleys at 0 and 500

unit = new_unit(params, timing)
for tick, kind in [(0, EventKind.BLACK), (300, EventKind.OUTPUT), (500, EventKind.WHITE)]:
    unit = on_spike(unit, SpikeEvent(tick, kind))
    print(f"tick {tick:4d} {kind.name:6s} -> {unit.phase.name:16s} k1={'closed' if unit.switch_k1 else 'open':6s} "
          f"k2={'closed' if unit.switch_k2 else 'open'}")

print(f"\nM1 = {unit.m1.memristance:.4f} ohm after {unit.m1.accumulated:.3f} us")
print(f"M2 = {unit.m2.memristance:.4f} ohm after {unit.m2.accumulated:.3f} us")

iv = read_intervals(unit, timing)
print(f"dt1 = {iv.dt1:+.3f} us, dt2 = {iv.dt2:+.3f} us")
for eta in (30.0, 250.0):
    win = weight_updates(params, iv, True, eta)
    lose = weight_updates(params, iv, False, eta)
    print(f"eta={eta:5.0f}  winner ({win.dw_black:+.4f}, {win.dw_white:+.4f})"
          f"  loser ({lose.dw_black:+.4f}, {lose.dw_white:+.4f})")

# the update grows with the interval, which is why early spikes learn slowly
print("\n  dt (us)   G (1/ohm)    u(dt)")
for dt in (0.0, 0.5, 1.0, 2.0, 3.0, 4.0):
    print(f"  {dt:6.2f}   {conductance(params, dt):.6f}   {normalized_gain(params, dt):.5f}")
