#!/usr/bin/env python3
"""
Fit growth laws to the measured FPGA resource counts against N*T^2.

    python demos/resource_scaling.py
"""
import math

from memspike.resources import LINEAR, POWER, fit, metric, measured_points, predict, series

pts = measured_points()
print(" N  T  N*T^2  without  with")
for p in pts:
    print(f"{p.n_side:2d} {p.t_classes:2d} {metric(p.n_side, p.t_classes):6d} {p.alm_without:8d} {p.alm_with:5d}")

for which in ("without", "with"):
    s = series(pts, which)
    lin, pw = fit(s, LINEAR), fit(s, POWER)
    end = math.log(s[-1][1] / s[0][1]) / math.log(s[-1][0] / s[0][0])
    print(f"\n{which} sharing")
    print(f"  linear: alm = {lin.coefficients[0]:.1f} + {lin.coefficients[1]:.3f} * m")
    print(f"  power:  alm = {pw.coefficients[0]:.3f} * m^{pw.log_log_slope:.4f}")
    print(f"  endpoint slope {end:.4f}")

# hold out the largest network and predict it from the other five
held = fit(series(pts[:-1], "without"), POWER)
guess = predict(held, 9, 5)
print(f"\nleave-one-out 9x9x5 without sharing: {guess:.0f} vs 1917 ({(guess - 1917) / 1917:+.1%})")
