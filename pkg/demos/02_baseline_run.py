"""
Baseline closed-loop run
========================

Integrates the stock scenario — two counter-rotating wheels spinning up
to +/-3.3 RPM under PD control with the hold-down loop keeping the
chassis pressed against the surface — and plots wheel speeds, chassis
height, and lateral drift.  Writes ``baseline_run.png``.
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from bucketwheel import Gains, Scenario, run, summarize

here = os.path.dirname(os.path.abspath(__file__))

scenario = Scenario()
trajectory = run(scenario)
summary = summarize(trajectory, scenario.gains)

print(f"settle time        {summary.settle_time_omega:.2f} s")
print(f"max |x| drift      {summary.max_abs_x:.3g} m")
print(f"max height         {summary.max_y:.3g} m")
print(f"min height         {summary.min_y:.3g} m")
print(f"peak chassis speed {summary.max_speed:.3g} m/s")

t = trajectory.times
setpoint = Gains().wheel_speed_setpoint

fig, axes = plt.subplots(3, 1, figsize=(8, 9), sharex=True)

# Wheel 2 is plotted negated so both traces land on the same setpoint line.
axes[0].plot(t, trajectory.states[:, 5], label="wheel 1")
axes[0].plot(t, -trajectory.states[:, 7], "--", label="wheel 2 (negated)")
axes[0].axhline(setpoint, color="k", lw=0.5)
axes[0].set_ylabel("wheel speed [rad/s]")
axes[0].set_xlim(0.0, 2.0)  # everything interesting happens in the first 2 s
axes[0].legend()

axes[1].plot(t, trajectory.states[:, 1] * 1e6)
axes[1].set_ylabel("chassis height [um]")

axes[2].plot(t, trajectory.states[:, 0] * 1e6)
axes[2].set_ylabel("lateral drift [um]")
axes[2].set_xlabel("time [s]")

fig.tight_layout()
out = os.path.join(here, "baseline_run.png")
fig.savefig(out, dpi=120)
print(f"wrote {out}")
