"""
Monte Carlo disturbance sweep
=============================

Runs the stock scenario under randomized regolith-resistance disturbances
for a batch of seeds and plots the spread of the anchoring metrics.
Writes ``disturbance_sweep.png``.
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from bucketwheel import DisturbanceModel, Scenario, monte_carlo

here = os.path.dirname(os.path.abspath(__file__))

N_RUNS = 20

scenario = Scenario(disturbance=DisturbanceModel(enabled=True))
result = monte_carlo(scenario, N_RUNS, base_seed=0)

print(f"{len(result.seeds)} runs, {result.n_failed} failed")
for metric in ("max_abs_x", "max_y", "max_speed", "settle_time_omega"):
    lo, mean, hi = result.stats[metric]
    print(f"{metric:18s} min {lo:.3g}  mean {mean:.3g}  max {hi:.3g}")

summaries = [s for s in result.summaries if s is not None]
liftoffs = sum(1 for s in summaries if s.liftoff)
print(f"liftoff events: {liftoffs}/{len(result.seeds)}")

drifts = [s.max_abs_x for s in summaries]
speeds = [s.max_speed for s in summaries]

fig, (ax_x, ax_v) = plt.subplots(1, 2, figsize=(10, 4))

ax_x.hist(drifts, bins=10)
ax_x.axvline(1e-2, color="r", lw=1, label="1 cm drift limit")
ax_x.set_xlabel("max |x| drift [m]")
ax_x.set_ylabel("runs")
ax_x.legend()

ax_v.hist(speeds, bins=10)
ax_v.axvline(0.111, color="r", lw=1, label="1% of escape speed")
ax_v.set_xlabel("peak chassis speed [m/s]")
ax_v.legend()

fig.tight_layout()
out = os.path.join(here, "disturbance_sweep.png")
fig.savefig(out, dpi=120)
print(f"wrote {out}")
