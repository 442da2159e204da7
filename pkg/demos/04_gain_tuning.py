"""
Simulation-driven gain tuning
=============================

Searches the wheel-speed gains over a log-spaced box, first with the
exhaustive grid and then with compass pattern search, and plots how the
best cost improves with rollouts.  Writes ``gain_tuning.png``.
"""

import os
from dataclasses import replace

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from bucketwheel import Scenario, TuningSpec, tune

here = os.path.dirname(os.path.abspath(__file__))

scenario = Scenario()
bounds = {"k_1": (400.0, 40000.0), "k_2": (400.0, 40000.0)}

grid_spec = TuningSpec(bounds=bounds, budget=16, method="grid",
                       eval_horizon=5.0)
grid = tune(scenario, grid_spec)
print(f"grid:    {grid.n_rollouts} rollouts, "
      f"best cost {grid.best_cost:.6g} at "
      f"k_1={grid.best_gains.k_1:.4g}, k_2={grid.best_gains.k_2:.4g}")

pattern_spec = replace(grid_spec, method="pattern", budget=40)
pattern = tune(scenario, pattern_spec)
print(f"pattern: {pattern.n_rollouts} rollouts, "
      f"best cost {pattern.best_cost:.6g} at "
      f"k_1={pattern.best_gains.k_1:.4g}, k_2={pattern.best_gains.k_2:.4g}")

fig, ax = plt.subplots(figsize=(7, 4))
for label, result in (("grid (4x4)", grid), ("pattern search", pattern)):
    iters = [e.iteration for e in result.trace]
    best = [e.best_cost for e in result.trace]
    ax.step(iters, best, where="post", label=label)
ax.set_xlabel("rollout")
ax.set_ylabel("best cost so far")
ax.set_yscale("log")
ax.legend()

fig.tight_layout()
out = os.path.join(here, "gain_tuning.png")
fig.savefig(out, dpi=120)
print(f"wrote {out}")
