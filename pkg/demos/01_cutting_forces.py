"""
Regolith cutting forces across depth and speed
==============================================

Sweeps the empirical sand and clay resistance curves for a single blade
at Phobos gravity and shows where each term dominates.  Writes
``cutting_forces.png`` next to this script.
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from bucketwheel import CutState, SoilProperties, clay_force, sand_force

here = os.path.dirname(os.path.abspath(__file__))

soil = SoilProperties()  # cohesive Phobos regolith, g = 5.7 mm/s^2
blade = dict(rake_angle=np.radians(10.0), tool_length=0.05, blade_width=0.0631)

# --- force versus cut depth at the stock rim speed -----------------------
depths = np.linspace(1e-4, 0.05, 200)
rim_speed = 0.1073  # 3.3 RPM on a 0.622 m wheel

sand_d = [sand_force(soil, CutState(depth=d, speed=rim_speed, **blade))
          for d in depths]
clay_d = [clay_force(soil, CutState(depth=d, speed=rim_speed, **blade))
          for d in depths]

# --- force versus speed at a fixed 10 mm cut ------------------------------
speeds = np.linspace(1e-3, 1.0, 200)
sand_v = [sand_force(soil, CutState(depth=0.01, speed=v, **blade))
          for v in speeds]
clay_v = [clay_force(soil, CutState(depth=0.01, speed=v, **blade))
          for v in speeds]

fig, (ax_d, ax_v) = plt.subplots(1, 2, figsize=(10, 4))

ax_d.semilogy(depths * 1e3, sand_d, label="frictional (sand) term")
ax_d.semilogy(depths * 1e3, clay_d, label="cohesive (clay) term")
ax_d.set_xlabel("cut depth [mm]")
ax_d.set_ylabel("resistance [N]")
ax_d.set_title(f"force vs depth at v = {rim_speed} m/s")
ax_d.legend()

ax_v.semilogy(speeds, sand_v, label="frictional (sand) term")
ax_v.semilogy(speeds, clay_v, label="cohesive (clay) term")
ax_v.set_xlabel("blade speed [m/s]")
ax_v.set_title("force vs speed at d = 10 mm")
ax_v.legend()

# In milligravity the cohesive term towers over the frictional one: the
# weight-driven sand force scales with g while cohesion does not.
ratio = clay_d[-1] / sand_d[-1]
print(f"cohesive/frictional ratio at 50 mm depth: {ratio:.0f}x")

fig.tight_layout()
out = os.path.join(here, "cutting_forces.png")
fig.savefig(out, dpi=120)
print(f"wrote {out}")
