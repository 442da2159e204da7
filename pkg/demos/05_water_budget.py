"""
Water extraction power budget
=============================

Walks the excavation mass rate up and finds where thermal extraction of
the bound water saturates a 10 kW bus.  Writes ``water_budget.png``.
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from bucketwheel import (POWER_BUDGET, SoilProperties, heating_energy_per_kg,
                         power_check, report_text)

here = os.path.dirname(os.path.abspath(__file__))

soil = SoilProperties()
energy = heating_energy_per_kg(soil)
print(f"heating energy: {energy:.0f} J per kg of regolith "
      f"({soil.extraction_temp - soil.surface_temp:.0f} C rise)")

# the largest rate the stock budget supports, ignoring mechanical power
rate_max = POWER_BUDGET / energy
print(f"break-even mass rate at {POWER_BUDGET/1e3:.0f} kW: "
      f"{rate_max*1e3:.3f} g/s\n")

print(report_text(power_check(soil, 0.005)))

rates = np.linspace(0.0, 0.015, 200)
reports = [power_check(soil, r) for r in rates]
power = [r.total_power for r in reports]
water = [r.water_rate * 3600.0 for r in reports]  # kg/h

fig, ax_p = plt.subplots(figsize=(7, 4))
ax_p.plot(rates * 1e3, np.asarray(power) / 1e3, label="heating power")
ax_p.axhline(POWER_BUDGET / 1e3, color="r", lw=1, label="bus limit")
ax_p.axvline(rate_max * 1e3, color="r", lw=0.5, ls="--")
ax_p.set_xlabel("excavation rate [g/s]")
ax_p.set_ylabel("power [kW]")
ax_p.legend(loc="upper left")

ax_w = ax_p.twinx()
ax_w.plot(rates * 1e3, water, "g:", label="water yield")
ax_w.set_ylabel("water [kg/h]")
ax_w.legend(loc="lower right")

fig.tight_layout()
out = os.path.join(here, "water_budget.png")
fig.savefig(out, dpi=120)
print(f"wrote {out}")
