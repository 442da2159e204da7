"""Energy and water-yield accounting for regolith processing.

Excavated regolith is heated from the ambient surface temperature to the
extraction temperature, at a specific heat taken as constant over that
range.  The water yield is the bound-water mass fraction times the mass
processed.  ``power_check`` combines the heating power at a given mass
throughput with the mechanical power draw of the excavator and compares
the total against a fixed power budget.
"""

from __future__ import annotations

from dataclasses import dataclass

from .regolith import SoilProperties

__all__ = [
    "POWER_BUDGET",
    "IsruReport",
    "heating_energy_per_kg",
    "water_yield",
    "power_check",
    "report_text",
    "report_csv",
]

POWER_BUDGET = 10_000.0  # W


def heating_energy_per_kg(soil: SoilProperties) -> float:
    """Energy to heat 1 kg of regolith to the extraction temperature, J/kg."""
    if soil.extraction_temp <= soil.surface_temp:
        raise ValueError(
            f"extraction temperature ({soil.extraction_temp} C) must exceed "
            f"surface temperature ({soil.surface_temp} C)")
    return soil.specific_heat * (soil.extraction_temp - soil.surface_temp)


def water_yield(soil: SoilProperties, mass: float) -> float:
    """Water mass (kg) recovered from ``mass`` kg of processed regolith."""
    if mass < 0.0:
        raise ValueError(f"mass must be >= 0, got {mass}")
    return soil.water_fraction * mass


@dataclass(frozen=True)
class IsruReport:
    """Power and yield figures for a steady excavation rate."""

    mass_rate: float          # kg/s of regolith processed
    energy_per_kg: float      # J/kg heating energy
    water_per_kg: float       # kg water per kg regolith
    heating_power: float      # W
    mech_power: float         # W drawn by the excavator
    total_power: float        # W
    water_rate: float         # kg/s of water produced
    power_budget: float       # W available
    within_budget: bool


def power_check(soil: SoilProperties, mass_rate: float,
                mech_power: float = 0.0,
                power_budget: float = POWER_BUDGET) -> IsruReport:
    """Check a processing rate against the available power.

    A total power exactly equal to the budget counts as within budget.
    """
    if mass_rate < 0.0:
        raise ValueError(f"mass_rate must be >= 0, got {mass_rate}")
    if mech_power < 0.0:
        raise ValueError(f"mech_power must be >= 0, got {mech_power}")
    if power_budget <= 0.0:
        raise ValueError(f"power_budget must be > 0, got {power_budget}")
    e_kg = heating_energy_per_kg(soil)
    heating = e_kg * mass_rate
    total = heating + mech_power
    return IsruReport(
        mass_rate=mass_rate,
        energy_per_kg=e_kg,
        water_per_kg=soil.water_fraction,
        heating_power=heating,
        mech_power=mech_power,
        total_power=total,
        water_rate=soil.water_fraction * mass_rate,
        power_budget=power_budget,
        within_budget=total <= power_budget,
    )


_FIELDS = ("mass_rate", "energy_per_kg", "water_per_kg", "heating_power",
           "mech_power", "total_power", "water_rate", "power_budget",
           "within_budget")


def report_text(report: IsruReport) -> str:
    """Flat key = value rendering, one line per field."""
    lines = []
    for name in _FIELDS:
        value = getattr(report, name)
        if isinstance(value, bool):
            lines.append(f"{name} = {'yes' if value else 'no'}")
        else:
            lines.append(f"{name} = {value:.17g}")
    return "\n".join(lines) + "\n"


def report_csv(report: IsruReport) -> str:
    """Header plus a single data row, matching the text rendering's fields."""
    row = []
    for name in _FIELDS:
        value = getattr(report, name)
        row.append(("1" if value else "0") if isinstance(value, bool)
                   else "%.17g" % value)
    return ",".join(_FIELDS) + "\n" + ",".join(row) + "\n"
