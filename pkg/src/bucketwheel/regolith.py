"""Soil cutting resistance for a bucket-wheel tool, after Luth & Wismer.

The resistance on a flat blade driven through granular soil splits into a
frictional (sand) term and a cohesive (clay) term; the total is their sum.
Both are power-law fits in the cut depth ``d``, blade width ``w``, tool
length ``l``, rake angle ``beta`` and cutting speed ``v``, scaled by soil
density ``rho``, local gravity ``g`` and cohesion ``c``.

The empirical exponents are only meaningful for a blade actually engaged in
soil, so both terms are defined as exactly zero at ``d = 0``.  Rake angle
enters through its magnitude: a mirrored wheel (negative rake) sees the same
resistance magnitude, and the direction is handled by the rigid-body model,
not here.

In milligravity the cohesive term dominates: gravity appears in the
denominator of the cohesion ratio ``11.5 c / (rho g d)``, so lowering g
raises the resistance relative to weight.  That inversion is what makes
anchoring, not digging power, the hard problem on small bodies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

from numba import njit

if TYPE_CHECKING:  # avoid a runtime import cycle with dynamics
    from .dynamics import WheelConfig

__all__ = [
    "SoilProperties",
    "CutState",
    "ForceBreakdown",
    "sand_force",
    "clay_force",
    "total_resistive_force",
    "cut_state_from_plunge",
]


@dataclass(frozen=True)
class SoilProperties:
    """Bulk regolith properties plus the thermal numbers used for water extraction.

    Defaults describe a Phobos-like surface: loose regolith at millinewton
    gravity, weakly cohesive, 10% water by mass.
    """

    density: float = 1880.0          # kg/m^3
    gravity: float = 0.0057          # m/s^2
    cohesion: float = 147.0          # Pa
    water_fraction: float = 0.10     # kg water per kg regolith
    specific_heat: float = 1430.0    # J/(kg C)
    surface_temp: float = 200.0      # C
    extraction_temp: float = 1000.0  # C

    def __post_init__(self) -> None:
        if not (self.density > 0.0):
            raise ValueError(f"density must be > 0, got {self.density}")
        # gravity = 0 is allowed so that free-space (no-soil, no-weight)
        # scenarios can be expressed; the force model itself needs g > 0
        # as soon as a blade actually engages.
        if not (self.gravity >= 0.0):
            raise ValueError(f"gravity must be >= 0, got {self.gravity}")
        if not (self.cohesion >= 0.0):
            raise ValueError(f"cohesion must be >= 0, got {self.cohesion}")
        if not (0.0 <= self.water_fraction <= 1.0):
            raise ValueError(f"water_fraction must be inside [0, 1], got {self.water_fraction}")
        if not (self.specific_heat > 0.0):
            raise ValueError(f"specific_heat must be > 0, got {self.specific_heat}")


@dataclass(frozen=True)
class CutState:
    """Instantaneous engagement of one blade with the soil."""

    depth: float        # m, cut depth d >= 0
    speed: float        # m/s, cutting speed v >= 0
    rake_angle: float   # rad, signed; magnitude must lie in (0, pi/2)
    tool_length: float  # m, blade length l > 0
    blade_width: float  # m, blade width w > 0

    def __post_init__(self) -> None:
        if not (self.depth >= 0.0):
            raise ValueError(f"depth must be >= 0, got {self.depth}")
        if not (self.speed >= 0.0):
            raise ValueError(f"speed must be >= 0, got {self.speed}")
        if not (0.0 < abs(self.rake_angle) < math.pi / 2):
            raise ValueError(
                f"rake_angle magnitude must lie in (0, pi/2), got {self.rake_angle}"
            )
        if not (self.tool_length > 0.0):
            raise ValueError(f"tool_length must be > 0, got {self.tool_length}")
        if not (self.blade_width > 0.0):
            raise ValueError(f"blade_width must be > 0, got {self.blade_width}")


@dataclass(frozen=True)
class ForceBreakdown:
    """Resistance split into its frictional and cohesive parts (newtons)."""

    f_sand: float
    f_clay: float
    f_total: float


# ---------------------------------------------------------------------------
# scalar kernels
#
# These are the actual implementation; the public functions below validate
# inputs and delegate here.  Keeping them as jit-compiled scalar functions
# lets the simulation loop call them inside compiled code at full speed.
# ---------------------------------------------------------------------------


@njit(cache=True)
def _sand_force(rho: float, g: float, w: float, l: float,
                beta_abs: float, sin_beta_abs: float, d: float, v: float) -> float:
    if d <= 0.0:
        return 0.0
    bracket = 1.05 * (d / w) ** 1.11 + 1.26 * v * v / (g * l) + 3.91
    return (rho * g * w * l ** 1.5 * beta_abs ** 1.73 * math.sqrt(d)
            * (d / (l * sin_beta_abs)) ** 0.77 * bracket)


@njit(cache=True)
def _clay_force(rho: float, g: float, c: float, w: float, l: float,
                beta_abs: float, sin_beta_abs: float, d: float, v: float) -> float:
    if d <= 0.0:
        return 0.0
    # (2v/3w)**0.121 -> 0 as v -> 0 (IEEE pow(0, positive) = 0), so a
    # stationary blade sees no cohesive drag term.
    bracket = ((11.5 * c / (rho * g * d)) ** 1.21
               * (2.0 * v / (3.0 * w)) ** 0.121
               * (0.055 * (d / w) ** 0.78 + 0.065)
               + 0.64 * v * v / (g * l))
    return (rho * g * w * l ** 1.5 * beta_abs ** 1.15 * math.sqrt(d)
            * (d / (l * sin_beta_abs)) ** 1.21 * bracket)


def _require_engaged_gravity(soil: SoilProperties, cut: CutState) -> None:
    if cut.depth > 0.0 and soil.gravity <= 0.0:
        raise ValueError("gravity must be > 0 to evaluate resistance on an engaged blade")


def sand_force(soil: SoilProperties, cut: CutState) -> float:
    """Frictional part of the cutting resistance, in newtons.

    Zero at zero depth.  Grows monotonically with depth and speed.
    """
    _require_engaged_gravity(soil, cut)
    return _sand_force(soil.density, soil.gravity, cut.blade_width, cut.tool_length,
                       abs(cut.rake_angle), abs(math.sin(cut.rake_angle)),
                       cut.depth, cut.speed)


def clay_force(soil: SoilProperties, cut: CutState) -> float:
    """Cohesive part of the cutting resistance, in newtons.

    The cohesion ratio divides by depth, so a cohesive soil (c > 0) has no
    defined value at d = 0; the zero-depth, zero-cohesion case is 0.
    """
    _require_engaged_gravity(soil, cut)
    if cut.depth == 0.0 and soil.cohesion > 0.0:
        raise ValueError("clay term is undefined at depth = 0 with cohesion > 0")
    return _clay_force(soil.density, soil.gravity, soil.cohesion,
                       cut.blade_width, cut.tool_length,
                       abs(cut.rake_angle), abs(math.sin(cut.rake_angle)),
                       cut.depth, cut.speed)


def total_resistive_force(soil: SoilProperties, cut: CutState) -> ForceBreakdown:
    """Total cutting resistance with its sand/clay split."""
    fs = sand_force(soil, cut)
    fc = clay_force(soil, cut)
    return ForceBreakdown(f_sand=fs, f_clay=fc, f_total=fs + fc)


def cut_state_from_plunge(y: float, geometry: "WheelConfig", omega: float) -> CutState:
    """Cut state of a wheel whose hub sits at vertical position ``y``.

    ``y`` is the chassis height above the undisturbed surface (positive up),
    so the cut depth is the plunge ``-y``, clamped to ``[0, max_cut_depth]``.
    Cutting speed is the rim speed ``|omega| * D/2``.
    """
    depth = min(max(-y, 0.0), geometry.max_cut_depth)
    speed = abs(omega) * 0.5 * geometry.diameter
    return CutState(depth=depth, speed=speed,
                    rake_angle=geometry.rake_angle,
                    tool_length=geometry.tool_length,
                    blade_width=geometry.blade_width)
