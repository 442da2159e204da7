"""Planar rigid-body dynamics of a dual counter-rotating bucket-wheel excavator.

The chassis is a point mass with two wheels spinning about body-fixed axes,
so the state is 8-dimensional::

    (x, y, vx, vy, theta1, omega1, theta2, omega2)

``y`` is height above the undisturbed soil surface (positive up); the wheels
engage the soil whenever the chassis sits below it.  Each engaged wheel feels
the Luth-Wismer cutting resistance along a direction tilted from vertical by
the rake angle plus the engaged bucket's angular offset.  Buckets hand off as
the wheel turns, so that offset is the wheel angle folded into one bucket
pitch (2*pi / n_buckets): the cutting geometry repeats bucket after bucket
rather than tumbling with the hub.  The horizontal components of the two
mirrored wheels carry opposite signs and cancel when the wheels track each
other exactly; that cancellation, not large gains, is what keeps the machine
from walking sideways.

Each wheel's resistance also reacts on the rim as a torque of magnitude
``(D/2) * F_r`` opposing the spin, and an optional stochastic disturbance
adds an increment drawn uniformly from ``[0, F_r/2]`` to each wheel's
resistance, modelling inhomogeneous soil.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .control import Gains
from .regolith import SoilProperties, _clay_force, _sand_force

__all__ = [
    "WheelConfig",
    "ExcavatorParams",
    "ExcavatorState",
    "DisturbanceModel",
    "STATE_NAMES",
    "reaction_torque",
    "sample_disturbance",
    "derivatives",
]

STATE_NAMES = ("x", "y", "vx", "vy", "theta1", "omega1", "theta2", "omega2")


def _solid_disc_inertia(mass: float, diameter: float) -> float:
    return 0.5 * mass * (0.5 * diameter) ** 2


@dataclass(frozen=True)
class WheelConfig:
    """Geometry and inertia of one bucket wheel."""

    diameter: float = 0.622       # m
    blade_width: float = 0.0631   # m, bucket cutting edge width
    tool_length: float = 0.05     # m, cutting blade length
    rake_angle: float = math.radians(10.0)  # rad, signed; mirrored wheel uses the negative
    n_buckets: int = 24
    wheel_mass: float = 5.0       # kg
    inertia: float | None = None  # kg m^2; defaults to the solid-disc value
    max_cut_depth: float = 0.1    # m, engagement clamp on the cut depth
    engagement_factor: float = 1.0  # multiplier for simultaneously engaged buckets

    def __post_init__(self) -> None:
        if not (self.diameter > 0.0):
            raise ValueError(f"diameter must be > 0, got {self.diameter}")
        if not (self.blade_width > 0.0):
            raise ValueError(f"blade_width must be > 0, got {self.blade_width}")
        if not (self.tool_length > 0.0):
            raise ValueError(f"tool_length must be > 0, got {self.tool_length}")
        if not (0.0 < abs(self.rake_angle) < math.pi / 2):
            raise ValueError(
                f"rake_angle magnitude must lie in (0, pi/2), got {self.rake_angle}"
            )
        if self.n_buckets < 1:
            raise ValueError(f"n_buckets must be >= 1, got {self.n_buckets}")
        if not (self.wheel_mass > 0.0):
            raise ValueError(f"wheel_mass must be > 0, got {self.wheel_mass}")
        if self.inertia is None:
            object.__setattr__(self, "inertia",
                               _solid_disc_inertia(self.wheel_mass, self.diameter))
        if not (self.inertia > 0.0):
            raise ValueError(f"inertia must be > 0, got {self.inertia}")
        if not (self.max_cut_depth > 0.0):
            raise ValueError(f"max_cut_depth must be > 0, got {self.max_cut_depth}")
        if not (self.engagement_factor > 0.0):
            raise ValueError(f"engagement_factor must be > 0, got {self.engagement_factor}")

    @property
    def bucket_pitch(self) -> float:
        """Angular spacing between adjacent buckets, rad."""
        return 2.0 * math.pi / self.n_buckets


def _mirrored_wheel() -> WheelConfig:
    return WheelConfig(rake_angle=math.radians(-10.0))


@dataclass(frozen=True)
class ExcavatorParams:
    """Whole-machine parameters: soil, both wheels, total mass."""

    soil: SoilProperties = field(default_factory=SoilProperties)
    wheel_1: WheelConfig = field(default_factory=WheelConfig)
    wheel_2: WheelConfig = field(default_factory=_mirrored_wheel)
    chassis_mass: float = 0.0  # kg, structure beyond the two wheels

    def __post_init__(self) -> None:
        if not (self.chassis_mass >= 0.0):
            raise ValueError(f"chassis_mass must be >= 0, got {self.chassis_mass}")

    @property
    def total_mass(self) -> float:
        """Translating mass: both wheels plus chassis, kg."""
        return self.chassis_mass + self.wheel_1.wheel_mass + self.wheel_2.wheel_mass


@dataclass(frozen=True)
class ExcavatorState:
    """A point of the 8-dimensional state."""

    x: float = 0.0        # m
    y: float = 0.0        # m, height above the undisturbed surface
    vx: float = 0.0       # m/s
    vy: float = 0.0       # m/s
    theta1: float = 0.0   # rad
    omega1: float = 0.0   # rad/s
    theta2: float = 0.0   # rad
    omega2: float = 0.0   # rad/s

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.vx, self.vy,
                         self.theta1, self.omega1, self.theta2, self.omega2])

    @staticmethod
    def from_array(y: np.ndarray) -> "ExcavatorState":
        return ExcavatorState(*(float(v) for v in y))


@dataclass(frozen=True)
class DisturbanceModel:
    """Uniform stochastic resistance increments, off by default."""

    enabled: bool = False
    seed: int = 0

    def make_rng(self) -> np.random.Generator | None:
        return np.random.default_rng(self.seed) if self.enabled else None


def sample_disturbance(rng: np.random.Generator | None, f_reg: float) -> float:
    """One disturbance increment in [0, f_reg/2]; 0 when disabled (rng=None)."""
    if not (f_reg >= 0.0):
        raise ValueError(f"f_reg must be >= 0, got {f_reg}")
    if rng is None or f_reg == 0.0:
        return 0.0
    return rng.uniform(0.0, 0.5 * f_reg)


def reaction_torque(omega: float, diameter: float, f_reg: float) -> float:
    """Torque of the cutting resistance about the wheel axis, opposing spin.

    Zero for a stationary wheel; otherwise ``-sign(omega) * (D/2) * F_r`` so
    the power ``tau * omega`` is never positive.
    """
    if not (f_reg >= 0.0):
        raise ValueError(f"f_reg must be >= 0, got {f_reg}")
    if not (diameter > 0.0):
        raise ValueError(f"diameter must be > 0, got {diameter}")
    if omega == 0.0:
        return 0.0
    return -math.copysign(0.5 * diameter * f_reg, omega)


# ---------------------------------------------------------------------------
# packed-parameter kernel layer
#
# The jit-compiled equations of motion read a flat float64 vector so the
# integrator loop stays in compiled code.  Layout below; pack_params builds it.
# ---------------------------------------------------------------------------

P_MASS = 0
P_GRAV = 1
P_RHO = 2
P_COH = 3
# per-wheel block: radius, blade width, tool length, |rake|, |sin(rake)|,
# inertia, bucket pitch, max cut depth, engagement factor
P_W1 = 4
P_W2 = 13
PW_R = 0
PW_W = 1
PW_L = 2
PW_BETA = 3
PW_SINB = 4
PW_I = 5
PW_PITCH = 6
PW_DMAX = 7
PW_ENG = 8
P_KX = 22
P_KY = 23
P_KVY = 24
P_K1 = 25
P_K2 = 26
P_OMDES = 27
N_PARAMS = 28


def pack_params(params: ExcavatorParams, gains) -> np.ndarray:
    """Flatten machine parameters (and gains) for the compiled kernels."""
    p = np.zeros(N_PARAMS)
    p[P_MASS] = params.total_mass
    p[P_GRAV] = params.soil.gravity
    p[P_RHO] = params.soil.density
    p[P_COH] = params.soil.cohesion
    for base, wheel in ((P_W1, params.wheel_1), (P_W2, params.wheel_2)):
        p[base + PW_R] = 0.5 * wheel.diameter
        p[base + PW_W] = wheel.blade_width
        p[base + PW_L] = wheel.tool_length
        p[base + PW_BETA] = abs(wheel.rake_angle)
        p[base + PW_SINB] = abs(math.sin(wheel.rake_angle))
        p[base + PW_I] = wheel.inertia
        p[base + PW_PITCH] = wheel.bucket_pitch
        p[base + PW_DMAX] = wheel.max_cut_depth
        p[base + PW_ENG] = wheel.engagement_factor
    p[P_KX] = gains.k_x
    p[P_KY] = gains.k_y
    p[P_KVY] = gains.k_vy
    p[P_K1] = gains.k_1
    p[P_K2] = gains.k_2
    p[P_OMDES] = gains.wheel_speed_setpoint
    return p


@njit(cache=True)
def _wheel_resistance(p: np.ndarray, base: int, y: float, omega: float) -> float:
    """Effective cutting resistance magnitude of one wheel (no disturbance)."""
    d = -y
    if d <= 0.0:
        return 0.0
    if d > p[base + PW_DMAX]:
        d = p[base + PW_DMAX]
    v = abs(omega) * p[base + PW_R]
    fs = _sand_force(p[P_RHO], p[P_GRAV], p[base + PW_W], p[base + PW_L],
                     p[base + PW_BETA], p[base + PW_SINB], d, v)
    fc = _clay_force(p[P_RHO], p[P_GRAV], p[P_COH], p[base + PW_W], p[base + PW_L],
                     p[base + PW_BETA], p[base + PW_SINB], d, v)
    return p[base + PW_ENG] * (fs + fc)


@njit(cache=True)
def _force_angle(p: np.ndarray, base: int, theta: float) -> float:
    """Tilt of the resistance direction from vertical for one wheel.

    Rake magnitude plus the engaged bucket's offset, which is the wheel
    angle folded into one bucket pitch.
    """
    return p[base + PW_BETA] + (abs(theta) % p[base + PW_PITCH])


@njit(cache=True)
def _eom(y: np.ndarray, p: np.ndarray,
         hold_1: float, hold_2: float, tau_1: float, tau_2: float,
         dist_1: float, dist_2: float, out: np.ndarray) -> None:
    """Equations of motion; fills ``out`` with the state derivative.

    ``hold_i`` are the downward-positive hold-down forces, ``tau_i`` the
    motor torques, ``dist_i`` the sampled resistance increments.
    """
    fr1 = _wheel_resistance(p, P_W1, y[1], y[5]) + dist_1
    fr2 = _wheel_resistance(p, P_W2, y[1], y[7]) + dist_2
    phi1 = _force_angle(p, P_W1, y[4])
    phi2 = _force_angle(p, P_W2, y[6])

    m = p[P_MASS]
    out[0] = y[2]
    out[1] = y[3]
    out[2] = (-fr1 * math.sin(phi1) + fr2 * math.sin(phi2)) / m
    out[3] = (fr1 * math.cos(phi1) + fr2 * math.cos(phi2)) / m - p[P_GRAV] \
        - (hold_1 + hold_2) / m

    react1 = 0.0 if y[5] == 0.0 else -math.copysign(p[P_W1 + PW_R] * fr1, y[5])
    react2 = 0.0 if y[7] == 0.0 else -math.copysign(p[P_W2 + PW_R] * fr2, y[7])
    out[4] = y[5]
    out[5] = (tau_1 + react1) / p[P_W1 + PW_I]
    out[6] = y[7]
    out[7] = (tau_2 + react2) / p[P_W2 + PW_I]


def _check_finite(label: str, names, values) -> None:
    for name, value in zip(names, values):
        if not math.isfinite(value):
            raise ValueError(f"non-finite {label} component {name!r}: {value}")


def derivatives(state: ExcavatorState, params: ExcavatorParams,
                controls, disturbance: tuple[float, float] = (0.0, 0.0)) -> np.ndarray:
    """State derivative under explicit control forces and torques.

    ``controls`` carries the two hold-down forces (downward positive) and the
    two motor torques; ``disturbance`` the sampled resistance increments.
    Raises on any non-finite input or output, naming the offending term.
    """
    y = state.as_array()
    _check_finite("state", STATE_NAMES, y)
    _check_finite("control", ("hold_force_1", "hold_force_2", "torque_1", "torque_2"),
                  (controls.hold_force_1, controls.hold_force_2,
                   controls.torque_1, controls.torque_2))
    _check_finite("disturbance", ("dist1", "dist2"), disturbance)
    if disturbance[0] < 0.0 or disturbance[1] < 0.0:
        raise ValueError(f"disturbance increments must be >= 0, got {disturbance}")

    p = pack_params(params, Gains())  # gains unused by the bare equations of motion
    out = np.empty(8)
    _eom(y, p, controls.hold_force_1, controls.hold_force_2,
         controls.torque_1, controls.torque_2,
         disturbance[0], disturbance[1], out)
    _check_finite("derivative", STATE_NAMES, out)
    return out
