"""PD control laws: hold-down thrust and wheel-speed torques.

Two loops keep the excavator anchored and cutting:

* a vertical hold-down force, active only above the surface (y > 0), that
  pushes the machine back onto the soil before cutting reaction can throw it
  off.  It is one-sided: thrusters can press down but never pull up, so the
  commanded total is floored at zero and split equally between the wheels.
* per-wheel torque loops driving the wheels to opposite spin setpoints, with
  a shared horizontal-drift term that nudges both wheels when the chassis
  wanders in x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from numba import njit

__all__ = [
    "RPM_TO_RAD_S",
    "Gains",
    "ControlOutput",
    "vertical_hold_force",
    "wheel_torques",
    "split_vertical_force",
    "control_output",
]

RPM_TO_RAD_S = 2.0 * math.pi / 60.0


@dataclass(frozen=True)
class Gains:
    """Controller gains and the wheel-speed setpoint."""

    k_x: float = 1.0          # N m / m, horizontal drift correction on both torques
    k_y: float = 0.9          # N / m, hold-down position gain
    k_vy: float = 90000.0     # N s / m, hold-down velocity gain
    k_1: float = 4000.0       # N m s / rad, wheel 1 speed gain
    k_2: float = 4000.0       # N m s / rad, wheel 2 speed gain
    wheel_speed_setpoint: float = 3.3 * RPM_TO_RAD_S  # rad/s, wheel 1 spins +, wheel 2 -

    def __post_init__(self) -> None:
        for name in ("k_x", "k_y", "k_vy", "k_1", "k_2"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.wheel_speed_setpoint < 0.0:
            raise ValueError(
                f"wheel_speed_setpoint must be >= 0, got {self.wheel_speed_setpoint}"
            )


@dataclass(frozen=True)
class ControlOutput:
    """Forces and torques commanded at one instant."""

    hold_force_1: float  # N, downward positive
    hold_force_2: float  # N, downward positive
    torque_1: float      # N m
    torque_2: float      # N m


@njit(cache=True)
def _hold_total(y: float, vy: float, k_y: float, k_vy: float) -> float:
    if y <= 0.0:
        return 0.0
    total = k_y * y + k_vy * vy
    return total if total > 0.0 else 0.0


@njit(cache=True)
def _torque_1(omega1: float, x: float, k_1: float, k_x: float, setpoint: float) -> float:
    return -k_1 * (omega1 - setpoint) - k_x * x


@njit(cache=True)
def _torque_2(omega2: float, x: float, k_2: float, k_x: float, setpoint: float) -> float:
    return -k_2 * (omega2 + setpoint) - k_x * x


def vertical_hold_force(y: float, vy: float, gains: Gains) -> float:
    """Total downward hold force commanded at height y, velocity vy.

    Zero at or below the surface; above it, the PD sum floored at zero
    (thrusters cannot pull the machine up).
    """
    return _hold_total(y, vy, gains.k_y, gains.k_vy)


def split_vertical_force(total: float) -> tuple[float, float]:
    """Split a commanded total hold force equally between the wheels."""
    if total < 0.0:
        raise ValueError(f"total hold force must be >= 0, got {total}")
    half = 0.5 * total
    return half, half


def wheel_torques(omega1: float, omega2: float, x: float, gains: Gains) -> tuple[float, float]:
    """Motor torques driving wheel 1 to +setpoint and wheel 2 to -setpoint.

    Both include the same horizontal-drift correction ``-k_x * x``.
    """
    return (_torque_1(omega1, x, gains.k_1, gains.k_x, gains.wheel_speed_setpoint),
            _torque_2(omega2, x, gains.k_2, gains.k_x, gains.wheel_speed_setpoint))


def control_output(state, gains: Gains) -> ControlOutput:
    """Full controller evaluation at one state."""
    total = vertical_hold_force(state.y, state.vy, gains)
    f1, f2 = split_vertical_force(total)
    t1, t2 = wheel_torques(state.omega1, state.omega2, state.x, gains)
    return ControlOutput(hold_force_1=f1, hold_force_2=f2, torque_1=t1, torque_2=t2)
