"""Fixed-step RK4 and adaptive Dormand-Prince RK45 integration.

Both methods integrate ``dy/dt = f(t, y)`` and report the solution on a
uniform output grid ``t_k = k * output_step`` (timestamps computed by
multiplication, so the grid is exact).  Internal steps never overshoot an
output point: the last step before each grid time is clipped to land on it.

RK45 is the Dormand-Prince 5(4) pair: the fifth-order solution propagates,
the embedded fourth-order solution provides the error estimate.  Steps are
accepted when the weighted RMS error is at most 1, with the usual weights
``abs_tol + rel_tol * |y|`` and a step-size update clipped to [0.2, 5] times
the current step.  The controller is deterministic: the same problem and
config always produce the same step sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "IntegratorConfig",
    "IntegrationError",
    "rk4_step",
    "rk45_step",
    "integrate",
]

# --- Dormand-Prince 5(4) tableau -------------------------------------------
# Node fractions, stage coefficients, fifth-order weights, and the
# difference between the fifth- and fourth-order weights (error row).
DP_C2, DP_C3, DP_C4, DP_C5, DP_C6 = 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0

DP_A21 = 1 / 5
DP_A31, DP_A32 = 3 / 40, 9 / 40
DP_A41, DP_A42, DP_A43 = 44 / 45, -56 / 15, 32 / 9
DP_A51, DP_A52, DP_A53, DP_A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
DP_A61, DP_A62, DP_A63, DP_A64, DP_A65 = (
    9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656)
DP_B1, DP_B3, DP_B4, DP_B5, DP_B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84

DP_E1 = 71 / 57600
DP_E3 = -71 / 16695
DP_E4 = 71 / 1920
DP_E5 = -17253 / 339200
DP_E6 = 22 / 525
DP_E7 = -1 / 40

# step-size controller
SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0
# fifth-order pair: error ~ h^5, so the optimal factor uses the 1/5 root
ERR_EXPONENT = -0.2
# a step below this fraction of the horizon means the controller has stalled
UNDERFLOW_FRACTION = 1e-12


class IntegrationError(RuntimeError):
    """Integration failed; carries whatever output samples were completed."""

    def __init__(self, message: str, times: np.ndarray, states: np.ndarray):
        super().__init__(message)
        self.times = times
        self.states = states


@dataclass(frozen=True)
class IntegratorConfig:
    """Method selection and grid/tolerance settings.

    ``max_step`` caps the internal step for RK45 and *is* the fixed step for
    RK4 (clipped at output boundaries).
    """

    method: str = "rk45"
    t_end: float = 100.0      # s
    output_step: float = 0.1  # s
    rel_tol: float = 1e-6     # RK45 only
    abs_tol: float = 1e-8     # RK45 only
    max_step: float = math.inf  # s

    def __post_init__(self) -> None:
        if self.method not in ("rk4", "rk45"):
            raise ValueError(f"method must be 'rk4' or 'rk45', got {self.method!r}")
        if not (self.t_end > 0.0):
            raise ValueError(f"t_end must be > 0, got {self.t_end}")
        if not (0.0 < self.output_step <= self.t_end):
            raise ValueError(f"output_step must lie in (0, t_end], got {self.output_step}")
        n = self.t_end / self.output_step
        if abs(n - round(n)) > 1e-9 * max(1.0, n):
            raise ValueError(
                f"t_end must be an integer multiple of output_step, got {self.t_end}/{self.output_step}"
            )
        if not (self.rel_tol > 0.0):
            raise ValueError(f"rel_tol must be > 0, got {self.rel_tol}")
        if not (self.abs_tol > 0.0):
            raise ValueError(f"abs_tol must be > 0, got {self.abs_tol}")
        if not (self.max_step > 0.0):
            raise ValueError(f"max_step must be > 0, got {self.max_step}")
        if self.method == "rk4" and not math.isfinite(self.max_step):
            raise ValueError("rk4 needs a finite max_step to use as its fixed step")

    @property
    def n_samples(self) -> int:
        """Number of output samples including t = 0."""
        return int(round(self.t_end / self.output_step)) + 1


def rk4_step(f: Callable, t: float, y: np.ndarray, h: float) -> np.ndarray:
    """One classic fourth-order Runge-Kutta step."""
    k1 = f(t, y)
    k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = f(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rk45_step(f: Callable, t: float, y: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    """One Dormand-Prince step: fifth-order solution and error estimate."""
    k1 = f(t, y)
    k2 = f(t + DP_C2 * h, y + h * (DP_A21 * k1))
    k3 = f(t + DP_C3 * h, y + h * (DP_A31 * k1 + DP_A32 * k2))
    k4 = f(t + DP_C4 * h, y + h * (DP_A41 * k1 + DP_A42 * k2 + DP_A43 * k3))
    k5 = f(t + DP_C5 * h, y + h * (DP_A51 * k1 + DP_A52 * k2 + DP_A53 * k3 + DP_A54 * k4))
    k6 = f(t + DP_C6 * h, y + h * (DP_A61 * k1 + DP_A62 * k2 + DP_A63 * k3
                                   + DP_A64 * k4 + DP_A65 * k5))
    y5 = y + h * (DP_B1 * k1 + DP_B3 * k3 + DP_B4 * k4 + DP_B5 * k5 + DP_B6 * k6)
    k7 = f(t + h, y5)
    err = h * (DP_E1 * k1 + DP_E3 * k3 + DP_E4 * k4 + DP_E5 * k5 + DP_E6 * k6 + DP_E7 * k7)
    return y5, err


def _error_norm(err: np.ndarray, y_old: np.ndarray, y_new: np.ndarray,
                abs_tol: float, rel_tol: float) -> float:
    scale = abs_tol + rel_tol * np.maximum(np.abs(y_old), np.abs(y_new))
    return float(np.sqrt(np.mean((err / scale) ** 2)))


def integrate(f: Callable, y0: np.ndarray, config: IntegratorConfig) -> tuple[np.ndarray, np.ndarray]:
    """Integrate ``f`` from t = 0 and sample on the uniform output grid.

    Returns ``(times, states)`` with ``times[k] = k * output_step`` and
    ``states`` of shape ``(n_samples, len(y0))``.  Raises IntegrationError
    (with the completed samples attached) if the state goes non-finite or the
    adaptive step underflows.
    """
    y = np.asarray(y0, dtype=float).copy()
    n_out = config.n_samples
    times = np.array([k * config.output_step for k in range(n_out)])
    states = np.empty((n_out, y.size))
    states[0] = y

    def fail(message: str, k_done: int) -> IntegrationError:
        return IntegrationError(message, times[:k_done + 1].copy(),
                                states[:k_done + 1].copy())

    h_min = UNDERFLOW_FRACTION * config.t_end
    if config.method == "rk4":
        h_nominal = min(config.max_step, config.output_step)
        t = 0.0
        for k in range(1, n_out):
            t_target = times[k]
            while t < t_target:
                h = min(h_nominal, t_target - t)
                y = rk4_step(f, t, y, h)
                t += h
                if not np.all(np.isfinite(y)):
                    raise fail(f"non-finite state at t = {t:.6g}", k - 1)
            t = t_target
            states[k] = y
        return times, states

    # rk45
    h = min(config.output_step, config.max_step) * 1e-2
    t = 0.0
    for k in range(1, n_out):
        t_target = times[k]
        while t < t_target:
            h = min(h, config.max_step, t_target - t)
            if h < h_min:
                raise fail(f"step size underflow at t = {t:.6g} (h = {h:.3g})", k - 1)
            y_new, err = rk45_step(f, t, y, h)
            if not np.all(np.isfinite(y_new)):
                # treat like a failed step: shrink and retry
                h *= MIN_FACTOR
                continue
            norm = _error_norm(err, y, y_new, config.abs_tol, config.rel_tol)
            if norm <= 1.0:
                t += h
                y = y_new
                factor = MAX_FACTOR if norm == 0.0 else min(
                    MAX_FACTOR, max(MIN_FACTOR, SAFETY * norm ** ERR_EXPONENT))
                h *= factor
            else:
                h *= max(MIN_FACTOR, SAFETY * norm ** ERR_EXPONENT)
        t = t_target
        states[k] = y
    return times, states
