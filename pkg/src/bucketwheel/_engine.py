"""Compiled closed-loop propagation of the excavator.

Everything here runs under numba so a 100 s run costs seconds even though
the stiff wheel-speed loop (time constant I/K ~ 6e-5 s) forces an explicit
integrator to sub-millisecond steps.

The stochastic resistance increments are drawn once per attempted step, from
the resistance at the step's start state, and held constant through that
step's internal stages; re-sampling inside stages would hand the integrator
an inconsistent right-hand side.  Passing the same ``numpy.random.Generator``
state therefore reproduces a run bit for bit.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .control import _hold_total, _torque_1, _torque_2
from .dynamics import (
    P_COH,
    P_GRAV,
    P_K1,
    P_K2,
    P_KVY,
    P_KX,
    P_KY,
    P_OMDES,
    P_RHO,
    P_W1,
    P_W2,
    PW_BETA,
    PW_DMAX,
    PW_ENG,
    PW_L,
    PW_R,
    PW_SINB,
    PW_W,
    _eom,
    _wheel_resistance,
)
from .regolith import _clay_force, _sand_force
from .integrator import (
    DP_A21, DP_A31, DP_A32, DP_A41, DP_A42, DP_A43,
    DP_A51, DP_A52, DP_A53, DP_A54,
    DP_A61, DP_A62, DP_A63, DP_A64, DP_A65,
    DP_B1, DP_B3, DP_B4, DP_B5, DP_B6,
    DP_C2, DP_C3, DP_C4, DP_C5, DP_C6,
    DP_E1, DP_E3, DP_E4, DP_E5, DP_E6, DP_E7,
    ERR_EXPONENT,
    MAX_FACTOR,
    MIN_FACTOR,
    SAFETY,
    UNDERFLOW_FRACTION,
)

# extras recorded per output sample
EX_FR1, EX_FR2, EX_F1, EX_F2, EX_TAU1, EX_TAU2, EX_DIST1, EX_DIST2, \
    EX_FS1, EX_FC1, EX_FS2, EX_FC2 = range(12)
N_EXTRAS = 12

# propagation status codes
OK = 0
NON_FINITE = 1
STEP_UNDERFLOW = 2


@njit(cache=True)
def _rhs(y: np.ndarray, p: np.ndarray, d1: float, d2: float, out: np.ndarray) -> None:
    """Closed-loop right-hand side: controller plus equations of motion."""
    hold = _hold_total(y[1], y[3], p[P_KY], p[P_KVY])
    half = 0.5 * hold
    tau1 = _torque_1(y[5], y[0], p[P_K1], p[P_KX], p[P_OMDES])
    tau2 = _torque_2(y[7], y[0], p[P_K2], p[P_KX], p[P_OMDES])
    _eom(y, p, half, half, tau1, tau2, d1, d2, out)


@njit(cache=True)
def _record(y: np.ndarray, p: np.ndarray, d1: float, d2: float, row: np.ndarray) -> None:
    """Fill one extras row: forces and controls consistent with state ``y``."""
    # effective per-wheel resistance split, disturbance excluded
    fs1, fc1 = _resistance_split(p, P_W1, y[1], y[5])
    fs2, fc2 = _resistance_split(p, P_W2, y[1], y[7])
    hold = _hold_total(y[1], y[3], p[P_KY], p[P_KVY])
    row[EX_FR1] = fs1 + fc1 + d1
    row[EX_FR2] = fs2 + fc2 + d2
    row[EX_F1] = 0.5 * hold
    row[EX_F2] = 0.5 * hold
    row[EX_TAU1] = _torque_1(y[5], y[0], p[P_K1], p[P_KX], p[P_OMDES])
    row[EX_TAU2] = _torque_2(y[7], y[0], p[P_K2], p[P_KX], p[P_OMDES])
    row[EX_DIST1] = d1
    row[EX_DIST2] = d2
    row[EX_FS1] = fs1
    row[EX_FC1] = fc1
    row[EX_FS2] = fs2
    row[EX_FC2] = fc2


@njit(cache=True)
def _resistance_split(p: np.ndarray, base: int, y1: float, omega: float) -> tuple:
    """Engagement-factored (sand, clay) forces of one wheel."""
    d = -y1
    if d <= 0.0:
        return 0.0, 0.0
    if d > p[base + PW_DMAX]:
        d = p[base + PW_DMAX]
    v = abs(omega) * p[base + PW_R]
    eng = p[base + PW_ENG]
    fs = eng * _sand_force(p[P_RHO], p[P_GRAV], p[base + PW_W], p[base + PW_L],
                           p[base + PW_BETA], p[base + PW_SINB], d, v)
    fc = eng * _clay_force(p[P_RHO], p[P_GRAV], p[P_COH], p[base + PW_W], p[base + PW_L],
                           p[base + PW_BETA], p[base + PW_SINB], d, v)
    return fs, fc


@njit(cache=True)
def _rk45_attempt(y: np.ndarray, p: np.ndarray, h: float, d1: float, d2: float,
                  k1: np.ndarray, work: np.ndarray, y_new: np.ndarray,
                  err: np.ndarray, k: np.ndarray) -> None:
    """One Dormand-Prince attempt; k1 must hold the RHS at ``y`` on entry.

    Fills y_new and err.  ``work`` is an 8-vector scratch buffer; ``k`` is a
    (7, 8) stage buffer.
    """
    n = y.shape[0]
    for i in range(n):
        k[0, i] = k1[i]
        work[i] = y[i] + h * DP_A21 * k1[i]
    _rhs(work, p, d1, d2, k[1])
    for i in range(n):
        work[i] = y[i] + h * (DP_A31 * k[0, i] + DP_A32 * k[1, i])
    _rhs(work, p, d1, d2, k[2])
    for i in range(n):
        work[i] = y[i] + h * (DP_A41 * k[0, i] + DP_A42 * k[1, i] + DP_A43 * k[2, i])
    _rhs(work, p, d1, d2, k[3])
    for i in range(n):
        work[i] = y[i] + h * (DP_A51 * k[0, i] + DP_A52 * k[1, i]
                              + DP_A53 * k[2, i] + DP_A54 * k[3, i])
    _rhs(work, p, d1, d2, k[4])
    for i in range(n):
        work[i] = y[i] + h * (DP_A61 * k[0, i] + DP_A62 * k[1, i] + DP_A63 * k[2, i]
                              + DP_A64 * k[3, i] + DP_A65 * k[4, i])
    _rhs(work, p, d1, d2, k[5])
    for i in range(n):
        y_new[i] = y[i] + h * (DP_B1 * k[0, i] + DP_B3 * k[2, i] + DP_B4 * k[3, i]
                               + DP_B5 * k[4, i] + DP_B6 * k[5, i])
    _rhs(y_new, p, d1, d2, k[6])
    for i in range(n):
        err[i] = h * (DP_E1 * k[0, i] + DP_E3 * k[2, i] + DP_E4 * k[3, i]
                      + DP_E5 * k[4, i] + DP_E6 * k[5, i] + DP_E7 * k[6, i])


@njit(cache=True)
def _propagate(y_start: np.ndarray, p: np.ndarray, use_rk45: bool,
               t_end: float, out_step: float, rel_tol: float, abs_tol: float,
               max_step: float, dist_on: bool, rng,
               states: np.ndarray, extras: np.ndarray) -> tuple:
    """Propagate the closed loop over the whole horizon.

    Fills ``states`` (n_out, 8) and ``extras`` (n_out, 12) at the uniform
    grid times k * out_step.  Returns (status, fail_component, t_reached).
    """
    n_out = states.shape[0]
    y = y_start.copy()
    states[0] = y
    d1 = 0.0
    d2 = 0.0
    _record(y, p, d1, d2, extras[0])
    # sample 0 predates any step: no disturbance is in effect yet
    extras[0, EX_DIST1] = 0.0
    extras[0, EX_DIST2] = 0.0

    k1 = np.empty(8)
    work = np.empty(8)
    y_new = np.empty(8)
    err_vec = np.empty(8)
    stages = np.empty((7, 8))
    h_min = UNDERFLOW_FRACTION * t_end
    h = min(out_step, max_step) * 1e-2
    t = 0.0

    for kout in range(1, n_out):
        t_target = kout * out_step
        while t < t_target:
            if dist_on:
                f1 = _wheel_resistance(p, P_W1, y[1], y[5])
                f2 = _wheel_resistance(p, P_W2, y[1], y[7])
                d1 = rng.uniform(0.0, 0.5 * f1) if f1 > 0.0 else 0.0
                d2 = rng.uniform(0.0, 0.5 * f2) if f2 > 0.0 else 0.0
            if use_rk45:
                h_try = min(h, max_step, t_target - t)
                if h_try < h_min:
                    return STEP_UNDERFLOW, -1, t
                _rhs(y, p, d1, d2, k1)
                _rk45_attempt(y, p, h_try, d1, d2, k1, work, y_new, err_vec, stages)
                # weighted RMS error over the state components
                acc = 0.0
                for i in range(8):
                    scale = abs_tol + rel_tol * max(abs(y[i]), abs(y_new[i]))
                    r = err_vec[i] / scale
                    acc += r * r
                norm = np.sqrt(acc / 8.0)
                finite = True
                for i in range(8):
                    if not np.isfinite(y_new[i]):
                        finite = False
                        break
                if not finite:
                    h = h_try * MIN_FACTOR
                    continue
                if norm <= 1.0:
                    t = t + h_try
                    for i in range(8):
                        y[i] = y_new[i]
                    if norm == 0.0:
                        factor = MAX_FACTOR
                    else:
                        factor = SAFETY * norm ** ERR_EXPONENT
                        if factor > MAX_FACTOR:
                            factor = MAX_FACTOR
                        elif factor < MIN_FACTOR:
                            factor = MIN_FACTOR
                    h = h_try * factor
                else:
                    factor = SAFETY * norm ** ERR_EXPONENT
                    if factor < MIN_FACTOR:
                        factor = MIN_FACTOR
                    h = h_try * factor
            else:
                h_try = min(max_step, t_target - t)
                _rhs(y, p, d1, d2, k1)
                # classic RK4 with the stage buffers
                for i in range(8):
                    work[i] = y[i] + 0.5 * h_try * k1[i]
                _rhs(work, p, d1, d2, stages[0])
                for i in range(8):
                    work[i] = y[i] + 0.5 * h_try * stages[0, i]
                _rhs(work, p, d1, d2, stages[1])
                for i in range(8):
                    work[i] = y[i] + h_try * stages[1, i]
                _rhs(work, p, d1, d2, stages[2])
                for i in range(8):
                    y[i] = y[i] + (h_try / 6.0) * (k1[i] + 2.0 * stages[0, i]
                                                   + 2.0 * stages[1, i] + stages[2, i])
                t = t + h_try
                for i in range(8):
                    if not np.isfinite(y[i]):
                        return NON_FINITE, i, t
        t = t_target
        for i in range(8):
            if not np.isfinite(y[i]):
                return NON_FINITE, i, t
        states[kout] = y
        _record(y, p, d1, d2, extras[kout])
    return OK, -1, t_end
