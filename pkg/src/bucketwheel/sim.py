"""Scenario-level simulation: run, summarize, sweep.

A Scenario bundles machine parameters, controller gains, the disturbance
model and integrator settings.  ``run`` propagates it and returns a
Trajectory sampled on the uniform output grid; ``summarize`` reduces a
Trajectory to the scalar metrics used for acceptance checks and gain tuning;
``monte_carlo`` repeats a scenario across disturbance seeds.

Runs are deterministic: a scenario and seed fix every sampled disturbance,
so repeated runs (and their CSV exports) are identical byte for byte.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from ._engine import (
    EX_DIST1,
    EX_F1,
    EX_FC1,
    EX_FC2,
    EX_FR1,
    EX_FS1,
    EX_FS2,
    EX_TAU1,
    N_EXTRAS,
    NON_FINITE,
    OK,
    STEP_UNDERFLOW,
    _propagate,
)
from .control import ControlOutput, Gains
from .dynamics import (
    STATE_NAMES,
    DisturbanceModel,
    ExcavatorParams,
    ExcavatorState,
    pack_params,
)
from .integrator import IntegrationError, IntegratorConfig
from .regolith import ForceBreakdown

__all__ = [
    "Scenario",
    "Trajectory",
    "RunSummary",
    "MonteCarloResult",
    "run",
    "summarize",
    "monte_carlo",
    "ESCAPE_SPEED",
]

ESCAPE_SPEED = 11.1        # m/s, Phobos escape speed used for the safety margin
SETTLE_BAND = 0.05         # wheel speed considered settled within 5% of setpoint
LIFTOFF_HEIGHT = 1e-3      # m, height that counts as leaving the surface
LIFTOFF_HOLD = 0.5         # s, how long above LIFTOFF_HEIGHT counts as liftoff

CSV_HEADER = "t,x,y,vx,vy,theta1,omega1,theta2,omega2,Fr1,Fr2,F1,F2,tau1,tau2,dist1,dist2"


@dataclass(frozen=True)
class Scenario:
    """Everything needed to reproduce one run (except the sweep seed)."""

    params: ExcavatorParams = field(default_factory=ExcavatorParams)
    gains: Gains = field(default_factory=Gains)
    disturbance: DisturbanceModel = field(default_factory=DisturbanceModel)
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    initial_state: ExcavatorState = field(default_factory=ExcavatorState)

    def with_seed(self, seed: int) -> "Scenario":
        return replace(self, disturbance=replace(self.disturbance, seed=seed))


@dataclass(frozen=True)
class Trajectory:
    """Sampled run history on the uniform output grid.

    ``states`` columns follow STATE_NAMES.  ``resistance`` is the per-wheel
    cutting force actually applied in the equations of motion (disturbance
    included); ``f_sand``/``f_clay`` give its model split (disturbance
    excluded); ``hold_forces`` and ``torques`` the controller outputs; and
    ``disturbances`` the increment in effect during the step that produced
    each sample (zero at t = 0).
    """

    times: np.ndarray         # (n,)
    states: np.ndarray        # (n, 8)
    resistance: np.ndarray    # (n, 2)
    f_sand: np.ndarray        # (n, 2)
    f_clay: np.ndarray        # (n, 2)
    hold_forces: np.ndarray   # (n, 2)
    torques: np.ndarray       # (n, 2)
    disturbances: np.ndarray  # (n, 2)

    def __len__(self) -> int:
        return self.times.shape[0]

    def state_at(self, k: int) -> ExcavatorState:
        return ExcavatorState.from_array(self.states[k])

    def control_at(self, k: int) -> ControlOutput:
        return ControlOutput(hold_force_1=float(self.hold_forces[k, 0]),
                             hold_force_2=float(self.hold_forces[k, 1]),
                             torque_1=float(self.torques[k, 0]),
                             torque_2=float(self.torques[k, 1]))

    def force_breakdown(self, k: int, wheel: int) -> ForceBreakdown:
        """Model resistance split of wheel 1 or 2 at sample k."""
        if wheel not in (1, 2):
            raise ValueError(f"wheel must be 1 or 2, got {wheel}")
        j = wheel - 1
        fs = float(self.f_sand[k, j])
        fc = float(self.f_clay[k, j])
        return ForceBreakdown(f_sand=fs, f_clay=fc, f_total=fs + fc)

    def to_csv(self, path) -> None:
        """Write the trajectory with full double precision (17 significant digits)."""
        cols = np.column_stack([
            self.times,
            self.states,
            self.resistance,
            self.hold_forces,
            self.torques,
            self.disturbances,
        ])
        with open(path, "w", newline="\n") as fh:
            fh.write(CSV_HEADER + "\n")
            for row in cols:
                fh.write(",".join("%.17g" % v for v in row) + "\n")


@dataclass(frozen=True)
class RunSummary:
    """Scalar metrics of one run."""

    max_abs_x: float         # m
    min_y: float             # m
    max_y: float             # m
    settle_time_omega: float  # s; inf if the wheels never settle
    max_speed: float         # m/s, translational
    liftoff: bool
    escape_margin: float     # max_speed / ESCAPE_SPEED
    mean_abs_torque: float   # N m, mean of |tau1| + |tau2| over samples
    effort: float            # mean_abs_torque / (k_1 * setpoint); raw mean if 0


def run(scenario: Scenario) -> Trajectory:
    """Propagate a scenario over its full horizon.

    Raises IntegrationError (with completed samples attached) if the state
    goes non-finite or the adaptive step underflows.
    """
    cfg = scenario.integrator
    p = pack_params(scenario.params, scenario.gains)
    n_out = cfg.n_samples
    states = np.empty((n_out, 8))
    extras = np.empty((n_out, N_EXTRAS))
    y0 = scenario.initial_state.as_array()

    rng = np.random.default_rng(scenario.disturbance.seed)
    if cfg.method == "rk4":
        use_rk45 = False
        max_step = cfg.max_step
    else:
        use_rk45 = True
        max_step = cfg.max_step

    status, fail_idx, t_reached = _propagate(
        y0, p, use_rk45, cfg.t_end, cfg.output_step, cfg.rel_tol, cfg.abs_tol,
        max_step, scenario.disturbance.enabled, rng, states, extras)

    if status != OK:
        k_done = int(t_reached / cfg.output_step)
        times = np.array([k * cfg.output_step for k in range(min(k_done + 1, n_out))])
        partial = states[:len(times)].copy()
        if status == NON_FINITE:
            name = STATE_NAMES[fail_idx] if fail_idx >= 0 else "state"
            raise IntegrationError(
                f"non-finite state component {name!r} at t = {t_reached:.6g} s",
                times, partial)
        raise IntegrationError(
            f"step size underflow at t = {t_reached:.6g} s", times, partial)

    times = np.array([k * cfg.output_step for k in range(n_out)])
    return Trajectory(
        times=times,
        states=states,
        resistance=extras[:, EX_FR1:EX_FR1 + 2].copy(),
        f_sand=extras[:, [EX_FS1, EX_FS2]].copy(),
        f_clay=extras[:, [EX_FC1, EX_FC2]].copy(),
        hold_forces=extras[:, EX_F1:EX_F1 + 2].copy(),
        torques=extras[:, EX_TAU1:EX_TAU1 + 2].copy(),
        disturbances=extras[:, EX_DIST1:EX_DIST1 + 2].copy(),
    )


def settle_time(times: np.ndarray, omega1: np.ndarray, omega2: np.ndarray,
                setpoint: float, band: float = SETTLE_BAND) -> float:
    """First grid time after which both wheels stay within the band forever."""
    tol = band * setpoint
    ok = (np.abs(omega1 - setpoint) <= tol) & (np.abs(omega2 + setpoint) <= tol)
    if not ok[-1]:
        return math.inf
    # walk backwards to the start of the final settled stretch
    idx = len(ok) - 1
    while idx > 0 and ok[idx - 1]:
        idx -= 1
    return float(times[idx])


def _liftoff(times: np.ndarray, y: np.ndarray,
             height: float = LIFTOFF_HEIGHT, hold: float = LIFTOFF_HOLD) -> bool:
    """True if y stays above ``height`` for longer than ``hold`` seconds."""
    above = y > height
    start = None
    for k in range(len(times)):
        if above[k]:
            if start is None:
                start = times[k]
            elif times[k] - start > hold:
                return True
        else:
            start = None
    return False


def summarize(trajectory: Trajectory, gains: Gains) -> RunSummary:
    """Reduce a trajectory to its scalar metrics.

    Pure function of the stored arrays: re-running it on a saved trajectory
    reproduces the summary exactly.
    """
    x = trajectory.states[:, 0]
    y = trajectory.states[:, 1]
    vx = trajectory.states[:, 2]
    vy = trajectory.states[:, 3]
    speed = np.sqrt(vx * vx + vy * vy)
    mean_abs_torque = float(np.mean(np.abs(trajectory.torques[:, 0])
                                    + np.abs(trajectory.torques[:, 1])))
    torque_scale = gains.k_1 * gains.wheel_speed_setpoint
    effort = mean_abs_torque / torque_scale if torque_scale > 0.0 else mean_abs_torque
    max_speed = float(np.max(speed))
    return RunSummary(
        max_abs_x=float(np.max(np.abs(x))),
        min_y=float(np.min(y)),
        max_y=float(np.max(y)),
        settle_time_omega=settle_time(trajectory.times,
                                      trajectory.states[:, 5], trajectory.states[:, 7],
                                      gains.wheel_speed_setpoint),
        max_speed=max_speed,
        liftoff=_liftoff(trajectory.times, y),
        escape_margin=max_speed / ESCAPE_SPEED,
        mean_abs_torque=mean_abs_torque,
        effort=effort,
    )


@dataclass(frozen=True)
class MonteCarloResult:
    """Seed sweep outcome: per-seed summaries plus aggregate statistics."""

    seeds: list[int]
    summaries: list[RunSummary | None]  # None where the run failed
    errors: list[str | None]            # failure messages, aligned with seeds
    stats: dict[str, tuple[float, float, float]]  # metric -> (min, mean, max)
    liftoff_frequency: float

    @property
    def n_failed(self) -> int:
        return sum(1 for e in self.errors if e is not None)


_MC_METRICS = ("max_abs_x", "min_y", "max_y", "settle_time_omega",
               "max_speed", "escape_margin", "mean_abs_torque", "effort")


def monte_carlo(scenario: Scenario, n_runs: int, base_seed: int = 0) -> MonteCarloResult:
    """Run the scenario under seeds base_seed .. base_seed + n_runs - 1.

    Individual run failures are recorded, not fatal.  Runs execute in seed
    order, so the result is deterministic.
    """
    if n_runs < 1:
        raise ValueError(f"n_runs must be >= 1, got {n_runs}")
    seeds = list(range(base_seed, base_seed + n_runs))
    summaries: list[RunSummary | None] = []
    errors: list[str | None] = []
    for seed in seeds:
        try:
            traj = run(scenario.with_seed(seed))
        except IntegrationError as exc:
            summaries.append(None)
            errors.append(str(exc))
            continue
        summaries.append(summarize(traj, scenario.gains))
        errors.append(None)

    good = [s for s in summaries if s is not None]
    stats: dict[str, tuple[float, float, float]] = {}
    for metric in _MC_METRICS:
        values = [getattr(s, metric) for s in good]
        if values:
            lo, hi = min(values), max(values)
            # summation roundoff can push the float mean an ulp outside
            # [lo, hi]; the true mean cannot be there, so clamp it back
            mean = min(max(float(np.mean(values)), lo), hi)
            stats[metric] = (lo, mean, hi)
        else:
            stats[metric] = (math.nan, math.nan, math.nan)
    liftoff_frequency = (sum(1 for s in good if s.liftoff) / len(good)) if good else math.nan
    return MonteCarloResult(seeds=seeds, summaries=summaries, errors=errors,
                            stats=stats, liftoff_frequency=liftoff_frequency)
