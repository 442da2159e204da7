"""Simulation-driven gain tuning.

Candidate gains are scored by rolling out the closed loop over a short
horizon and reducing the run to a scalar cost: a weighted sum of horizontal
drift, wheel settling time, a large liftoff penalty, and normalized control
effort.  Two derivative-free searches are provided:

* ``grid``: exhaustive evaluation of a log-spaced lattice over the bounds,
* ``pattern``: compass search in log10(gain) space with step halving.

Both are deterministic: rollouts reuse the scenario's disturbance seed and
ties resolve to the first candidate in iteration order (dimensions ordered
by gain name).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from itertools import product

import numpy as np

from .control import Gains
from .integrator import IntegrationError
from .sim import RunSummary, Scenario, run, summarize

__all__ = [
    "CostWeights",
    "TuningSpec",
    "TraceEntry",
    "TuningResult",
    "TuningError",
    "cost",
    "tune",
    "write_trace",
]

LIFTOFF_PENALTY = 1e6
# pattern search stops when every step drops below this fraction of its range
MIN_STEP_FRACTION = 1e-3

_GAIN_NAMES = tuple(sorted(f.name for f in fields(Gains)))


class TuningError(RuntimeError):
    """Every rollout failed; carries the per-candidate failure log."""

    def __init__(self, message: str, failures: list[str]):
        super().__init__(message)
        self.failures = failures


@dataclass(frozen=True)
class CostWeights:
    drift: float = 1.0     # weight on max |x|
    settle: float = 0.1    # weight on wheel settle time
    liftoff: float = 1.0   # weight on the liftoff penalty
    effort: float = 0.01   # weight on normalized mean torque

    def __post_init__(self) -> None:
        for f in fields(self):
            if getattr(self, f.name) < 0.0:
                raise ValueError(f"weight {f.name} must be >= 0")


@dataclass(frozen=True)
class TuningSpec:
    """Search space and budget for one tuning job.

    ``bounds`` maps gain names (fields of Gains) to (low, high); gains not
    listed stay at their scenario values.  ``budget`` caps the number of
    rollouts.  Rollouts run over ``eval_horizon`` seconds regardless of the
    scenario's own horizon.
    """

    bounds: dict[str, tuple[float, float]]
    weights: CostWeights = field(default_factory=CostWeights)
    budget: int = 27
    method: str = "grid"
    eval_horizon: float = 20.0  # s

    def __post_init__(self) -> None:
        if not self.bounds:
            raise ValueError("bounds must name at least one gain")
        for name, (low, high) in self.bounds.items():
            if name not in _GAIN_NAMES:
                raise ValueError(f"unknown gain {name!r}; expected one of {_GAIN_NAMES}")
            if not (0.0 < low < high):
                raise ValueError(f"bounds for {name} must satisfy 0 < low < high, got ({low}, {high})")
        if self.budget < 1:
            raise ValueError(f"budget must be >= 1, got {self.budget}")
        if self.method not in ("grid", "pattern"):
            raise ValueError(f"method must be 'grid' or 'pattern', got {self.method!r}")
        if not (self.eval_horizon > 0.0):
            raise ValueError(f"eval_horizon must be > 0, got {self.eval_horizon}")


@dataclass(frozen=True)
class TraceEntry:
    iteration: int
    gains: Gains
    cost: float
    best_cost: float  # best seen up to and including this evaluation


@dataclass(frozen=True)
class TuningResult:
    best_gains: Gains
    best_cost: float
    trace: list[TraceEntry]
    n_rollouts: int


def cost(summary: RunSummary, weights: CostWeights, eval_horizon: float) -> float:
    """Scalar cost of one rollout; lower is better.

    A run that never settles is charged the full evaluation horizon, and a
    liftoff dominates everything else via a 1e6 penalty.
    """
    settle = summary.settle_time_omega
    if not math.isfinite(settle):
        settle = eval_horizon
    return (weights.drift * summary.max_abs_x
            + weights.settle * settle
            + weights.liftoff * LIFTOFF_PENALTY * (1.0 if summary.liftoff else 0.0)
            + weights.effort * summary.effort)


def _rollout_scenario(scenario: Scenario, spec: TuningSpec) -> Scenario:
    cfg = scenario.integrator
    n = spec.eval_horizon / cfg.output_step
    if abs(n - round(n)) > 1e-9 * max(1.0, n):
        raise ValueError(
            f"eval_horizon {spec.eval_horizon} must be a multiple of output_step {cfg.output_step}")
    return replace(scenario, integrator=replace(cfg, t_end=spec.eval_horizon))


def _evaluate(base: Scenario, spec: TuningSpec, gains: Gains) -> tuple[float, str | None]:
    candidate = replace(base, gains=gains)
    try:
        traj = run(candidate)
    except IntegrationError as exc:
        return math.inf, str(exc)
    return cost(summarize(traj, gains), spec.weights, spec.eval_horizon), None


def _clip(value: float, low: float, high: float) -> float:
    return min(max(value, low), high)


def _grid_axes(spec: TuningSpec, start: Gains) -> list[tuple[str, np.ndarray]]:
    """Per-dimension lattice points: log-spaced, sized to fit the budget.

    With n points per dimension and k dimensions the lattice costs n**k
    rollouts, so n is the largest integer with n**k <= budget.  A single-
    point dimension keeps the scenario's own gain (clipped into bounds).
    """
    names = sorted(spec.bounds)
    k = len(names)
    n = max(1, int(math.floor(spec.budget ** (1.0 / k) + 1e-12)))
    axes = []
    for name in names:
        low, high = spec.bounds[name]
        if n == 1:
            points = np.array([_clip(getattr(start, name), low, high)])
        else:
            points = np.geomspace(low, high, n)
        axes.append((name, points))
    return axes


def tune(scenario: Scenario, spec: TuningSpec) -> TuningResult:
    """Search the bounded gain space for the lowest rollout cost.

    Never returns gains outside the declared bounds.  Raises TuningError if
    every rollout failed.
    """
    base = _rollout_scenario(scenario, spec)
    start = scenario.gains
    trace: list[TraceEntry] = []
    failures: list[str] = []
    best_gains: Gains | None = None
    best_cost = math.inf
    n_rollouts = 0
    cache: dict[tuple, float] = {}

    def evaluate(gains: Gains) -> float:
        nonlocal best_gains, best_cost, n_rollouts
        key = tuple(getattr(gains, name) for name in _GAIN_NAMES)
        if key in cache:
            return cache[key]
        value, error = _evaluate(base, spec, gains)
        n_rollouts += 1
        cache[key] = value
        if error is not None:
            failures.append(f"{key}: {error}")
        if value < best_cost:
            best_cost = value
            best_gains = gains
        trace.append(TraceEntry(iteration=len(trace), gains=gains,
                                cost=value, best_cost=best_cost))
        return value

    if spec.method == "grid":
        axes = _grid_axes(spec, start)
        names = [name for name, _ in axes]
        for combo in product(*(points for _, points in axes)):
            if n_rollouts >= spec.budget:
                break
            evaluate(replace(start, **{n: float(v) for n, v in zip(names, combo)}))
    else:
        names = sorted(spec.bounds)
        log_low = {n: math.log10(spec.bounds[n][0]) for n in names}
        log_high = {n: math.log10(spec.bounds[n][1]) for n in names}
        center = {n: _clip(math.log10(getattr(start, n)), log_low[n], log_high[n])
                  for n in names}
        step = {n: 0.25 * (log_high[n] - log_low[n]) for n in names}

        def to_gains(point: dict[str, float]) -> Gains:
            # 10**log10(bound) can overshoot the bound by an ulp; clip again
            # in linear space so no candidate ever leaves the box.
            return replace(start, **{
                n: _clip(10.0 ** point[n], spec.bounds[n][0], spec.bounds[n][1])
                for n in names})

        center_cost = evaluate(to_gains(center))
        while n_rollouts < spec.budget:
            if all(step[n] < MIN_STEP_FRACTION * (log_high[n] - log_low[n]) for n in names):
                break
            best_poll: tuple[float, dict[str, float]] | None = None
            for name in names:
                for sign in (+1.0, -1.0):
                    if n_rollouts >= spec.budget:
                        break
                    point = dict(center)
                    point[name] = _clip(point[name] + sign * step[name],
                                        log_low[name], log_high[name])
                    if point[name] == center[name]:
                        continue  # poll collapsed onto the center by clipping
                    value = evaluate(to_gains(point))
                    if value < center_cost and (best_poll is None or value < best_poll[0]):
                        best_poll = (value, point)
            if best_poll is not None:
                center_cost, center = best_poll
            else:
                for name in names:
                    step[name] *= 0.5

    if best_gains is None or not math.isfinite(best_cost):
        raise TuningError("all rollouts failed", failures)
    return TuningResult(best_gains=best_gains, best_cost=best_cost,
                        trace=trace, n_rollouts=n_rollouts)


TRACE_HEADER = ("iteration," + ",".join(_GAIN_NAMES) + ",cost,best_cost")


def write_trace(path, trace: list[TraceEntry]) -> None:
    """Write the evaluation trace as CSV, one row per rollout."""
    with open(path, "w", newline="\n") as fh:
        fh.write(TRACE_HEADER + "\n")
        for entry in trace:
            values = [getattr(entry.gains, name) for name in _GAIN_NAMES]
            fh.write("%d," % entry.iteration
                     + ",".join("%.17g" % v for v in values)
                     + ",%.17g,%.17g\n" % (entry.cost, entry.best_cost))
