"""Deterministic simulator for a dual counter-rotating bucket-wheel excavator
digging in milligravity regolith.

The package layers cleanly: :mod:`bucketwheel.regolith` gives the static
cutting-resistance model, :mod:`bucketwheel.control` the PD laws,
:mod:`bucketwheel.dynamics` the planar equations of motion,
:mod:`bucketwheel.integrator` the fixed and adaptive Runge-Kutta schemes, and
:mod:`bucketwheel.sim` ties them into reproducible closed-loop runs.  On top
sit :mod:`bucketwheel.tuning` (rollout-based gain search),
:mod:`bucketwheel.isru` (water yield and heating power arithmetic),
:mod:`bucketwheel.config` (TOML scenarios), and :mod:`bucketwheel.cli`.

Quick start::

    from bucketwheel import Scenario, run, summarize

    scenario = Scenario()
    trajectory = run(scenario)
    print(summarize(trajectory, scenario.gains))
"""

from .config import (
    ConfigError,
    default_config_path,
    default_scenario,
    load_scenario,
    load_tuning_spec,
    loads_scenario,
    loads_tuning_spec,
    write_gains,
)
from .control import (
    RPM_TO_RAD_S,
    ControlOutput,
    Gains,
    control_output,
    split_vertical_force,
    vertical_hold_force,
    wheel_torques,
)
from .dynamics import (
    STATE_NAMES,
    DisturbanceModel,
    ExcavatorParams,
    ExcavatorState,
    WheelConfig,
    derivatives,
    reaction_torque,
    sample_disturbance,
)
from .integrator import (
    IntegrationError,
    IntegratorConfig,
    integrate,
    rk4_step,
    rk45_step,
)
from .isru import (
    POWER_BUDGET,
    IsruReport,
    heating_energy_per_kg,
    power_check,
    report_csv,
    report_text,
    water_yield,
)
from .regolith import (
    CutState,
    ForceBreakdown,
    SoilProperties,
    clay_force,
    cut_state_from_plunge,
    sand_force,
    total_resistive_force,
)
from .sim import (
    ESCAPE_SPEED,
    MonteCarloResult,
    RunSummary,
    Scenario,
    Trajectory,
    monte_carlo,
    run,
    summarize,
)
from .tuning import (
    CostWeights,
    TraceEntry,
    TuningError,
    TuningResult,
    TuningSpec,
    cost,
    tune,
    write_trace,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # regolith
    "SoilProperties", "CutState", "ForceBreakdown",
    "sand_force", "clay_force", "total_resistive_force", "cut_state_from_plunge",
    # control
    "Gains", "ControlOutput", "RPM_TO_RAD_S",
    "vertical_hold_force", "split_vertical_force", "wheel_torques", "control_output",
    # dynamics
    "WheelConfig", "ExcavatorParams", "ExcavatorState", "DisturbanceModel",
    "STATE_NAMES", "derivatives", "reaction_torque", "sample_disturbance",
    # integrator
    "IntegratorConfig", "IntegrationError", "integrate", "rk4_step", "rk45_step",
    # sim
    "Scenario", "Trajectory", "RunSummary", "MonteCarloResult",
    "ESCAPE_SPEED", "run", "summarize", "monte_carlo",
    # tuning
    "TuningSpec", "CostWeights", "TuningResult", "TraceEntry", "TuningError",
    "cost", "tune", "write_trace",
    # isru
    "IsruReport", "POWER_BUDGET", "heating_energy_per_kg", "water_yield",
    "power_check", "report_text", "report_csv",
    # config
    "ConfigError", "default_scenario", "default_config_path",
    "load_scenario", "loads_scenario", "load_tuning_spec", "loads_tuning_spec",
    "write_gains",
]
