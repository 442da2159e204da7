"""Rigid-body model tests.

The core checks rebuild each derivative component from the public force
model and controller pieces and require the packed kernel to match, and
verify the mirror cancellation that makes the counter-rotating pair
sideways-neutral.
"""

import math

import numpy as np
import pytest

from bucketwheel import (
    ControlOutput,
    DisturbanceModel,
    ExcavatorParams,
    ExcavatorState,
    SoilProperties,
    WheelConfig,
    cut_state_from_plunge,
    derivatives,
    reaction_torque,
    sample_disturbance,
    total_resistive_force,
)

ZERO_CONTROLS = ControlOutput(hold_force_1=0.0, hold_force_2=0.0,
                              torque_1=0.0, torque_2=0.0)


def test_state_array_round_trip():
    state = ExcavatorState(x=1.0, y=-2.0, vx=3.0, vy=-4.0,
                           theta1=5.0, omega1=-6.0, theta2=7.0, omega2=-8.0)
    arr = state.as_array()
    assert arr.shape == (8,)
    assert ExcavatorState.from_array(arr) == state


def test_wheel_defaults():
    wheel = WheelConfig()
    assert wheel.inertia == 0.5 * wheel.wheel_mass * (0.5 * wheel.diameter) ** 2
    assert math.isclose(wheel.inertia, 0.2418025, rel_tol=1e-12)
    assert math.isclose(wheel.bucket_pitch, 2.0 * math.pi / 24.0, rel_tol=1e-15)

    params = ExcavatorParams()
    assert params.total_mass == 10.0
    assert params.wheel_2.rake_angle == -params.wheel_1.rake_angle


def test_wheel_validation():
    with pytest.raises(ValueError, match="diameter"):
        WheelConfig(diameter=0.0)
    with pytest.raises(ValueError, match="rake_angle"):
        WheelConfig(rake_angle=0.0)
    with pytest.raises(ValueError, match="rake_angle"):
        WheelConfig(rake_angle=math.pi / 2)
    with pytest.raises(ValueError, match="n_buckets"):
        WheelConfig(n_buckets=0)
    with pytest.raises(ValueError, match="inertia"):
        WheelConfig(inertia=-0.1)
    with pytest.raises(ValueError, match="engagement_factor"):
        WheelConfig(engagement_factor=0.0)
    with pytest.raises(ValueError, match="chassis_mass"):
        ExcavatorParams(chassis_mass=-1.0)


def test_reaction_torque():
    """100 N of resistance on the stock 0.622 m wheel reacts with 31.1 N m."""
    assert math.isclose(reaction_torque(0.5, 0.622, 100.0), -31.1, rel_tol=1e-12)
    assert math.isclose(reaction_torque(-0.5, 0.622, 100.0), 31.1, rel_tol=1e-12)
    assert reaction_torque(0.0, 0.622, 100.0) == 0.0
    assert reaction_torque(0.5, 0.622, 0.0) == 0.0
    with pytest.raises(ValueError, match="f_reg"):
        reaction_torque(0.5, 0.622, -1.0)


def test_disturbance_uniform_stats():
    """Increments are uniform on [0, F/2]: bounded, mean F/4."""
    rng = np.random.default_rng(123)
    samples = np.array([sample_disturbance(rng, 100.0) for _ in range(100_000)])
    assert samples.min() >= 0.0
    assert samples.max() <= 50.0
    assert abs(samples.mean() - 25.0) < 0.5
    # uniform variance is (b-a)^2/12
    assert abs(samples.var() - 2500.0 / 12.0) < 5.0


def test_disturbance_disabled_and_zero_force():
    assert DisturbanceModel().make_rng() is None
    assert DisturbanceModel(enabled=True, seed=5).make_rng() is not None
    assert sample_disturbance(None, 100.0) == 0.0
    rng = np.random.default_rng(0)
    assert sample_disturbance(rng, 0.0) == 0.0
    with pytest.raises(ValueError, match="f_reg"):
        sample_disturbance(rng, -1.0)


def test_disturbance_deterministic():
    a = DisturbanceModel(enabled=True, seed=99).make_rng()
    b = DisturbanceModel(enabled=True, seed=99).make_rng()
    seq_a = [sample_disturbance(a, 10.0) for _ in range(50)]
    seq_b = [sample_disturbance(b, 10.0) for _ in range(50)]
    assert seq_a == seq_b


def test_mirror_symmetry_cancels_lateral_force():
    """A mirrored pair tracking opposite spins produces exactly zero x force.

    The two horizontal components are the same magnitude with opposite sign,
    so their float sum is exactly 0.0, not merely small.
    """
    params = ExcavatorParams()
    rng = np.random.default_rng(2026)
    for _ in range(20):
        y = rng.uniform(-0.05, 0.0)
        theta = rng.uniform(0.0, 6.0)
        omega = rng.uniform(0.05, 1.0)
        state = ExcavatorState(x=0.0, y=y, vx=0.0, vy=rng.uniform(-0.01, 0.01),
                               theta1=theta, omega1=omega,
                               theta2=-theta, omega2=-omega)
        dot = derivatives(state, params, ZERO_CONTROLS)
        assert dot[2] == 0.0, f"lateral force leaked: {dot[2]}"
        assert dot[5] == -dot[7], "wheel accelerations lost mirror symmetry"


def test_derivatives_match_public_force_model():
    """Rebuild every component from the public pieces and compare."""
    params = ExcavatorParams()
    soil = params.soil
    state = ExcavatorState(x=0.004, y=-0.01, vx=0.002, vy=-0.003,
                           theta1=0.3, omega1=0.4, theta2=-0.5, omega2=-0.35)
    controls = ControlOutput(hold_force_1=0.02, hold_force_2=0.03,
                             torque_1=5.0, torque_2=-4.0)
    dist = (0.1, 0.2)
    dot = derivatives(state, params, controls, dist)

    f1 = total_resistive_force(
        soil, cut_state_from_plunge(state.y, params.wheel_1, state.omega1)).f_total
    f1 = params.wheel_1.engagement_factor * f1 + dist[0]
    f2 = total_resistive_force(
        soil, cut_state_from_plunge(state.y, params.wheel_2, state.omega2)).f_total
    f2 = params.wheel_2.engagement_factor * f2 + dist[1]

    # resistance direction: rake magnitude plus the engaged bucket's offset
    phi1 = abs(params.wheel_1.rake_angle) + (abs(state.theta1) % params.wheel_1.bucket_pitch)
    phi2 = abs(params.wheel_2.rake_angle) + (abs(state.theta2) % params.wheel_2.bucket_pitch)

    m = params.total_mass
    assert dot[0] == state.vx
    assert dot[1] == state.vy
    ax = (-f1 * math.sin(phi1) + f2 * math.sin(phi2)) / m
    ay = ((f1 * math.cos(phi1) + f2 * math.cos(phi2)) / m - soil.gravity
          - (controls.hold_force_1 + controls.hold_force_2) / m)
    assert math.isclose(dot[2], ax, rel_tol=1e-12), f"{dot[2]} vs {ax}"
    assert math.isclose(dot[3], ay, rel_tol=1e-12), f"{dot[3]} vs {ay}"

    r = 0.5 * params.wheel_1.diameter
    alpha1 = (controls.torque_1 + reaction_torque(state.omega1, 2 * r, f1)) \
        / params.wheel_1.inertia
    alpha2 = (controls.torque_2 + reaction_torque(state.omega2, 2 * r, f2)) \
        / params.wheel_2.inertia
    assert dot[4] == state.omega1
    assert math.isclose(dot[5], alpha1, rel_tol=1e-12)
    assert dot[6] == state.omega2
    assert math.isclose(dot[7], alpha2, rel_tol=1e-12)


def test_airborne_machine_feels_only_gravity():
    params = ExcavatorParams()
    state = ExcavatorState(y=0.02, vy=0.001, omega1=0.3, omega2=-0.3)
    dot = derivatives(state, params, ZERO_CONTROLS)
    assert dot[2] == 0.0
    assert dot[3] == -params.soil.gravity
    assert dot[5] == 0.0 and dot[7] == 0.0


def test_hold_force_enters_vertical_equation():
    params = ExcavatorParams()
    state = ExcavatorState(y=0.02)
    held = derivatives(state, params, ControlOutput(0.5, 0.5, 0.0, 0.0))
    free = derivatives(state, params, ZERO_CONTROLS)
    assert math.isclose(held[3] - free[3], -1.0 / params.total_mass, rel_tol=1e-12)


def test_engagement_factor_scales_resistance():
    base = ExcavatorParams()
    double = ExcavatorParams(
        wheel_1=WheelConfig(engagement_factor=2.0),
        wheel_2=WheelConfig(rake_angle=-base.wheel_1.rake_angle, engagement_factor=2.0))
    state = ExcavatorState(y=-0.01, omega1=0.4, omega2=-0.4)
    dot_1 = derivatives(state, base, ZERO_CONTROLS)
    dot_2 = derivatives(state, double, ZERO_CONTROLS)
    lift_1 = dot_1[3] + base.soil.gravity
    lift_2 = dot_2[3] + base.soil.gravity
    assert math.isclose(lift_2, 2.0 * lift_1, rel_tol=1e-12)


def test_max_cut_depth_clamps_resistance():
    params = ExcavatorParams()
    shallow = ExcavatorState(y=-params.wheel_1.max_cut_depth, omega1=0.4, omega2=-0.4)
    deep = ExcavatorState(y=-1.0, omega1=0.4, omega2=-0.4)
    dot_shallow = derivatives(shallow, params, ZERO_CONTROLS)
    dot_deep = derivatives(deep, params, ZERO_CONTROLS)
    assert dot_deep[3] == dot_shallow[3], "resistance kept growing past the clamp"


def test_non_finite_inputs_are_named():
    params = ExcavatorParams()
    state = ExcavatorState()
    with pytest.raises(ValueError, match="torque_1"):
        derivatives(state, params, ControlOutput(0.0, 0.0, math.inf, 0.0))
    with pytest.raises(ValueError, match="'vy'"):
        derivatives(ExcavatorState(vy=math.nan), params, ZERO_CONTROLS)
    with pytest.raises(ValueError, match="disturbance"):
        derivatives(state, params, ZERO_CONTROLS, (0.0, -1.0))
