"""Integrator tests: hand-checked steps, convergence order, adaptive accuracy.

The RK4 single step on exponential decay has a pencil-and-paper value; the
convergence study must recover fourth order; and the adaptive pair is held
against a 50-digit matrix-exponential solution of a damped oscillator.
"""

import math

import mpmath as mp
import numpy as np
import pytest

from bucketwheel import (
    IntegrationError,
    IntegratorConfig,
    integrate,
    rk4_step,
    rk45_step,
)

mp.mp.dps = 50


def _decay(t, y):
    return -y


def test_rk4_single_step_hand_value():
    """One RK4 step of y' = -y from 1 with h = 0.1.

    The stage sums give exactly the quartic Taylor value 0.9048375
    (the true solution is e^-0.1 = 0.90483741...).
    """
    y1 = rk4_step(_decay, 0.0, np.array([1.0]), 0.1)
    assert math.isclose(y1[0], 0.9048375, rel_tol=1e-15)
    assert abs(y1[0] - math.exp(-0.1)) < 1e-7


def test_rk4_convergence_order():
    """Global error on y' = -y over [0, 1] should shrink as h^4."""
    errors = []
    steps = [0.1, 0.05, 0.025]
    for h in steps:
        config = IntegratorConfig(method="rk4", t_end=1.0, output_step=0.5,
                                  max_step=h)
        _, states = integrate(_decay, np.array([1.0]), config)
        errors.append(abs(states[-1, 0] - math.exp(-1.0)))
    order_a = math.log2(errors[0] / errors[1])
    order_b = math.log2(errors[1] / errors[2])
    assert order_a > 3.7, f"observed order {order_a}, errors {errors}"
    assert order_b > 3.7, f"observed order {order_b}, errors {errors}"


def test_rk45_embedded_error_estimate():
    """The embedded difference should track the actual local error."""
    y5, err = rk45_step(_decay, 0.0, np.array([1.0]), 0.1)
    actual = abs(y5[0] - math.exp(-0.1))
    assert actual < 1e-9
    assert abs(err[0]) < 1e-6
    assert abs(err[0]) > actual / 100.0, \
        "error estimate implausibly small against the actual error"


def test_rk45_against_matrix_exponential():
    """Damped oscillator vs a 50-digit expm reference."""
    a = np.array([[0.0, 1.0], [-4.0, -0.1]])

    def f(t, y):
        return a @ y

    config = IntegratorConfig(method="rk45", t_end=10.0, output_step=1.0,
                              rel_tol=1e-10, abs_tol=1e-13)
    times, states = integrate(f, np.array([1.0, 0.0]), config)

    a_mp = mp.matrix([[0.0, 1.0], [-4.0, -0.1]])
    for k, t in enumerate(times):
        ref = mp.expm(a_mp * mp.mpf(t)) * mp.matrix([1.0, 0.0])
        err = max(abs(states[k, 0] - float(ref[0])),
                  abs(states[k, 1] - float(ref[1])))
        assert err < 1e-8, f"t={t}: error {err}"


def test_rk45_beats_tolerance_on_decay():
    config = IntegratorConfig(t_end=5.0, output_step=0.5,
                              rel_tol=1e-9, abs_tol=1e-12)
    times, states = integrate(_decay, np.array([1.0]), config)
    for t, y in zip(times, states[:, 0]):
        assert abs(y - math.exp(-t)) < 1e-7


def test_output_grid_is_exact():
    """Sample times are k * output_step by construction, bit for bit."""
    config = IntegratorConfig(t_end=2.0, output_step=0.1)
    times, states = integrate(_decay, np.array([1.0]), config)
    assert len(times) == config.n_samples == 21
    for k in range(21):
        assert times[k] == k * 0.1
    assert states.shape == (21, 1)


def test_integration_is_deterministic():
    config = IntegratorConfig(t_end=3.0, output_step=0.25)
    t1, s1 = integrate(_decay, np.array([1.0]), config)
    t2, s2 = integrate(_decay, np.array([1.0]), config)
    assert np.array_equal(t1, t2)
    assert np.array_equal(s1, s2)


def test_rk45_underflow_carries_partial_output():
    """A right-hand side that turns non-finite forces the step toward zero;
    the failure must carry the samples that were completed."""

    def poisoned(t, y):
        if t > 0.52:
            return np.array([math.nan])
        return -y

    config = IntegratorConfig(t_end=2.0, output_step=0.1)
    with pytest.raises(IntegrationError, match="underflow") as excinfo:
        integrate(poisoned, np.array([1.0]), config)
    err = excinfo.value
    assert len(err.times) >= 5, "expected the samples before the blow-up"
    assert len(err.times) < 21
    assert np.all(np.isfinite(err.states))


def test_rk4_raises_on_non_finite():
    def poisoned(t, y):
        if t > 0.52:
            return np.array([math.inf])
        return -y

    config = IntegratorConfig(method="rk4", t_end=2.0, output_step=0.1,
                              max_step=0.01)
    with pytest.raises(IntegrationError, match="non-finite"):
        integrate(poisoned, np.array([1.0]), config)


def test_config_validation():
    with pytest.raises(ValueError, match="method"):
        IntegratorConfig(method="euler")
    with pytest.raises(ValueError, match="t_end"):
        IntegratorConfig(t_end=0.0)
    with pytest.raises(ValueError, match="output_step"):
        IntegratorConfig(t_end=1.0, output_step=2.0)
    with pytest.raises(ValueError, match="integer multiple"):
        IntegratorConfig(t_end=1.0, output_step=0.3)
    with pytest.raises(ValueError, match="rel_tol"):
        IntegratorConfig(rel_tol=0.0)
    with pytest.raises(ValueError, match="abs_tol"):
        IntegratorConfig(abs_tol=-1e-9)
    with pytest.raises(ValueError, match="max_step"):
        IntegratorConfig(max_step=0.0)
    with pytest.raises(ValueError, match="finite max_step"):
        IntegratorConfig(method="rk4")
    assert IntegratorConfig(t_end=100.0, output_step=0.1).n_samples == 1001


def test_rk4_and_rk45_agree_on_smooth_problem():
    """y' = cos(t) * y has the closed form exp(sin t); both methods match it."""

    def f(t, y):
        return math.cos(t) * y

    fixed = IntegratorConfig(method="rk4", t_end=4.0, output_step=0.5,
                             max_step=0.001)
    adaptive = IntegratorConfig(method="rk45", t_end=4.0, output_step=0.5,
                                rel_tol=1e-9, abs_tol=1e-12)
    _, s_fixed = integrate(f, np.array([1.0]), fixed)
    times, s_adaptive = integrate(f, np.array([1.0]), adaptive)
    for k, t in enumerate(times):
        exact = math.exp(math.sin(t))
        assert abs(s_fixed[k, 0] - exact) < 1e-8
        assert abs(s_adaptive[k, 0] - exact) < 1e-7
        assert abs(s_fixed[k, 0] - s_adaptive[k, 0]) < 1e-7
