from __future__ import annotations

import math

import numpy as np
import pytest

from lightstop import (
    ControlSchedule,
    Grid,
    PhysicalParams,
    PolaritonField,
    from_polaritons,
    mixing_angle,
    rabi_frequency,
    to_polaritons,
)
from lightstop.core import ConfigError

GRID = Grid(0.0, 10.0, 64)
PARAMS = PhysicalParams(gamma_ab=1.0)


def _tanh_cot(t):
    # the tanh schedule formula, written out independently of the schedule class
    return 100 - 50 * math.tanh(0.1 * (t - 15)) + 50 * math.tanh(0.1 * (t - 125))


def _random_fields(rng, n=GRID.n_points):
    e = rng.normal(size=n) + 1j * rng.normal(size=n)
    r = rng.normal(size=n) + 1j * rng.normal(size=n)
    return e, r


def test_constant_schedule_equal_drive_gives_quarter_pi() -> None:
    a = mixing_angle(ControlSchedule.constant(1.0), 3.0)
    assert a.theta == pytest.approx(math.pi / 4, abs=1e-15)
    assert a.rate == 0.0


def test_tanh_schedule_stopped_at_t70() -> None:
    cot = _tanh_cot(70.0)
    assert cot == pytest.approx(100 * (1 - math.tanh(5.5)), rel=1e-9)
    assert cot == pytest.approx(0.00334, abs=1e-5)
    a = mixing_angle(ControlSchedule(), 70.0)
    assert abs(a.theta - math.pi / 2) < 1e-2
    assert float(ControlSchedule().cot(70.0)) == pytest.approx(cot, rel=1e-13)


def test_tanh_schedule_nearly_luminal_at_t0() -> None:
    cot = _tanh_cot(0.0)
    assert cot == pytest.approx(95.3, abs=0.05)
    a = mixing_angle(ControlSchedule(), 0.0)
    assert a.cos**2 == pytest.approx(cot**2 / (1 + cot**2), rel=1e-14)
    assert a.cos**2 == pytest.approx(0.99989, abs=1e-5)


@pytest.mark.parametrize("t", [0.0, 14.0, 30.0, 70.0, 118.0, 131.0, 150.0])
def test_tanh_schedule_rate_matches_finite_difference(t) -> None:
    h = 1e-4
    theta = lambda s: math.atan2(1.0, _tanh_cot(s))  # noqa: E731
    fd = (theta(t + h) - theta(t - h)) / (2 * h)
    assert float(mixing_angle(ControlSchedule(), t).rate) == pytest.approx(fd, rel=1e-6, abs=1e-12)


def test_piecewise_schedule_interpolates_and_differentiates() -> None:
    s = ControlSchedule(kind="piecewise-linear-in-cot", times=(0.0, 10.0), cot_values=(4.0, 2.0))
    assert float(s.cot(5.0)) == pytest.approx(3.0)
    assert float(s.cot(-1.0)) == 4.0 and float(s.cot(11.0)) == 2.0
    a = mixing_angle(s, 5.0)
    # d arccot(x)/dt = -x' / (1 + x^2) with x' = -0.2
    assert float(a.rate) == pytest.approx(0.2 / 10.0, rel=1e-6)


def test_schedule_validation() -> None:
    with pytest.raises(ConfigError):
        ControlSchedule(kind="sawtooth")
    with pytest.raises(ConfigError):
        ControlSchedule.constant(-1.0)
    with pytest.raises(ConfigError):
        ControlSchedule(kind="piecewise-linear-in-cot", times=(1.0, 0.0), cot_values=(1.0, 1.0))
    with pytest.raises(ConfigError, match="negative"):
        ControlSchedule(base=10.0).check_window(0.0, 150.0)


def test_theta_clamped_when_drive_overflows() -> None:
    a = mixing_angle(ControlSchedule.constant(1e300), 0.0)
    assert a.theta >= 1e-9
    assert np.isfinite(a.sin) and np.isfinite(a.cos)


def test_rabi_frequency() -> None:
    assert float(rabi_frequency(ControlSchedule.constant(1.0), 0.0, PARAMS)) == 1.0
    assert float(rabi_frequency(ControlSchedule.constant(0.0), 0.0, PARAMS)) == 0.0
    assert float(rabi_frequency(ControlSchedule(), 0.0, PARAMS)) == pytest.approx(95.3, abs=0.05)


def test_rabi_times_tan_theta_is_collective_coupling() -> None:
    t = np.linspace(0.0, 150.0, 3001)
    params = PhysicalParams(gamma_ab=1.0, g_sqrt_n=2.5)
    omega = rabi_frequency(ControlSchedule(), t, params)
    theta = mixing_angle(ControlSchedule(), t).theta
    np.testing.assert_allclose(omega * np.tan(theta), 2.5, rtol=1e-12)


def test_theta_monotone_where_cot_is() -> None:
    t = np.linspace(0.0, 70.0, 7001)
    theta = mixing_angle(ControlSchedule(), t).theta
    assert np.all(np.diff(theta) > 0)
    # continuity: increments bounded by the analytic rate
    rate = mixing_angle(ControlSchedule(), t).rate
    assert np.all(np.diff(theta) <= 1.01 * np.max(rate) * (t[1] - t[0]))


def test_pure_light_and_pure_spin_limits() -> None:
    rng = np.random.default_rng(0)
    e, r = _random_fields(rng)
    pol = to_polaritons(e, r, 0.0, GRID, PARAMS)
    np.testing.assert_array_equal(pol.psi, e)
    np.testing.assert_array_equal(pol.phi, r)
    pol = to_polaritons(e, r, math.pi / 2, GRID, PARAMS)
    np.testing.assert_allclose(pol.psi, -r, atol=1e-15)
    np.testing.assert_allclose(pol.phi, e, atol=1e-15)


def test_from_polaritons_simple_cases() -> None:
    gauss = np.exp(-((GRID.z - 5.0) ** 2)) + 0j
    e, r = from_polaritons(PolaritonField(gauss, np.zeros(64, complex), 0.0), GRID, PARAMS)
    np.testing.assert_array_equal(e, gauss)
    np.testing.assert_array_equal(r, 0)
    e, r = from_polaritons(PolaritonField(np.zeros(64, complex), np.zeros(64, complex), 0.7), GRID, PARAMS)
    assert not e.any() and not r.any()


def test_transform_rejects_length_mismatch() -> None:
    with pytest.raises(ValueError):
        to_polaritons(np.zeros(10), np.zeros(64), 0.3, GRID, PARAMS)


@pytest.mark.parametrize("n_atoms, k_probe", [(1.0, 0.0), (7.0, 0.0), (3.0, 2.1)])
def test_rotation_preserves_norm_and_round_trips(n_atoms, k_probe) -> None:
    params = PhysicalParams(gamma_ab=1.0, n_atoms=n_atoms)
    rng = np.random.default_rng(11)
    for _ in range(100):
        e, r = _random_fields(rng)
        theta = rng.uniform(1e-9, math.pi / 2)
        pol = to_polaritons(e, r, theta, GRID, params, k_probe)
        before = np.abs(e) ** 2 + n_atoms * np.abs(r) ** 2
        after = np.abs(pol.psi) ** 2 + np.abs(pol.phi) ** 2
        np.testing.assert_allclose(after, before, rtol=1e-12)
        e2, r2 = from_polaritons(pol, GRID, params, k_probe)
        assert np.max(np.abs(e2 - e)) <= 1e-14
        assert np.max(np.abs(r2 - r)) <= 1e-14
