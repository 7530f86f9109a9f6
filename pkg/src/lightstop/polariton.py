"""Mixing-angle schedules and the dark/bright polariton transforms."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .core import ConfigError, Grid, PhysicalParams

THETA_MIN = 1e-9
FD_STEP = 1e-6

TANH_DEFAULTS = {
    "base": 100.0,
    "amp1": 50.0,
    "rate1": 0.1,
    "center1": 15.0,
    "amp2": 50.0,
    "rate2": 0.1,
    "center2": 125.0,
}

SCHEDULE_KINDS = ("paper-tanh", "constant", "piecewise-linear-in-cot")


@dataclass(frozen=True)
class ControlSchedule:
    """Time dependence of cot(theta) = Omega / (g sqrt(N)).

    ``paper-tanh``: cot = base - amp1 tanh(rate1 (t - center1))
    + amp2 tanh(rate2 (t - center2)).
    ``constant``: cot = ``cot_theta``.
    ``piecewise-linear-in-cot``: linear interpolation of ``cot_values`` at
    ``times``, held constant outside.
    """

    kind: str = "paper-tanh"
    base: float = 100.0
    amp1: float = 50.0
    rate1: float = 0.1
    center1: float = 15.0
    amp2: float = 50.0
    rate2: float = 0.1
    center2: float = 125.0
    cot_theta: float = 1.0
    times: tuple[float, ...] = field(default=())
    cot_values: tuple[float, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.kind not in SCHEDULE_KINDS:
            raise ConfigError(f"unknown schedule kind {self.kind!r}")
        if self.kind == "constant" and not self.cot_theta >= 0:
            raise ConfigError("schedule cot_theta must be non-negative")
        if self.kind == "piecewise-linear-in-cot":
            times = np.asarray(self.times, dtype=float)
            if len(times) < 1 or len(times) != len(self.cot_values):
                raise ConfigError("piecewise schedule needs equal-length times and cot_values")
            if np.any(np.diff(times) <= 0):
                raise ConfigError("piecewise schedule times must be strictly increasing")
            if np.any(np.asarray(self.cot_values) < 0):
                raise ConfigError("piecewise schedule cot_values must be non-negative")
            # normalise list input so the dataclass stays hashable
            object.__setattr__(self, "times", tuple(float(x) for x in self.times))
            object.__setattr__(self, "cot_values", tuple(float(x) for x in self.cot_values))

    @classmethod
    def reference(cls) -> "ControlSchedule":
        return cls(kind="paper-tanh", **TANH_DEFAULTS)

    @classmethod
    def constant(cls, cot_theta: float) -> "ControlSchedule":
        return cls(kind="constant", cot_theta=cot_theta)

    @classmethod
    def from_theta(cls, theta: float) -> "ControlSchedule":
        return cls.constant(float(np.cos(theta) / np.sin(theta)) if theta > 0 else np.inf)

    def cot(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "paper-tanh":
            return (
                self.base
                - self.amp1 * np.tanh(self.rate1 * (t - self.center1))
                + self.amp2 * np.tanh(self.rate2 * (t - self.center2))
            )
        if self.kind == "constant":
            return np.full_like(t, self.cot_theta)
        return np.interp(t, self.times, self.cot_values)

    def cot_rate(self, t):
        """d cot(theta) / dt; analytic for paper-tanh, centred difference otherwise."""
        t = np.asarray(t, dtype=float)
        if self.kind == "paper-tanh":
            s1 = 1 / np.cosh(self.rate1 * (t - self.center1))
            s2 = 1 / np.cosh(self.rate2 * (t - self.center2))
            return -self.amp1 * self.rate1 * s1**2 + self.amp2 * self.rate2 * s2**2
        if self.kind == "constant":
            return np.zeros_like(t)
        return (self.cot(t + FD_STEP) - self.cot(t - FD_STEP)) / (2 * FD_STEP)

    def check_window(self, t0: float, t1: float, n: int = 4001) -> None:
        cot = self.cot(np.linspace(t0, t1, n))
        if np.any(cot < 0) or np.any(np.isnan(cot)):
            raise ConfigError(f"schedule cot(theta) becomes negative on [{t0}, {t1}]")


class MixingAngle(NamedTuple):
    theta: np.ndarray
    sin: np.ndarray
    cos: np.ndarray
    rate: np.ndarray


def mixing_angle(schedule: ControlSchedule, t) -> MixingAngle:
    """theta(t) with tan(theta) = g sqrt(N) / Omega, plus sin, cos and dtheta/dt.

    Works elementwise on arrays of times.
    """
    cot = np.asarray(schedule.cot(t), dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        theta = np.arctan2(1.0, cot)
        theta = np.maximum(theta, THETA_MIN)
        norm = np.sqrt(1.0 + cot**2)
        sin = np.where(np.isfinite(norm), 1.0 / norm, np.sin(theta))
        cos = np.where(np.isfinite(norm), cot / norm, np.cos(theta))
        # d/dt arccot(x) = -x' / (1 + x^2)
        rate = np.where(np.isfinite(norm), -schedule.cot_rate(t) / (1.0 + cot**2), 0.0)
    return MixingAngle(theta, sin, cos, rate)


def rabi_frequency(schedule: ControlSchedule, t, params: PhysicalParams):
    """Control Rabi frequency Omega = g sqrt(N) cot(theta)."""
    return params.g_sqrt_n * schedule.cot(t)


@dataclass
class PolaritonField:
    psi: np.ndarray
    phi: np.ndarray
    theta: float

    def __post_init__(self) -> None:
        if np.shape(self.psi) != np.shape(self.phi):
            raise ValueError("psi and phi must have the same length")


def _carrier(grid: Grid, k_probe: float):
    if k_probe == 0:
        return 1.0
    return np.exp(1j * k_probe * grid.z)


def to_polaritons(
    efield: np.ndarray,
    rho_cb: np.ndarray,
    theta: float,
    grid: Grid,
    params: PhysicalParams,
    k_probe: float = 0.0,
) -> PolaritonField:
    grid.check(efield, rho_cb)
    s, c = np.sin(theta), np.cos(theta)
    spin = params.sqrt_n * np.asarray(rho_cb) * _carrier(grid, k_probe)
    efield = np.asarray(efield)
    return PolaritonField(psi=c * efield - s * spin, phi=s * efield + c * spin, theta=theta)


def from_polaritons(
    pol: PolaritonField, grid: Grid, params: PhysicalParams, k_probe: float = 0.0
) -> tuple[np.ndarray, np.ndarray]:
    """Invert :func:`to_polaritons`; returns (E, rho_cb)."""
    grid.check(pol.psi, pol.phi)
    s, c = np.sin(pol.theta), np.cos(pol.theta)
    efield = c * pol.psi + s * pol.phi
    spin = -s * pol.psi + c * pol.phi
    rho_cb = spin / (params.sqrt_n * _carrier(grid, k_probe))
    return efield, rho_cb
