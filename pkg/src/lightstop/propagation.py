"""Maxwell-Bloch propagation on a periodic grid.

One step of length dt = dz / c is a Strang splitting

    half local update  ->  exact one-cell shift of E  ->  half local update

The local update integrates dE/dt = i g N rho_ab together with the Bloch
equations pointwise in z with classic RK4, advection frozen.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numba
import numpy as np

from .bloch import AtomState, full_rhs, linear_rhs, rate_vector
from .config import SimulationConfig
from .core import ConfigError, InputPulseSpec
from .polariton import ControlSchedule, PolaritonField, mixing_angle, rabi_frequency, to_polaritons

__all__ = [
    "InputPulseSpec",
    "MediumState",
    "NumericalAbort",
    "TrajectoryRecord",
    "advect",
    "initialize_state",
    "integrated_output_intensity",
    "run",
    "step",
]


class NumericalAbort(FloatingPointError):
    def __init__(self, index: int, t: float):
        super().__init__(f"non-finite value at grid index {index}, t = {t!r}")
        self.index = index
        self.t = t


@dataclass
class MediumState:
    efield: np.ndarray
    atoms: AtomState
    t: float

    def copy(self) -> "MediumState":
        return MediumState(self.efield.copy(), self.atoms.copy(), self.t)


@dataclass
class TrajectoryRecord:
    times: list[float] = field(default_factory=list)
    states: list[MediumState] = field(default_factory=list)
    polaritons: list[PolaritonField] = field(default_factory=list)
    # per-step arrays: step, t, trace_err, psi_norm, e_norm
    diagnostics: dict[str, np.ndarray] = field(default_factory=dict)
    dz: float = 1.0

    def index_of(self, t: float) -> int:
        for i, tr in enumerate(self.times):
            if abs(tr - t) <= 1e-9 * max(1.0, abs(t)):
                return i
        raise KeyError(f"time {t!r} was not recorded (have {self.times})")

    def snapshot(self, t: float) -> tuple[MediumState, PolaritonField]:
        i = self.index_of(t)
        return self.states[i], self.polaritons[i]


@numba.njit(cache=True)
def _local_full(e, raa, rbb, rcc, rab, rac, rcb, omegas, h, rates, g_n):
    """Advance every grid point by len(omegas)//2 RK4 substeps of size h.

    omegas holds Omega at t, t + h/2, t + h, ..., t + m h.
    Returns the first index holding a non-finite value, or -1.
    """
    n = e.shape[0]
    m = (omegas.shape[0] - 1) // 2
    half = 0.5 * h
    sixth = h / 6.0
    bad = -1
    for i in range(n):
        y0, y1, y2 = raa[i], rbb[i], rcc[i]
        y3, y4, y5, y6 = rab[i], rac[i], rcb[i], e[i]
        for s in range(m):
            om0, om1, om2 = omegas[2 * s], omegas[2 * s + 1], omegas[2 * s + 2]
            a0, a1, a2, a3, a4, a5 = full_rhs(y0, y1, y2, y3, y4, y5, y6, om0, rates)
            a6 = 1j * g_n * y3
            b0, b1, b2, b3, b4, b5 = full_rhs(
                y0 + half * a0, y1 + half * a1, y2 + half * a2, y3 + half * a3,
                y4 + half * a4, y5 + half * a5, y6 + half * a6, om1, rates,
            )
            b6 = 1j * g_n * (y3 + half * a3)
            c0, c1, c2, c3, c4, c5 = full_rhs(
                y0 + half * b0, y1 + half * b1, y2 + half * b2, y3 + half * b3,
                y4 + half * b4, y5 + half * b5, y6 + half * b6, om1, rates,
            )
            c6 = 1j * g_n * (y3 + half * b3)
            d0, d1, d2, d3, d4, d5 = full_rhs(
                y0 + h * c0, y1 + h * c1, y2 + h * c2, y3 + h * c3,
                y4 + h * c4, y5 + h * c5, y6 + h * c6, om2, rates,
            )
            d6 = 1j * g_n * (y3 + h * c3)
            y0 = y0 + sixth * (a0 + 2.0 * b0 + 2.0 * c0 + d0)
            y1 = y1 + sixth * (a1 + 2.0 * b1 + 2.0 * c1 + d1)
            y2 = y2 + sixth * (a2 + 2.0 * b2 + 2.0 * c2 + d2)
            y3 = y3 + sixth * (a3 + 2.0 * b3 + 2.0 * c3 + d3)
            y4 = y4 + sixth * (a4 + 2.0 * b4 + 2.0 * c4 + d4)
            y5 = y5 + sixth * (a5 + 2.0 * b5 + 2.0 * c5 + d5)
            y6 = y6 + sixth * (a6 + 2.0 * b6 + 2.0 * c6 + d6)
        raa[i], rbb[i], rcc[i] = y0, y1, y2
        rab[i], rac[i], rcb[i], e[i] = y3, y4, y5, y6
        if bad < 0 and not (
            np.isfinite(y0) and np.isfinite(y1) and np.isfinite(y2) and np.isfinite(y3)
            and np.isfinite(y4) and np.isfinite(y5) and np.isfinite(y6)
        ):
            bad = i
    return bad


@numba.njit(cache=True)
def _local_linear(e, rab, rcb, omegas, h, rates, g_n):
    n = e.shape[0]
    m = (omegas.shape[0] - 1) // 2
    half = 0.5 * h
    sixth = h / 6.0
    bad = -1
    for i in range(n):
        p, q, f = rab[i], rcb[i], e[i]
        for s in range(m):
            om0, om1, om2 = omegas[2 * s], omegas[2 * s + 1], omegas[2 * s + 2]
            ap, aq = linear_rhs(p, q, f, om0, rates)
            af = 1j * g_n * p
            bp, bq = linear_rhs(p + half * ap, q + half * aq, f + half * af, om1, rates)
            bf = 1j * g_n * (p + half * ap)
            cp, cq = linear_rhs(p + half * bp, q + half * bq, f + half * bf, om1, rates)
            cf = 1j * g_n * (p + half * bp)
            dp, dq = linear_rhs(p + h * cp, q + h * cq, f + h * cf, om2, rates)
            df = 1j * g_n * (p + h * cp)
            p = p + sixth * (ap + 2.0 * bp + 2.0 * cp + dp)
            q = q + sixth * (aq + 2.0 * bq + 2.0 * cq + dq)
            f = f + sixth * (af + 2.0 * bf + 2.0 * cf + df)
        rab[i], rcb[i], e[i] = p, q, f
        if bad < 0 and not (np.isfinite(p) and np.isfinite(q) and np.isfinite(f)):
            bad = i
    return bad


def advect(efield: np.ndarray) -> np.ndarray:
    """Exact transport by one cell in +z on the periodic grid."""
    return np.roll(efield, 1)


class _Stepper:
    """Holds the per-run constants of the local update."""

    def __init__(self, config: SimulationConfig, schedule: ControlSchedule | None = None):
        self.config = config
        self.schedule = schedule or config.schedule
        self.rates = rate_vector(config.params)
        self.g_n = config.params.g * config.params.n_atoms
        self.m = config.local_substeps
        self.h = config.rk_step
        self.linear = config.mode == "weak-probe"

    def local(self, state: MediumState, t0: float) -> None:
        """In-place local update over [t0, t0 + dt/2]."""
        times = t0 + 0.5 * self.h * np.arange(2 * self.m + 1)
        omegas = np.ascontiguousarray(
            rabi_frequency(self.schedule, times, self.config.params), dtype=float
        )
        a = state.atoms
        if self.linear:
            bad = _local_linear(state.efield, a.rho_ab, a.rho_cb, omegas, self.h, self.rates, self.g_n)
        else:
            bad = _local_full(
                state.efield, a.rho_aa, a.rho_bb, a.rho_cc, a.rho_ab, a.rho_ac, a.rho_cb,
                omegas, self.h, self.rates, self.g_n,
            )
        if bad >= 0:
            raise NumericalAbort(int(bad), t0)

    def advance(self, state: MediumState) -> None:
        t0, dt = state.t, self.config.dt
        self.local(state, t0)
        state.efield = advect(state.efield)
        self.local(state, t0 + 0.5 * dt)
        state.t = t0 + dt


def initialize_state(config: SimulationConfig) -> MediumState:
    """Atoms in |b>, Gaussian probe, spin coherence in the dark state of Omega(t_start).

    weak-probe mode uses the linearised dark state rho_cb = -g E / Omega; the
    full mode uses the pure dark state (Omega|b> - g E|c>) / norm, which agrees
    to first order in the probe.
    """
    p = config.params
    omega0 = float(rabi_frequency(config.schedule, config.t_start, p))
    if omega0 <= 0:
        raise ConfigError("dark-state initialisation undefined at theta = pi/2 (Omega(t_start) = 0)")
    n = config.grid.n_points
    efield = config.pulse.profile(config.grid.z)
    atoms = AtomState.ground(n)
    ge = p.g * efield
    if config.mode == "weak-probe":
        atoms.rho_cb = -ge / omega0
    else:
        norm = omega0**2 + np.abs(ge) ** 2
        atoms.rho_bb = omega0**2 / norm
        atoms.rho_cc = np.abs(ge) ** 2 / norm
        atoms.rho_cb = -ge * omega0 / norm
    return MediumState(efield, atoms, config.t_start)


def step(
    state: MediumState, schedule: ControlSchedule, config: SimulationConfig
) -> MediumState:
    """Return the state one Strang step later; the input is not modified."""
    new = state.copy()
    _Stepper(config, schedule).advance(new)
    return new


def _polaritons(state: MediumState, config: SimulationConfig) -> PolaritonField:
    theta = float(mixing_angle(config.schedule, state.t).theta)
    return to_polaritons(
        state.efield, state.atoms.rho_cb, theta, config.grid, config.params, config.k_probe
    )


def run(config: SimulationConfig, progress=None) -> TrajectoryRecord:
    """Integrate from t_start to t_end, recording snapshots and per-step diagnostics.

    ``progress`` is an optional callable receiving (step, n_steps).
    """
    grid, dt = config.grid, config.dt
    n_steps = config.n_steps
    record_steps = {int(round((t - config.t_start) / dt)): t for t in config.record_times}
    stepper = _Stepper(config)
    state = initialize_state(config)
    record = TrajectoryRecord(dz=grid.dz)

    diag = {
        "step": np.arange(n_steps + 1, dtype=float),
        "t": config.t_start + dt * np.arange(n_steps + 1),
        "trace_err": np.zeros(n_steps + 1),
        "psi_norm": np.zeros(n_steps + 1),
        "e_norm": np.zeros(n_steps + 1),
    }
    angles = mixing_angle(config.schedule, diag["t"])
    spin_scale = config.params.sqrt_n * (
        np.exp(1j * config.k_probe * grid.z) if config.k_probe else 1.0
    )
    full = config.mode == "full-bloch"

    for n in range(n_steps + 1):
        if n > 0:
            stepper.advance(state)
            state.t = diag["t"][n]
        e, rcb = state.efield, state.atoms.rho_cb
        psi = angles.cos[n] * e - angles.sin[n] * spin_scale * rcb
        diag["psi_norm"][n] = grid.integrate(np.abs(psi) ** 2)
        diag["e_norm"][n] = grid.integrate(np.abs(e) ** 2)
        if full:
            diag["trace_err"][n] = np.max(np.abs(state.atoms.trace() - 1.0))
        if n in record_steps:
            record.times.append(record_steps[n])
            snap = state.copy()
            record.states.append(snap)
            record.polaritons.append(_polaritons(snap, config))
        if progress is not None:
            progress(n, n_steps)
    record.diagnostics = diag
    return record


def integrated_output_intensity(record: TrajectoryRecord, t_out: float) -> float:
    """Integral of |Psi(z, t_out)|^2 over the periodic grid."""
    _, pol = record.snapshot(t_out)
    return float(record.dz * np.sum(np.abs(pol.psi) ** 2))


def snapshot_rows(state: MediumState, pol: PolaritonField, z: np.ndarray):
    """Rows for the snapshot CSV format."""
    e, rcb, psi = state.efield, state.atoms.rho_cb, pol.psi
    return np.column_stack(
        [z, e.real, e.imag, rcb.real, rcb.imag, psi.real, psi.imag, np.abs(psi) ** 2]
    )


SNAPSHOT_HEADER = ("z", "re_E", "im_E", "re_rho_cb", "im_rho_cb", "re_psi", "im_psi", "abs_psi_sq")
DIAGNOSTICS_HEADER = ("step", "t", "trace_err", "psi_norm", "e_norm")
