"""
Storing and releasing a pulse with a detuned Raman resonance
============================================================

This is the central numerical experiment. A Gaussian probe enters the medium
while the control is strong, is converted into a spin wave as the control is
switched off, waits, and is released again. We integrate the full
Maxwell-Bloch equations and compare the released pulse with the
second-order dark-state polariton theory.

A finite two-photon detuning delta costs intensity: the analytic theory
predicts a factor exp(-2 gamma delta^2 T / g^2 N) for a spectrally narrow
pulse. We show that for delta = 0, 0.2 and 0.5 (in units of g sqrt(N)).

One full simulation takes about a minute on a single core.

Run:  python demos/03_storage_and_release.py [--weak-probe]
"""

# %%
import sys

import numpy as np

from lightstop import PhysicalParams, SimulationConfig, analytic
from lightstop.propagation import integrated_output_intensity, run

mode = "weak-probe" if "--weak-probe" in sys.argv else "full-bloch"
base = SimulationConfig(params=PhysicalParams(gamma_ab=1.0), mode=mode)
T = analytic.transfer_time(base.schedule, base.t_start, base.t_end)
print(f"mode = {mode}, grid of {base.grid.n_points} points, {base.n_steps} steps, T = {T:.4f}")

# %%
# For each detuning: run, then evolve the same initial polariton with the
# analytic theory, and compare released intensity and shape.
z = base.grid.z
released = {}
for delta in (0.0, 0.2, 0.5):
    cfg = base.with_two_photon_detuning(delta)
    record = run(cfg)
    psi0 = record.polaritons[0].psi
    psi_num = record.polaritons[-1].psi
    psi_ana = analytic.second_order_evolve(psi0, cfg.grid, delta, cfg.schedule, cfg.params, 0.0, 150.0)

    peak = np.max(np.abs(psi0) ** 2)
    p_num, p_ana = np.abs(psi_num) ** 2 / peak, np.abs(psi_ana) ** 2 / peak
    distance = np.linalg.norm(p_num - p_ana) / np.linalg.norm(p_ana)
    released[delta] = integrated_output_intensity(record, 150.0)
    centre = np.sum(z * p_num) / np.sum(p_num)
    print(
        f"delta = {delta:.1f}: released peak {p_num.max():.4f} (theory {p_ana.max():.4f}), "
        f"profile distance {distance:.3f}, centre at z = {centre:.3f}, "
        f"max trace error {record.diagnostics['trace_err'].max():.1e}"
    )

# %%
# Released intensity relative to the resonant case, against the prediction.
print("\ndelta   numeric   exp(-2 gamma delta^2 T)")
for delta, value in released.items():
    print(f"{delta:5.1f} {value / released[0.0]:9.4f} {np.exp(-2 * delta**2 * T):12.4f}")

# %%
# Where did the resonant pulse end up? Transport at c cos^2(theta) predicts
# the shift; the simulated pulse trails it slightly, because dispersion
# beyond second order is not negligible when gamma T is only about 2.5.
shift = analytic.group_delay(base.schedule, 0.0, 150.0)
print(f"\npredicted displacement {shift:.4f} from z0 = {base.pulse.z0}")
