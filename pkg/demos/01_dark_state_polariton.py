"""
The dark-state polariton along a storage-and-release schedule
=============================================================

A strong control field turns an opaque atomic vapour transparent for a weak
probe. Inside the medium the probe travels as a dark-state polariton, a
mixture of light and ground-state spin coherence whose composition is set by
the mixing angle theta with tan(theta) = g sqrt(N) / Omega(t).

This script walks through the control schedule used throughout the package
and prints how the polariton changes character from light to spin and back.
Everything here is closed form, so it runs instantly.

Run:  python demos/01_dark_state_polariton.py
"""

# %%
# The schedule: cot(theta) starts near 95, drops almost to zero around
# t = 70 (stopped light) and rises again after t = 125.
import numpy as np

from lightstop import ControlSchedule, PhysicalParams, mixing_angle, rabi_frequency
from lightstop import analytic

schedule = ControlSchedule()
params = PhysicalParams(gamma_ab=1.0)

times = np.array([0.0, 10.0, 15.0, 25.0, 40.0, 70.0, 110.0, 125.0, 140.0, 150.0])
angle = mixing_angle(schedule, times)
omega = rabi_frequency(schedule, times, params)

print(" t     Omega/gN   theta/(pi/2)  light cos^2  spin sin^2  v_g/c")
for t, om, th, c, s in zip(times, omega, angle.theta, angle.cos, angle.sin):
    print(f"{t:5.0f} {om:10.4f} {th / (np.pi / 2):12.5f} {c * c:12.6f} {s * s:11.6f} {c * c:7.4f}")

# %%
# The group velocity is c cos^2(theta), so the distance the pulse covers is
# the time integral of cos^2(theta). While the light is stopped the spin
# wave simply sits in place and accumulates a phase delta * sin^2(theta).
shift = analytic.group_delay(schedule, 0.0, 150.0)
stored = analytic.spin_time(schedule, 0.0, 150.0)
print(f"\ndisplacement over [0, 150]: {shift:.4f}  (free light would move 150)")
print(f"time spent as spin excitation: {stored:.4f}")

# %%
# The losses caused by a finite two-photon detuning are controlled by one
# number, T = int cos^2 sin^4 dt: it is only non-zero while the polariton is
# a genuine mixture. The linewidth g sqrt(N) / sqrt(gamma T) follows from it.
T = analytic.transfer_time(schedule, 0.0, 150.0)
print(f"\nT = {T:.6f}")
print(f"two-photon linewidth delta_2ph = {analytic.two_photon_linewidth(params, T):.4f} g sqrt(N)")

# %%
# The mixture is exactly a rotation, so no energy hides in the bookkeeping:
# |Psi|^2 + |Phi|^2 = |E|^2 + N |rho_cb|^2 at every angle.
from lightstop import Grid, to_polaritons

grid = Grid(0.0, 1.0, 8)
rng = np.random.default_rng(0)
e = rng.normal(size=8) + 1j * rng.normal(size=8)
r = rng.normal(size=8) + 1j * rng.normal(size=8)
for theta in (0.0, 0.4, 1.2, np.pi / 2):
    pol = to_polaritons(e, r, theta, grid, params)
    lhs = np.sum(np.abs(pol.psi) ** 2 + np.abs(pol.phi) ** 2)
    rhs = np.sum(np.abs(e) ** 2 + np.abs(r) ** 2)
    print(f"theta = {theta:.3f}: norm mismatch {abs(lhs - rhs):.1e}")
