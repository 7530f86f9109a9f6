"""
Measuring the two-photon linewidth of light storage
===================================================

Sweeping the two-photon detuning and recording the released intensity traces
out the tolerance of the storage scheme. The analytic loss factor is an
amplitude factor exp(-gamma delta^2 T / g^2 N); the integrated intensity is
its square. The fit below picks the power from the data rather than assuming
it.

The sweep uses the weak-probe equations, which agree with the full
Maxwell-Bloch equations to better than 1e-7 for this probe strength and run
about twice as fast. Expect a few minutes; pass --jobs N to use N processes.

Run:  python demos/04_linewidth_sweep.py [--jobs N]
"""

# %%
import sys

import numpy as np

from lightstop import PhysicalParams, SimulationConfig, analytic
from lightstop.cli import sweep

jobs = int(sys.argv[sys.argv.index("--jobs") + 1]) if "--jobs" in sys.argv else 1
config = SimulationConfig(params=PhysicalParams(gamma_ab=1.0), mode="weak-probe")
deltas = [round(0.05 * i, 12) for i in range(13)]
rows = sweep(config, deltas, jobs=jobs)

# %%
T = analytic.transfer_time(config.schedule, 0.0, 150.0)
p = analytic.fit_loss_exponent(rows[:, 0], rows[:, 2], T, config.params)
print(f"T = {T:.5f}; best power of the amplitude loss factor: p = {p}")
print("delta   normalised   p=2 model   p=1 model")
for d, norm, model in zip(rows[:, 0], rows[:, 2], rows[:, 3]):
    print(f"{d:5.2f} {norm:12.4f} {model:11.4f} {np.exp(-d * d * T):11.4f}")

# %%
# The linewidth is the detuning at which the amplitude factor falls to 1/e.
d2 = analytic.two_photon_linewidth(config.params, T)
print(f"\ndelta_2ph = {d2:.4f} g sqrt(N); at this detuning the released intensity is about e^-2")
