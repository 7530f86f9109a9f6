"""
Where the transparency comes from
=================================

In the weak-probe limit the optical coherence rho_ab responds linearly to the
probe. Setting the time derivatives of the two linearised Bloch equations to
zero gives the steady-state response; its imaginary part is the absorption.

On two-photon resonance the response vanishes exactly (the dark resonance).
Off resonance it grows, and how quickly depends on the control strength:
the transparency window narrows as Omega shrinks. That shrinking window is
why stopping light is delicate.

Run:  python demos/02_eit_window.py
"""

# %%
import numpy as np

from lightstop import PhysicalParams
from lightstop.bloch import steady_state_susceptibility

params = PhysicalParams(gamma_ab=1.0)
detunings = np.linspace(-2.0, 2.0, 17)

print("probe detuning   Im chi (Omega=0)   Im chi (Omega=0.5)   Im chi (Omega=2)")
for d in detunings:
    row = [steady_state_susceptibility(params, om, d).imag for om in (0.0, 0.5, 2.0)]
    print(f"{d:14.2f} {row[0]:18.5f} {row[1]:20.5f} {row[2]:18.5f}")

# %%
# Width of the window: scan outward from resonance to the first detuning at
# which absorption reaches half of the bare two-level value. (Bisection would
# be wrong here: absorption is not monotone, it peaks again near +-Omega.)
bare = steady_state_susceptibility(params, 0.0, 0.0).imag


def half_width(omega: float) -> float:
    for d in np.linspace(1e-4, 3.0 * omega + 1.0, 300001):
        if steady_state_susceptibility(params, omega, d).imag >= 0.5 * bare:
            return d
    return float("nan")


# for Omega well below gamma the window is Omega^2 / gamma wide
print("\nOmega   window half-width   Omega^2 / gamma")
for omega in (0.1, 0.25, 0.5, 1.0):
    print(f"{omega:5.2f} {half_width(omega):19.4f} {omega**2 / params.gamma_ab:17.4f}")
