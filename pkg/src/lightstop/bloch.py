"""Density-matrix equations of the Lambda atom in the rotating frame.

Carrier phases exp(+-ikz) and exp(-i dk z) are absorbed into the envelopes
(phase-matched fields, dk = 0).  The control Rabi frequency is real.  rho_bc,
rho_ca and rho_ba are never stored; they are conjugates of the stored
coherences.

The population equations are written in the trace-preserving Hamiltonian form
where the control term of rho_aa is -i(Omega* rho_ac - c.c.), the mirror image
of the rho_cc equation.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numba
import numpy as np

from .core import PhysicalParams


@dataclass
class AtomState:
    """Populations (real) and coherences (complex), scalars or arrays over z."""

    rho_aa: np.ndarray
    rho_bb: np.ndarray
    rho_cc: np.ndarray
    rho_ab: np.ndarray
    rho_ac: np.ndarray
    rho_cb: np.ndarray

    @classmethod
    def ground(cls, n: int) -> "AtomState":
        z = np.zeros(n)
        return cls(z.copy(), np.ones(n), z.copy(), z + 0j, z + 0j, z + 0j)

    def trace(self):
        return self.rho_aa + self.rho_bb + self.rho_cc

    def copy(self) -> "AtomState":
        return AtomState(*(np.array(getattr(self, f.name), copy=True) for f in fields(self)))

    def matrix(self, i: int | None = None) -> np.ndarray:
        """3x3 density matrix in the (a, b, c) basis at grid index ``i``."""
        pick = (lambda x: x) if i is None else (lambda x: np.asarray(x)[i])
        aa, bb, cc = pick(self.rho_aa), pick(self.rho_bb), pick(self.rho_cc)
        ab, ac, cb = pick(self.rho_ab), pick(self.rho_ac), pick(self.rho_cb)
        return np.array(
            [
                [aa, ab, ac],
                [np.conj(ab), bb, np.conj(cb)],
                [np.conj(ac), cb, cc],
            ],
            dtype=complex,
        )


def rate_vector(params: PhysicalParams) -> np.ndarray:
    """Pack parameters for the compiled kernels."""
    return np.array(
        [
            params.g,
            params.gamma_ab,
            params.gamma_ac,
            params.gamma_a_to_b,
            params.gamma_a_to_c,
            params.delta_ab,
            params.delta_ac,
        ]
    )


@numba.njit(cache=True, inline="always")
def full_rhs(raa, rbb, rcc, rab, rac, rcb, e, omega, rates):
    g, gab, gac, gatob, gatoc, dab, dac = (
        rates[0], rates[1], rates[2], rates[3], rates[4], rates[5], rates[6]
    )
    probe = 2.0 * g * (np.conj(e) * rab).imag
    control = 2.0 * omega * rac.imag
    d_aa = -(gatob + gatoc) * raa + probe + control
    d_bb = gatob * raa - probe
    d_cc = gatoc * raa - control
    ge = g * e
    d_ab = -(gab + 1j * dab) * rab + 1j * ge * (rbb - raa) + 1j * omega * rcb
    d_ac = -(gac + 1j * dac) * rac + 1j * omega * (rcc - raa) + 1j * ge * np.conj(rcb)
    d_cb = -1j * (dab - dac) * rcb + 1j * omega * rab - 1j * ge * np.conj(rac)
    return d_aa, d_bb, d_cc, d_ab, d_ac, d_cb


@numba.njit(cache=True, inline="always")
def linear_rhs(rab, rcb, e, omega, rates):
    g, gab, dab, dac = rates[0], rates[1], rates[5], rates[6]
    d_ab = -(gab + 1j * dab) * rab + 1j * g * e + 1j * omega * rcb
    d_cb = -1j * (dab - dac) * rcb + 1j * omega * rab
    return d_ab, d_cb


@numba.njit(cache=True)
def _full_rhs_array(raa, rbb, rcc, rab, rac, rcb, e, omega, rates):
    n = raa.shape[0]
    out_p = np.empty((3, n))
    out_c = np.empty((3, n), dtype=np.complex128)
    for i in range(n):
        d = full_rhs(raa[i], rbb[i], rcc[i], rab[i], rac[i], rcb[i], e[i], omega[i], rates)
        out_p[0, i], out_p[1, i], out_p[2, i] = d[0], d[1], d[2]
        out_c[0, i], out_c[1, i], out_c[2, i] = d[3], d[4], d[5]
    return out_p, out_c


def _flat(x, n, dtype):
    return np.ascontiguousarray(np.broadcast_to(np.asarray(x, dtype=dtype), (n,)))


def bloch_rhs_full(
    atom: AtomState, efield_local, omega, params: PhysicalParams
) -> AtomState:
    """Time derivative of every density-matrix component.

    Accepts scalars or equally shaped arrays; the result has the broadcast
    shape of the inputs.
    """
    shape = np.broadcast(
        atom.rho_aa, atom.rho_bb, atom.rho_cc, atom.rho_ab, atom.rho_ac, atom.rho_cb,
        efield_local, omega,
    ).shape
    n = int(np.prod(shape))
    pops, cohs = _full_rhs_array(
        _flat(atom.rho_aa, n, float), _flat(atom.rho_bb, n, float), _flat(atom.rho_cc, n, float),
        _flat(atom.rho_ab, n, complex), _flat(atom.rho_ac, n, complex),
        _flat(atom.rho_cb, n, complex), _flat(efield_local, n, complex),
        _flat(omega, n, float), rate_vector(params),
    )
    parts = [pops[0], pops[1], pops[2], cohs[0], cohs[1], cohs[2]]
    if shape == ():
        return AtomState(*(p[0] for p in parts))
    return AtomState(*(p.reshape(shape) for p in parts))


def bloch_rhs_linear(
    atom: AtomState, efield_local, omega, params: PhysicalParams
) -> AtomState:
    """Weak-probe derivative: rho_bb = 1 frozen, only rho_ab and rho_cb evolve."""
    g = params.g
    rab, rcb = np.asarray(atom.rho_ab), np.asarray(atom.rho_cb)
    d_ab = (
        -(params.gamma_ab + 1j * params.delta_ab) * rab
        + 1j * g * np.asarray(efield_local)
        + 1j * np.asarray(omega) * rcb
    )
    d_cb = -1j * (params.delta_ab - params.delta_ac) * rcb + 1j * np.asarray(omega) * rab
    zero = np.zeros(np.shape(d_ab))
    return AtomState(zero, zero.copy(), zero.copy(), d_ab, zero + 0j, d_cb)


class SingularResponse(ArithmeticError):
    """The steady-state weak-probe response has a pole at this detuning."""


def steady_state_susceptibility(
    params: PhysicalParams, omega: float, probe_detuning: float
) -> complex:
    """Steady-state rho_ab per unit g*E of the weak-probe equations.

    ``probe_detuning`` plays the role of delta_ab; delta_ac is taken from
    ``params``.  The bare two-level limit Omega = 0 is handled separately.
    """
    gamma = params.gamma_ab
    one_photon = gamma + 1j * probe_detuning
    if omega == 0:
        if one_photon == 0:
            raise SingularResponse(f"pole at probe detuning {probe_detuning!r}")
        return 1j / one_photon
    raman = 1j * (probe_detuning - params.delta_ac)
    denom = one_photon * raman + omega**2
    if denom == 0:
        raise SingularResponse(f"pole at probe detuning {probe_detuning!r}")
    return 1j * raman / denom
