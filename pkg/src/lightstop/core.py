"""Physical parameters, the spatial grid and CSV output.

All quantities are dimensionless.  With the defaults ``g_sqrt_n = 1`` and
``c_light = 1`` times are measured in units of 1/(g sqrt(N)) and lengths in
units of c/(g sqrt(N)).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class ConfigError(ValueError):
    """Invalid parameter, malformed configuration or violated invariant."""


def _require_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ConfigError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class PhysicalParams:
    """Rates, detunings and couplings of the Lambda system.

    ``delta_two_photon`` is the detuning seen by the dark-state polariton.  For
    the carrier-absorbed equations it equals ``delta_ac - delta_ab``; use
    :meth:`with_two_photon_detuning` to change both consistently.
    """

    gamma_ab: float
    g_sqrt_n: float = 1.0
    gamma_a_to_b: float = 1.0
    gamma_a_to_c: float = 1.0
    gamma_ac: float = 1.0
    delta_ab: float = 0.0
    delta_ac: float = 0.0
    delta_two_photon: float = 0.0
    c_light: float = 1.0
    n_atoms: float = 1.0

    def __post_init__(self) -> None:
        for name in (
            "gamma_ab", "g_sqrt_n", "gamma_a_to_b", "gamma_a_to_c", "gamma_ac",
            "delta_ab", "delta_ac", "delta_two_photon", "c_light", "n_atoms",
        ):
            _require_finite(name, getattr(self, name))
        for name in ("gamma_ab", "gamma_a_to_b", "gamma_a_to_c", "gamma_ac"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be non-negative")
        # g_sqrt_n = 0 is accepted as "atoms decoupled from the probe".
        if self.g_sqrt_n < 0:
            raise ConfigError("g_sqrt_n must be non-negative")
        if self.c_light <= 0:
            raise ConfigError("c_light must be positive")
        if self.n_atoms <= 0:
            raise ConfigError("n_atoms must be positive")
        mismatch = abs((self.delta_ac - self.delta_ab) - self.delta_two_photon)
        scale = max(1.0, abs(self.delta_ac), abs(self.delta_ab))
        if mismatch > 1e-12 * scale:
            raise ConfigError(
                "delta_two_photon must equal delta_ac - delta_ab "
                f"({self.delta_two_photon!r} != {self.delta_ac - self.delta_ab!r})"
            )

    @property
    def gamma_a(self) -> float:
        return self.gamma_a_to_b + self.gamma_a_to_c

    @property
    def g(self) -> float:
        """Single-atom coupling g = g sqrt(N) / sqrt(N)."""
        return self.g_sqrt_n / math.sqrt(self.n_atoms)

    @property
    def sqrt_n(self) -> float:
        return math.sqrt(self.n_atoms)

    def with_two_photon_detuning(self, delta: float) -> "PhysicalParams":
        """Copy with the polariton detuning set to ``delta`` (via delta_ac)."""
        from dataclasses import replace

        return replace(self, delta_two_photon=delta, delta_ac=self.delta_ab + delta)


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on [z_min, z_max); sample n_points wraps to 0."""

    z_min: float = 0.0
    z_max: float = 200.0
    n_points: int = 10240

    def __post_init__(self) -> None:
        _require_finite("z_min", self.z_min)
        _require_finite("z_max", self.z_max)
        if int(self.n_points) != self.n_points or self.n_points < 8:
            raise ConfigError("n_points must be an integer >= 8")
        if not self.z_max > self.z_min:
            raise ConfigError("z_max must exceed z_min")

    @property
    def length(self) -> float:
        return self.z_max - self.z_min

    @property
    def dz(self) -> float:
        return self.length / self.n_points

    @property
    def z(self) -> np.ndarray:
        return self.z_min + self.dz * np.arange(self.n_points)

    @property
    def k(self) -> np.ndarray:
        """Angular wavenumbers in numpy FFT order."""
        return 2 * np.pi * np.fft.fftfreq(self.n_points, d=self.dz)

    def check(self, *arrays: np.ndarray) -> None:
        for a in arrays:
            if np.shape(a) != (self.n_points,):
                raise ValueError(
                    f"array of shape {np.shape(a)} does not match grid of {self.n_points} points"
                )

    def integrate(self, values: np.ndarray) -> float:
        """Periodic trapezoid rule, dz * sum(values)."""
        return float(self.dz * np.sum(values))


@dataclass(frozen=True)
class InputPulseSpec:
    """Gaussian probe envelope ``amplitude * exp(-(z - z0)**2 / (4 sigma_z**2))``.

    ``sigma_z`` is the rms width of the intensity profile |E|^2.
    """

    z0: float = 50.0
    sigma_z: float = 5.0
    amplitude: float = 1e-3
    shape: str = "gaussian"

    def __post_init__(self) -> None:
        for name in ("z0", "sigma_z", "amplitude"):
            _require_finite(name, getattr(self, name))
        if self.shape != "gaussian":
            raise ConfigError(f"unsupported pulse shape {self.shape!r}")
        if self.sigma_z <= 0:
            raise ConfigError("sigma_z must be positive")
        if self.amplitude < 0:
            raise ConfigError("amplitude must be non-negative")

    def profile(self, z: np.ndarray) -> np.ndarray:
        return self.amplitude * np.exp(-((z - self.z0) ** 2) / (4 * self.sigma_z**2)) + 0j


def format_number(x: float) -> str:
    return f"{x:.16e}"


def write_csv(
    rows: Iterable[Sequence[float]], path: str | Path, header: Sequence[str]
) -> None:
    """Write ``rows`` under ``header`` with 17 significant digits, LF endings."""
    header = list(header)
    lines = [",".join(header)]
    for i, row in enumerate(rows):
        if len(row) != len(header):
            raise ValueError(
                f"row {i} has {len(row)} values, header has {len(header)} columns"
            )
        lines.append(",".join(format_number(float(v)) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_csv(path: str | Path) -> tuple[list[str], np.ndarray]:
    """Read a file written by :func:`write_csv` back into (header, 2-D array)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        data = [[float(v) for v in row] for row in reader]
    return header, np.array(data, dtype=float).reshape(len(data), len(header))
