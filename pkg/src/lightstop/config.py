"""Flat ``key = value`` configuration documents.

Keys are the snake_case field names of the parameter types.  Nested groups
use a dotted prefix (``pulse.sigma_z``, ``schedule.kind``).  Lists are
comma-separated, booleans are ``true``/``false``, enums are lowercase words.
"""

from __future__ import annotations

import hashlib
import math
import warnings
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .core import ConfigError, Grid, InputPulseSpec, PhysicalParams
from .polariton import ControlSchedule, rabi_frequency

MODES = ("full-bloch", "weak-probe")
STABILITY_LIMIT = 0.5
WEAK_PROBE_RATIO = 0.1


@dataclass(frozen=True)
class SimulationConfig:
    params: PhysicalParams
    grid: Grid = field(default_factory=Grid)
    schedule: ControlSchedule = field(default_factory=ControlSchedule)
    pulse: InputPulseSpec = field(default_factory=InputPulseSpec)
    t_start: float = 0.0
    t_end: float = 150.0
    dt: float | None = None
    mode: str = "full-bloch"
    # RK4 substeps per half step of the local update
    local_substeps: int = 2
    k_probe: float = 0.0
    record_times: tuple[float, ...] = (0.0, 150.0)
    snapshot_pattern: str = "snapshot_t{t:g}.csv"
    diagnostics_file: str = "diagnostics.csv"

    def __post_init__(self) -> None:
        if self.dt is None:
            object.__setattr__(self, "dt", self.grid.dz / self.params.c_light)
        object.__setattr__(self, "record_times", tuple(float(t) for t in self.record_times))
        self.validate()

    @property
    def n_steps(self) -> int:
        return int(round((self.t_end - self.t_start) / self.dt))

    @property
    def rk_step(self) -> float:
        """Step size of the explicit Runge-Kutta substeps."""
        return self.dt / (2 * self.local_substeps)

    def validate(self) -> None:
        p, g = self.params, self.grid
        for name in ("t_start", "t_end", "dt", "k_probe"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")
        if self.dt <= 0:
            raise ConfigError("dt must be positive")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if int(self.local_substeps) != self.local_substeps or self.local_substeps < 1:
            raise ConfigError("local_substeps must be a positive integer")
        if abs(p.c_light * self.dt - g.dz) > 1e-12 * g.dz:
            raise ConfigError(
                f"c_light * dt must equal dz for shift advection "
                f"(c*dt = {p.c_light * self.dt!r}, dz = {g.dz!r})"
            )
        if not self.t_end > self.t_start:
            raise ConfigError("t_end must exceed t_start")
        for t in self.record_times:
            if not (self.t_start <= t <= self.t_end):
                raise ConfigError(f"record time {t} outside [{self.t_start}, {self.t_end}]")
        self.schedule.check_window(self.t_start, self.t_end)
        times = np.linspace(self.t_start, self.t_end, max(self.n_steps, 1) + 1)
        omega_max = float(np.max(rabi_frequency(self.schedule, times, p)))
        fastest = max(
            omega_max, p.gamma_a, p.gamma_ab, p.gamma_ac, abs(p.delta_ab), abs(p.delta_ac),
            abs(p.delta_two_photon),
        )
        if self.rk_step * fastest > STABILITY_LIMIT:
            raise ConfigError(
                f"explicit step too large: h * max rate = {self.rk_step * fastest:.3g} > "
                f"{STABILITY_LIMIT} (h = dt / (2 local_substeps) = {self.rk_step:.3g}); "
                "refine the grid or raise local_substeps"
            )
        lo = self.pulse.z0 - 5 * self.pulse.sigma_z
        hi = self.pulse.z0 + 5 * self.pulse.sigma_z
        if lo < g.z_min or hi > g.z_max:
            raise ConfigError(
                f"pulse support [{lo}, {hi}] not inside grid [{g.z_min}, {g.z_max}]"
            )
        omega0 = float(rabi_frequency(self.schedule, self.t_start, p))
        if omega0 > 0 and self.pulse.amplitude * p.g_sqrt_n / omega0 > WEAK_PROBE_RATIO:
            warnings.warn(
                "probe is not weak: amplitude * g_sqrt_n / Omega(t_start) = "
                f"{self.pulse.amplitude * p.g_sqrt_n / omega0:.3g}",
                stacklevel=3,
            )

    def with_two_photon_detuning(self, delta: float) -> "SimulationConfig":
        return replace(self, params=self.params.with_two_photon_detuning(delta))

    def digest(self) -> str:
        return hashlib.sha256(dump_config(self).encode("utf-8")).hexdigest()


# key -> (group, field name, kind)
_FLOAT, _INT, _STR, _FLOATS = "float", "int", "str", "floats"

_KEYS: dict[str, tuple[str, str, str]] = {}
for _f in fields(PhysicalParams):
    _KEYS[_f.name] = ("params", _f.name, _FLOAT)
for _name, _kind in (("z_min", _FLOAT), ("z_max", _FLOAT), ("n_points", _INT)):
    _KEYS[_name] = ("grid", _name, _kind)
for _f in fields(InputPulseSpec):
    _KEYS["pulse." + _f.name] = ("pulse", _f.name, _STR if _f.name == "shape" else _FLOAT)
for _f in fields(ControlSchedule):
    _kind = {"kind": _STR, "times": _FLOATS, "cot_values": _FLOATS}.get(_f.name, _FLOAT)
    _KEYS["schedule." + _f.name] = ("schedule", _f.name, _kind)
for _name, _kind in (
    ("t_start", _FLOAT), ("t_end", _FLOAT), ("dt", _FLOAT), ("mode", _STR),
    ("local_substeps", _INT), ("k_probe", _FLOAT), ("record_times", _FLOATS),
    ("snapshot_pattern", _STR), ("diagnostics_file", _STR),
):
    _KEYS[_name] = ("top", _name, _kind)

REQUIRED_KEYS = ("gamma_ab",)


def _convert(key: str, raw: str, kind: str, lineno: int):
    try:
        if kind == _FLOAT:
            return float(raw)
        if kind == _INT:
            value = float(raw)
            if value != int(value):
                raise ValueError(raw)
            return int(value)
        if kind == _FLOATS:
            return tuple(float(x) for x in raw.split(",") if x.strip())
    except ValueError:
        where = f"line {lineno}" if lineno else "override"
        raise ConfigError(f"{where}: cannot parse value {raw!r} for {key}") from None
    return raw


def parse_document(text: str) -> dict[str, tuple[str, int]]:
    """Split a document into ``key -> (raw value, line number)``."""
    entries: dict[str, tuple[str, int]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line.strip()!r}")
        key, value = (part.strip() for part in body.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in entries:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        entries[key] = (value, lineno)
    return entries


def config_from_entries(entries: dict[str, tuple[str, int]]) -> SimulationConfig:
    missing = [k for k in REQUIRED_KEYS if k not in entries]
    if missing:
        raise ConfigError(f"missing required key: {', '.join(missing)}")
    groups: dict[str, dict] = {"params": {}, "grid": {}, "pulse": {}, "schedule": {}, "top": {}}
    for key, (raw, lineno) in entries.items():
        group, name, kind = _KEYS[key]
        groups[group][name] = _convert(key, raw, kind, lineno)

    params = groups["params"]
    delta_ab = params.get("delta_ab", 0.0)
    if "delta_ac" not in params:
        params["delta_ac"] = delta_ab + params.get("delta_two_photon", 0.0)
    if "delta_two_photon" not in params:
        params["delta_two_photon"] = params["delta_ac"] - delta_ab

    return SimulationConfig(
        params=PhysicalParams(**params),
        grid=Grid(**groups["grid"]),
        schedule=ControlSchedule(**groups["schedule"]),
        pulse=InputPulseSpec(**groups["pulse"]),
        **groups["top"],
    )


def load_config(text: str, overrides: dict[str, str] | None = None) -> SimulationConfig:
    """Parse and validate a configuration document.

    ``overrides`` replaces (or adds) raw entries before validation; changing
    ``delta_two_photon`` alone re-derives ``delta_ac``.
    """
    entries = parse_document(text)
    for key, value in (overrides or {}).items():
        if key not in _KEYS:
            raise ConfigError(f"unknown key {key!r}")
        entries[key] = (value, 0)
    if overrides and "delta_two_photon" in overrides and "delta_ac" not in overrides:
        entries.pop("delta_ac", None)
    return config_from_entries(entries)


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, tuple):
        return ", ".join(repr(float(v)) for v in value)
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def dump_config(config: SimulationConfig) -> str:
    """Serialise to a document that :func:`load_config` reads back exactly."""
    lines = []
    for key, (group, name, _) in _KEYS.items():
        source = config if group == "top" else getattr(config, group)
        lines.append(f"{key} = {_fmt(getattr(source, name))}")
    return "\n".join(lines) + "\n"
