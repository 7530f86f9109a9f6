"""Command-line front end: ``lightstop simulate | sweep | linewidth``.

Exit codes: 0 success, 1 configuration or usage error, 2 numerical failure,
3 I/O failure. Data files are plain CSV with fixed formatting; run metadata
(config digest, tool version, arguments) goes to a ``.meta.json`` sidecar so
the CSVs themselves stay diffable.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from . import analytic
from .bloch import AtomState
from .config import SimulationConfig, dump_config, load_config
from .core import ConfigError, write_csv
from .polariton import PolaritonField, from_polaritons, mixing_angle, to_polaritons
from .propagation import (
    DIAGNOSTICS_HEADER,
    SNAPSHOT_HEADER,
    MediumState,
    NumericalAbort,
    initialize_state,
    integrated_output_intensity,
    run,
    snapshot_rows,
)

log = logging.getLogger("lightstop")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3

SWEEP_HEADER = ("delta", "numeric", "normalized", "analytic", "relative_gap")
LINEWIDTH_HEADER = ("delta", "loss_factor", "eps1", "eps2", "gamma_T", "delta_2ph")


class _Failure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for numerical failure here
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _overrides(pairs: list[str]) -> dict[str, str]:
    out = {}
    for item in pairs:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise _Failure(EXIT_CONFIG, f"--set expects key=value, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def _load(path: str, pairs: list[str]) -> SimulationConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Failure(EXIT_CONFIG, f"cannot read config {path}: {exc.strerror or exc}") from exc
    try:
        return load_config(text, _overrides(pairs))
    except ConfigError as exc:
        raise _Failure(EXIT_CONFIG, f"{path}: {exc}") from exc


def _write_meta(target: Path, command: str, config: SimulationConfig, arguments: dict) -> None:
    meta = {
        "tool": "lightstop",
        "version": __version__,
        "command": command,
        "config_sha256": config.digest(),
        "arguments": arguments,
    }
    target.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _io(action, *args):
    try:
        return action(*args)
    except OSError as exc:
        raise _Failure(EXIT_IO, f"write failed: {exc}") from exc


def parse_deltas(spec: str) -> list[float]:
    """``start:stop:step`` (stop inclusive) or a comma-separated list."""
    try:
        if ":" in spec:
            start, stop, stride = (float(x) for x in spec.split(":"))
            if not stride > 0 or stop < start:
                raise ValueError
            n = int(math.floor((stop - start) / stride + 1e-9)) + 1
            values = [round(start + i * stride, 12) for i in range(n)]
        else:
            values = [float(x) for x in spec.split(",") if x.strip()]
    except ValueError:
        raise _Failure(EXIT_CONFIG, f"bad delta list {spec!r}") from None
    if not values or not all(math.isfinite(v) for v in values):
        raise _Failure(EXIT_CONFIG, f"delta list {spec!r} must be non-empty and finite")
    return values


# --------------------------------------------------------------------- simulate


def _analytic_state(psi, config: SimulationConfig, t: float) -> tuple[MediumState, PolaritonField]:
    theta = float(mixing_angle(config.schedule, t).theta)
    pol = PolaritonField(psi, np.zeros_like(psi), theta)
    e, rcb = from_polaritons(pol, config.grid, config.params, config.k_probe)
    atoms = AtomState.ground(config.grid.n_points)
    atoms.rho_cb = rcb
    return MediumState(e, atoms, t), pol


def cmd_simulate(args) -> int:
    config = _load(args.config, args.set)
    out = Path(args.out)
    _io(lambda: out.mkdir(parents=True, exist_ok=True))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", analytic.ExpansionWarning)
        flags = analytic.diagnostics(config).flags
    for flag in flags:
        log.warning(flag)
    try:
        record = run(config)
    except NumericalAbort as exc:
        raise _Failure(EXIT_NUMERIC, str(exc)) from exc

    start = initialize_state(config)
    theta0 = float(mixing_angle(config.schedule, config.t_start).theta)
    psi0 = to_polaritons(
        start.efield, start.atoms.rho_cb, theta0, config.grid, config.params, config.k_probe
    ).psi
    z = config.grid.z
    delta = config.params.delta_two_photon
    written = []
    for t, state, pol in zip(record.times, record.states, record.polaritons):
        name = config.snapshot_pattern.format(t=t)
        _io(write_csv, snapshot_rows(state, pol, z), out / name, SNAPSHOT_HEADER)
        psi = analytic.second_order_evolve(
            psi0, config.grid, delta, config.schedule, config.params, config.t_start, t
        )
        a_state, a_pol = _analytic_state(psi, config, t)
        _io(write_csv, snapshot_rows(a_state, a_pol, z), out / f"analytic_{name}", SNAPSHOT_HEADER)
        written += [name, f"analytic_{name}"]
        log.info("t = %g: integrated |Psi|^2 = %.6e", t, integrated_output_intensity(record, t))
    diag = record.diagnostics
    rows = np.column_stack([diag[k] for k in DIAGNOSTICS_HEADER])
    _io(write_csv, rows, out / config.diagnostics_file, DIAGNOSTICS_HEADER)
    written.append(config.diagnostics_file)
    _io((out / "config.resolved").write_text, dump_config(config), "utf-8")
    _io(
        _write_meta,
        out / "run.meta.json",
        "simulate",
        config,
        {"config": args.config, "set": list(args.set), "files": written},
    )
    print(f"wrote {len(written)} files to {out}")
    return EXIT_OK


# ------------------------------------------------------------------------ sweep


def _sweep_point(job: tuple[SimulationConfig, float]) -> float:
    config, delta = job
    try:
        record = run(config.with_two_photon_detuning(delta))
    except NumericalAbort as exc:
        log.error("delta = %g failed: %s", delta, exc)
        return math.nan
    return integrated_output_intensity(record, config.t_end)


def sweep(
    config: SimulationConfig, deltas: list[float], jobs: int = 1, normalize_at_zero: bool = True
) -> np.ndarray:
    """Integrated output intensity for each delta; rows follow SWEEP_HEADER."""
    if config.t_end not in config.record_times:
        config = replace(config, record_times=tuple(config.record_times) + (config.t_end,))
    points = list(deltas)
    extra = normalize_at_zero and 0.0 not in points
    if extra:
        points.append(0.0)
    jobs_list = [(config, d) for d in points]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            numeric = list(pool.map(_sweep_point, jobs_list))
    else:
        numeric = [_sweep_point(j) for j in jobs_list]
    reference = numeric[points.index(0.0)] if normalize_at_zero else 1.0
    if extra:
        numeric.pop()
    T = analytic.transfer_time(config.schedule, config.t_start, config.t_end)
    model = analytic.loss_model(deltas, T, config.params, analytic.INTENSITY_EXPONENT)
    numeric = np.asarray(numeric)
    normalized = numeric / reference
    with np.errstate(invalid="ignore"):
        gap = (normalized - model) / model
    return np.column_stack([np.asarray(deltas, dtype=float), numeric, normalized, model, gap])


def cmd_sweep(args) -> int:
    config = _load(args.config, args.set)
    deltas = parse_deltas(args.deltas)
    if args.jobs < 1:
        raise _Failure(EXIT_CONFIG, "--jobs must be at least 1")
    rows = sweep(config, deltas, args.jobs, not args.no_normalize)
    out = Path(args.out)
    _io(write_csv, rows, out, SWEEP_HEADER)
    _io(
        _write_meta,
        out.with_name(out.name + ".meta.json"),
        "sweep",
        config,
        {"config": args.config, "set": list(args.set), "deltas": deltas,
         "normalize_at_zero": not args.no_normalize},
    )
    for row in rows:
        print(" ".join(f"{x:.6g}" for x in row))
    if np.isnan(rows[:, 1]).any():
        return EXIT_NUMERIC
    return EXIT_OK


# -------------------------------------------------------------------- linewidth


def linewidth_rows(config: SimulationConfig, deltas: list[float]) -> tuple[float, np.ndarray]:
    T = analytic.transfer_time(config.schedule, config.t_start, config.t_end)
    if T <= analytic.QUAD_TOL:
        raise ValueError(f"linewidth undefined: transfer time T = {T:.3g} vanishes")
    p = config.params
    d2ph = analytic.two_photon_linewidth(p, T)
    eps1 = 1.0 / (p.g_sqrt_n * T)
    rows = [
        (d, math.exp(-p.gamma_ab * d**2 * T / p.g_sqrt_n**2), eps1, abs(d) / p.g_sqrt_n, p.gamma_ab * T, d2ph)
        for d in deltas
    ]
    return T, np.array(rows, dtype=float).reshape(-1, len(LINEWIDTH_HEADER))


def cmd_linewidth(args) -> int:
    config = _load(args.config, args.set)
    deltas = args.delta or [config.params.delta_two_photon]
    try:
        T, rows = linewidth_rows(config, deltas)
    except ValueError as exc:
        raise _Failure(EXIT_CONFIG, str(exc)) from exc
    p = config.params
    print(f"T = {T:.12g}")
    print(f"gamma_T = {p.gamma_ab * T:.12g}")
    print(f"eps1 = {rows[0, 2]:.12g}")
    print(f"delta_2ph = {rows[0, 5]:.12g}")
    for row in rows:
        print(f"delta = {row[0]:.6g}: loss_factor = {row[1]:.12g}")
    if args.out:
        out = Path(args.out)
        _io(write_csv, rows, out, LINEWIDTH_HEADER)
        _io(
            _write_meta,
            out.with_name(out.name + ".meta.json"),
            "linewidth",
            config,
            {"config": args.config, "set": list(args.set), "deltas": list(deltas)},
        )
    return EXIT_OK


# ------------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="lightstop",
        description="Stopped-light simulations and the perturbative dark-state polariton theory.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--config", required=True, help="key = value configuration file")
        p.add_argument(
            "--set", action="append", default=[], metavar="KEY=VALUE",
            help="override one configuration key (repeatable)",
        )

    p = sub.add_parser("simulate", help="run one storage-and-release simulation")
    common(p)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="released intensity against two-photon detuning")
    common(p)
    p.add_argument("--deltas", default="0:0.6:0.05", help="start:stop:step or a comma list")
    p.add_argument("--out", required=True, help="output CSV file")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (one delta each)")
    p.add_argument("--no-normalize", action="store_true", help="do not divide by the delta = 0 value")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("linewidth", help="transfer time, expansion parameters and loss factors")
    common(p)
    p.add_argument("--delta", type=float, action="append", help="detuning to report (repeatable)")
    p.add_argument("--out", help="optional CSV report")
    p.set_defaults(func=cmd_linewidth)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    try:
        return args.func(args)
    except _Failure as exc:
        print(f"lightstop: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
