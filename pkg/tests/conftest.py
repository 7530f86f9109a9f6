"""Shared, memoised simulation runs.

The long reference runs (about a minute each at default resolution) are
reused across test modules, so each configuration is integrated only once
per session.
"""

from __future__ import annotations

from dataclasses import replace
from functools import lru_cache

from lightstop import PhysicalParams
from lightstop.config import SimulationConfig
from lightstop.propagation import TrajectoryRecord, run


@lru_cache(maxsize=None)
def cached_run(config: SimulationConfig) -> TrajectoryRecord:
    return run(config)


def reference_config(delta: float = 0.0, **changes) -> SimulationConfig:
    """Default storage-and-release setup with gamma = g sqrt(N) = 1."""
    cfg = SimulationConfig(params=PhysicalParams(gamma_ab=1.0).with_two_photon_detuning(delta))
    return replace(cfg, **changes) if changes else cfg


# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def report(number: int, passed: bool, detail: str) -> None:
    ACCEPTANCE[number] = (bool(passed), detail)
    print(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")


def pytest_terminal_summary(terminalreporter) -> None:
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
