from __future__ import annotations

import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lightstop import (
    ConfigError,
    ControlSchedule,
    Grid,
    InputPulseSpec,
    PhysicalParams,
    dump_config,
    load_config,
    write_csv,
)
from lightstop.config import SimulationConfig, _KEYS
from lightstop.core import read_csv


def test_reference_document_uses_ratio_units() -> None:
    cfg = load_config("gamma_ab = 1.0\ng_sqrt_n = 1.0\ndelta_two_photon = 0.2\n")
    p = cfg.params
    assert p.gamma_ab / p.g_sqrt_n == 1.0
    assert p.delta_two_photon / p.g_sqrt_n == 0.2
    # resonant probe: the two-photon detuning sits on the control transition
    assert p.delta_ab == 0.0 and p.delta_ac == 0.2


def test_negative_dt_rejected() -> None:
    with pytest.raises(ConfigError, match="dt must be positive"):
        load_config("gamma_ab = 1.0\ndt = -0.1\n")


def test_missing_gamma_named() -> None:
    with pytest.raises(ConfigError, match="gamma_ab"):
        load_config("g_sqrt_n = 1.0\n")


def test_malformed_line_reports_line_number() -> None:
    with pytest.raises(ConfigError, match="line 3"):
        load_config("gamma_ab = 1\n# comment\nthis is not a pair\n")


def test_unparseable_value_reports_line_number() -> None:
    with pytest.raises(ConfigError, match="line 2.*g_sqrt_n"):
        load_config("gamma_ab = 1\ng_sqrt_n = fast\n")


def test_unknown_and_duplicate_keys_rejected() -> None:
    with pytest.raises(ConfigError, match="unknown key 'gama_ab'"):
        load_config("gamma_ab = 1\ngama_ab = 2\n")
    with pytest.raises(ConfigError, match="duplicate"):
        load_config("gamma_ab = 1\ngamma_ab = 2\n")


def test_comments_and_nested_keys() -> None:
    text = """
    # reference storage run
    gamma_ab = 1.0   # gamma / g sqrt(N)
    schedule.kind = constant
    schedule.cot_theta = 2.0
    pulse.sigma_z = 3
    record_times = 0, 10
    mode = weak-probe
    t_end = 10
    """
    cfg = load_config(text)
    assert cfg.schedule.kind == "constant" and cfg.schedule.cot_theta == 2.0
    assert cfg.pulse.sigma_z == 3.0
    assert cfg.record_times == (0.0, 10.0)
    assert cfg.mode == "weak-probe"


def test_inconsistent_detunings_rejected() -> None:
    with pytest.raises(ConfigError, match="delta_two_photon"):
        load_config("gamma_ab = 1\ndelta_ac = 0.3\ndelta_two_photon = 0.2\n")


def test_override_of_two_photon_detuning_rederives_delta_ac() -> None:
    cfg = load_config("gamma_ab = 1\ndelta_ac = 0.3\n", overrides={"delta_two_photon": "0.5"})
    assert cfg.params.delta_ac == 0.5


def test_dt_must_match_cell_transit_time() -> None:
    with pytest.raises(ConfigError, match="shift advection"):
        load_config("gamma_ab = 1\ndt = 0.01\n")


def test_stability_guard() -> None:
    # h = dt / 2 = 0.0098 at one substep; h * Omega(0) ~ 0.93
    with pytest.raises(ConfigError, match="explicit step too large"):
        load_config("gamma_ab = 1\nlocal_substeps = 1\n")


def test_pulse_must_fit_grid() -> None:
    with pytest.raises(ConfigError, match="pulse support"):
        load_config("gamma_ab = 1\npulse.z0 = 10\n")


def test_params_invariants() -> None:
    with pytest.raises(ConfigError):
        PhysicalParams(gamma_ab=1.0, gamma_a_to_b=-1.0)
    with pytest.raises(ConfigError):
        PhysicalParams(gamma_ab=1.0, n_atoms=0.0)
    with pytest.raises(ConfigError):
        PhysicalParams(gamma_ab=math.nan)
    with pytest.raises(ConfigError):
        Grid(0.0, 1.0, 4)
    p = PhysicalParams(gamma_ab=1.0, gamma_a_to_b=0.25, gamma_a_to_c=0.5)
    assert p.gamma_a == 0.75


def test_grid_geometry() -> None:
    g = Grid(0.0, 160.0, 8192)
    assert g.dz == 160.0 / 8192
    assert g.z[0] == 0.0 and g.z[-1] == 160.0 - g.dz
    assert np.isclose(g.k[1], 2 * np.pi / 160.0)


@pytest.mark.filterwarnings("ignore:probe is not weak")
@settings(max_examples=40, deadline=None)
@given(
    gamma=st.floats(min_value=0.0, max_value=5.0),
    delta=st.floats(min_value=-2.0, max_value=2.0),
    sigma=st.floats(min_value=0.5, max_value=5.0),
    amp=st.floats(min_value=0.0, max_value=1e-3),
    cot=st.floats(min_value=0.0, max_value=40.0),
)
def test_round_trip_is_bit_exact(gamma, delta, sigma, amp, cot) -> None:
    cfg = SimulationConfig(
        params=PhysicalParams(gamma_ab=gamma, gamma_ac=gamma).with_two_photon_detuning(delta),
        grid=Grid(0.0, 80.0, 1024),
        pulse=InputPulseSpec(z0=40.0, sigma_z=sigma, amplitude=amp),
        schedule=ControlSchedule.constant(cot),
        t_end=10.0,
        record_times=(0.0, 10.0),
        local_substeps=4,
    )
    again = load_config(dump_config(cfg))
    assert again == cfg
    assert dump_config(again) == dump_config(cfg)


def test_round_trip_piecewise_schedule() -> None:
    text = (
        "gamma_ab = 1\nschedule.kind = piecewise-linear-in-cot\n"
        "schedule.times = 0, 50, 100\nschedule.cot_values = 10, 0.1, 10\n"
        "t_end = 100\nrecord_times = 0, 100\nlocal_substeps = 1\n"
    )
    cfg = load_config(text)
    assert load_config(dump_config(cfg)) == cfg


def test_every_key_serialised() -> None:
    text = dump_config(load_config("gamma_ab = 1"))
    keys = [line.split("=")[0].strip() for line in text.splitlines()]
    assert keys == list(_KEYS)


def test_write_csv_single_row(tmp_path: Path) -> None:
    path = tmp_path / "out.csv"
    write_csv([(0, 1.0)], path, header=("t", "intensity"))
    raw = path.read_bytes()
    assert raw == b"t,intensity\n0.0000000000000000e+00,1.0000000000000000e+00\n"


def test_write_csv_header_only(tmp_path: Path) -> None:
    path = tmp_path / "out.csv"
    write_csv([], path, header=("t", "intensity"))
    assert path.read_text() == "t,intensity\n"


def test_write_csv_arity_mismatch(tmp_path: Path) -> None:
    with pytest.raises(ValueError, match="3 values"):
        write_csv([(1.0, 2.0, 3.0)], tmp_path / "bad.csv", header=("t", "intensity"))


def test_csv_round_trip_is_exact(tmp_path: Path) -> None:
    rng = np.random.default_rng(3)
    data = rng.normal(size=(20, 3)) * 10.0 ** rng.integers(-30, 30, size=(20, 3))
    path = tmp_path / "x.csv"
    write_csv(data, path, header=("a", "b", "c"))
    header, back = read_csv(path)
    assert header == ["a", "b", "c"]
    assert np.array_equal(back, data)
