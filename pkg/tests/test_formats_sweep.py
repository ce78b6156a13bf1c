import json

import numpy as np
import pytest
from hypothesis import given

from fidqsl import formats
from fidqsl.qsl import QuadratureConfig
from fidqsl.sweep import COLUMNS, ConfigError, SweepConfig, read_csv, rows_to_csv, run_sweep
from strategies import densities


@given(densities())
def test_state_json_roundtrip(rho):
    back = formats.state_from_json(json.loads(json.dumps(formats.state_to_json(rho))))
    assert np.array_equal(back, rho)


@pytest.mark.parametrize("obj", [
    {"dim": 2},
    {"dim": 2, "entries": [[1, 0]] * 3},
    {"dim": "2", "entries": [[1, 0]] * 4},
    {"dim": 1, "entries": [[1, 0, 0]]},
    [1, 2],
])
def test_state_json_rejects(obj):
    with pytest.raises(formats.StateFileError):
        formats.state_from_json(obj)


def test_load_missing_state(tmp_path):
    with pytest.raises(formats.StateFileError):
        formats.load_state(tmp_path / "nope.json")


def test_save_load(tmp_path):
    rho = np.array([[0.5, 0.25j], [-0.25j, 0.5]])
    formats.save_state(tmp_path / "s.json", rho)
    assert np.array_equal(formats.load_state(tmp_path / "s.json"), rho)


def test_fmt_twelve_significant_digits():
    assert formats.fmt(1 / 3) == "0.333333333333"
    assert formats.fmt(2.0) == "2"
    assert formats.fmt(1.5e-20) == "1.5e-20"
    assert formats.fmt(-0.0) == "0"


def test_config_from_dict_grid_spec():
    cfg = SweepConfig.from_dict({"lambda": 2.0, "gamma0_grid": {"min": 0.1, "max": 10, "count": 5},
                                 "gamma0_extra": [0.5], "r_values": [1.0, 0.5, 0.5]})
    assert cfg.lam == 2.0
    assert len(cfg.gamma0_grid) == 6
    assert cfg.gamma0_grid == sorted(cfg.gamma0_grid)
    assert cfg.r_values == [0.5, 1.0]


def test_config_default_grid_scales_with_lambda():
    cfg = SweepConfig.from_dict({"lambda": 20.0})
    assert cfg.gamma0_grid[0] == pytest.approx(1.0)
    assert cfg.gamma0_grid[-1] == pytest.approx(400.0)


@pytest.mark.parametrize("obj", [
    {"bogus": 1},
    {"tau": -1},
    {"r_values": [1.5]},
    {"gamma0_grid": [0.0, 1.0]},
    {"gamma0_grid": {"min": 1}},
    {"quadrature": {"n_points": 10}},
    [],
])
def test_config_rejects(obj):
    with pytest.raises(ConfigError):
        SweepConfig.from_dict(obj)


def test_shipped_configs_load(request):
    for name in ("sweep_lambda1", "sweep_lambda20"):
        cfg = SweepConfig.load(request.config.rootpath / "configs" / f"{name}.json")
        assert cfg.r_values == [0.1, 0.5, 0.9, 1.0]


def _small_cfg():
    return SweepConfig(gamma0_grid=[0.1, 1.0, 5.0], r_values=[0.5, 1.0],
                       quadrature=QuadratureConfig(n_points=201))


def test_sweep_rows_and_threads_agree():
    cfg = _small_cfg()
    serial = rows_to_csv(run_sweep(cfg, threads=1))
    threaded = rows_to_csv(run_sweep(cfg, threads=4))
    assert serial == threaded
    rows = read_csv(serial)
    assert len(rows) == 6
    assert list(rows[0]) == list(COLUMNS)
    assert [r["r"] for r in rows] == [0.5] * 3 + [1.0] * 3


def test_csv_error_column_only_when_needed():
    rows = [{"gamma0": 1.0, "r": 0.5, "f_tau": 1.0, "x_tau": 1.0, "tau_qsl": 0.0,
             "tau_qsl_generic_f1": 0.0, "quad_error": 0.0}]
    assert "error" not in rows_to_csv(rows).splitlines()[0].split(",")
    rows.append({"gamma0": 2.0, "r": 0.5, "error": "NumericalError: boom, bad"})
    text = rows_to_csv(rows)
    assert text.splitlines()[0].endswith(",error")
    back = read_csv(text)
    assert back[1]["tau_qsl"] is None
    assert "boom, bad" in back[1]["error"]
