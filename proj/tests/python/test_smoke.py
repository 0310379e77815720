import json
import math

import numpy as np
import pytest

import amhd


def small_config(tmp_path, **extra):
    cfg = {
        "grid": {"n1": 16, "n2": 16, "n3": 16},
        "dt": 1e-3,
        "t_end": 0.01,
        "sample_every": 5,
        "init": {"seed": 3, "epsilon": 1e-2},
        "outputs": str(tmp_path / "out"),
    }
    cfg.update(extra)
    return cfg


def test_normalize_fills_defaults(tmp_path):
    cfg = amhd.normalize_config(small_config(tmp_path))
    assert cfg["dissipation"]["alpha"] == 1.0
    assert cfg["nonlinear_form"] == "flux"


def test_bad_config_raises(tmp_path):
    with pytest.raises(ValueError):
        amhd.normalize_config(small_config(tmp_path, dt=-1.0))
    with pytest.raises(ValueError):
        amhd.normalize_config(small_config(tmp_path, bogus=1))


def test_run_and_resume(tmp_path):
    cfg = small_config(tmp_path, checkpoint_every=5)
    summary = amhd.run(cfg)
    assert summary["steps"] == 10
    assert summary["blow_up"] is None
    rows = amhd.read_diagnostics(str(tmp_path / "out" / "diagnostics.csv"))
    assert [r["time"] for r in rows] == pytest.approx([0.0, 0.005, 0.01])
    assert max(r["div_residual_u"] for r in rows) < 1e-10

    resumed = amhd.resume(str(tmp_path / "out" / "checkpoint_00000005"))
    assert resumed["final"]["energy_E"] == summary["final"]["energy_E"]


def test_linear_validate():
    r = amhd.linear_validate(n=16, modes=10, band=3, t_end=0.1)
    assert r["max_error"] < 1e-8


def test_inequalities_hold():
    reports = amhd.verify_inequalities(trials=27, seed=2, n=16)
    names = [r["name"] for r in reports]
    assert "anisotropic_interpolation" in names
    assert all(r["violations"] == 0 for r in reports)


def test_sobolev_norm_single_mode():
    n = 16
    x = 2 * math.pi * np.arange(n) / n
    X, Y, Z = np.meshgrid(x, x, x, indexing="ij")
    f = np.sin(2 * X)
    # |f|_L2^2 = (2 pi)^3 / 2, order-1 weight 1 + 2^2
    expected = math.sqrt((2 * math.pi) ** 3 / 2 * 5)
    assert amhd.sobolev_norm(f, 1) == pytest.approx(expected, rel=1e-12)
    with pytest.raises(ValueError):
        amhd.sobolev_norm(np.zeros((4, 4)), 1)


def test_config_file_path(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(small_config(tmp_path)))
    assert amhd.normalize_config(str(path))["dt"] == 1e-3
    with pytest.raises(OSError):
        amhd.normalize_config(str(tmp_path / "missing.json"))
