import json
import math
import os
import pathlib

import numpy as np
import pytest

import uftlqr

ROOT = pathlib.Path(os.environ.get("UFTLQR_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))


def test_single_mode_contour():
    x, t = 1.0, 0.5
    u, phi = uftlqr.contour_point(0.0, math.pi, 1.0, x, t)
    r2 = math.sqrt(2.0)
    assert abs(u - (-(r2 - 1.0) * math.exp(-r2 * t) * math.sin(x))) < 1e-10
    assert abs(phi - math.exp(-r2 * t) * math.sin(x)) < 1e-10


def test_series_matches_contour():
    u, _ = uftlqr.contour_point(5.0, math.pi, 2.0, 0.7, 0.3)
    assert abs(uftlqr.series_control(5.0, math.pi, 2.0, 0.7, 0.3) - u.real) < 1e-8


def test_kernel_matrix_shapes():
    x, toeplitz, hankel, combined = uftlqr.kernel_matrix(0.0, math.pi, 10, 21)
    assert len(x) == 21
    assert toeplitz.shape == (21, 21)
    assert np.allclose(combined, (toeplitz - hankel) / (2 * math.pi))
    assert np.allclose(toeplitz, toeplitz.T)


def test_fd_gain_symmetric():
    _, K, residual = uftlqr.fd_gain(0.0, math.pi, 31)
    assert np.allclose(K, K.T)
    assert residual < 1e-9


def test_run_heat_config(tmp_path):
    cfg = json.loads((ROOT / "configs" / "heat_single_mode.json").read_text())
    cfg["methods"] = ["series", "contour"]
    report = uftlqr.run(cfg, tmp_path)
    assert report["failures"] == []
    assert (tmp_path / "u_contour.csv").exists()


def test_bad_config_raises():
    cfg = json.loads((ROOT / "configs" / "heat_single_mode.json").read_text())
    cfg["equation"]["c"] = -2.0
    with pytest.raises(uftlqr.UftlqrError, match="equation.c"):
        uftlqr.normalize_config(cfg)
