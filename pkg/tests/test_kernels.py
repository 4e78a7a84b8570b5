import os
import subprocess
import sys

import numpy as np
import pytest

from indefcrit import _kernels as K

PAIRS = [
    ("radial_power", (4.0,)),
    ("radial_power_hess", (4.0,)),
    ("radial_power", (3.5,)),
    ("radial_logquad", ()),
    ("radial_logquad_hess", ()),
]


@pytest.mark.parametrize("name,extra", PAIRS)
def test_radial_kernels_agree(name, extra, rng):
    u, v = rng.standard_normal((2, 4001)) * np.exp(rng.uniform(-5, 5, 4001))
    u[:3] = 0.0
    v[:2] = 0.0
    a = getattr(K, name + "_np")(u, v, *extra)
    b = getattr(K, name + "_nb")(u, v, *extra)
    for x, y in zip(a, b):
        np.testing.assert_allclose(x, y, rtol=1e-13, atol=1e-300)


@pytest.mark.parametrize("name,extra", [("scalar_power", (4.0,)), ("scalar_power", (3.0,)), ("scalar_logpower", ())])
def test_scalar_kernels_agree(name, extra, rng):
    u = rng.standard_normal(4001) * np.exp(rng.uniform(-5, 5, 4001))
    u[0] = 0.0
    a = getattr(K, name + "_np")(u, *extra)
    b = getattr(K, name + "_nb")(u, *extra)
    for x, y in zip(a, b):
        np.testing.assert_allclose(x, y, rtol=1e-13, atol=1e-300)


def test_shooting_kernels_agree():
    a = K.shoot_rk4_np(0.98, 4.0, 3.14159, 2000)
    b = K.shoot_rk4_nb(0.98, 4.0, 3.14159, 2000)
    np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-15)


def test_env_flag_selects_numpy():
    code = "from indefcrit import _kernels as K; print(K.USE_NUMBA, K.radial_power is K.radial_power_np)"
    env = {**os.environ, "INDEFCRIT_DISABLE_NUMBA": "1"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["False", "True"]
    env["INDEFCRIT_DISABLE_NUMBA"] = "0"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["True", "False"]


@pytest.mark.parametrize("impl", ["np", "nb"])
def test_logpower_primitive_accurate_near_zero(impl):
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 40
    a = np.logspace(-9, 0.7, 300)
    got = getattr(K, "scalar_logpower_" + impl)(a)[0]
    for x, g in zip(a, got):
        X = mp.mpf(float(x))
        ref = 0.5 * (X * X - 1) * mp.log1p(X) - X * X / 4 + X / 2
        assert abs(g - float(ref)) <= 1e-14 * float(ref)
