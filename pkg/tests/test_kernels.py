"""Kernel paths: the compiled and pure-numpy implementations must agree."""

import os
import subprocess
import sys

import numpy as np
import pytest
import scipy.linalg

from mycocat import kernels


@pytest.fixture(scope="module")
def samples():
    rng = np.random.default_rng(321)
    mats = [rng.normal(size=(n, n)) * s for n in (2, 5, 24) for s in (0.05, 0.5, 2.0)]
    return mats


def test_active_path_matches_numpy_path(samples):
    for a in samples:
        active = kernels.expm(a)
        plain = kernels.expm_numpy(a)
        assert np.max(np.abs(active - plain)) < 1e-13 * max(1.0, np.abs(plain).max())


def test_expm_against_scipy(samples):
    for a in samples:
        ours = kernels.expm(a)
        ref = scipy.linalg.expm(a)
        scale = np.abs(ref).max()
        assert np.max(np.abs(ours - ref)) < 1e-12 * max(1.0, scale)


def test_logm_paths_agree():
    rng = np.random.default_rng(11)
    for _ in range(10):
        x = rng.normal(size=(6, 6))
        x *= 0.8 / np.linalg.norm(x, "fro")
        m = kernels.expm(x)
        a = kernels.logm(m)
        b = kernels.logm_numpy(m)
        assert np.max(np.abs(a - b)) < 1e-13


def test_logm_against_scipy():
    rng = np.random.default_rng(12)
    for _ in range(10):
        x = rng.normal(size=(5, 5))
        x *= 1.0 / np.linalg.norm(x, "fro")
        m = scipy.linalg.expm(x)
        ours = kernels.logm(m)
        ref = scipy.linalg.logm(m)
        assert np.max(np.abs(ours - np.real(ref))) < 1e-10


def test_piecewise_flow_is_ordered_product():
    rng = np.random.default_rng(13)
    drift = 0.2 * rng.normal(size=(4, 4))
    controls = np.stack([0.3 * rng.normal(size=(4, 4)) for _ in range(2)])
    lengths = np.array([0.5, 0.25])
    inputs = np.array([[1.0, 0.0], [0.0, -1.0]])
    flow = kernels.piecewise_flow(drift, controls, lengths, inputs)
    first = scipy.linalg.expm(lengths[0] * (drift + controls[0]))
    second = scipy.linalg.expm(lengths[1] * (drift - controls[1]))
    assert np.allclose(flow, second @ first, atol=1e-12)


def test_env_flag_forces_numpy_path():
    env = dict(os.environ)
    env["MYCOCAT_DISABLE_NUMBA"] = "1"
    proc = subprocess.run(
        [
            sys.executable,
            "-c",
            "from mycocat import kernels; "
            "print(kernels.NUMBA_ENABLED, kernels.expm is kernels.expm_numpy)",
        ],
        env=env,
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.strip() == "False True"


def test_numpy_fallback_produces_same_results_cross_process():
    code = (
        "import numpy as np\n"
        "from mycocat import kernels\n"
        "rng = np.random.default_rng(99)\n"
        "a = rng.normal(size=(8, 8)) * 0.4\n"
        "print(repr(float(kernels.expm(a).sum())))\n"
    )
    with_numba = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True,
        env={**os.environ, "MYCOCAT_DISABLE_NUMBA": ""},
    )
    without = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True,
        env={**os.environ, "MYCOCAT_DISABLE_NUMBA": "1"},
    )
    assert with_numba.returncode == 0 and without.returncode == 0
    a = float(with_numba.stdout.strip())
    b = float(without.stdout.strip())
    assert abs(a - b) < 1e-12 * max(1.0, abs(b))
