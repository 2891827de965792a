"""The numba and numpy kernels must agree; the dispatch flag must pick one."""

import os
import subprocess
import sys

import numpy as np
import pytest

from hdatail import _kernels

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")


@needs_numba
@pytest.mark.parametrize("seed", range(5))
def test_count_at_least_agree(seed):
    rng = np.random.default_rng(seed)
    ref = rng.integers(0, 30, 500).astype(float)
    q = np.concatenate([rng.integers(-2, 32, 700).astype(float), rng.random(50) * 30])
    np.testing.assert_array_equal(_kernels.count_at_least_numba(ref, q),
                                  _kernels.count_at_least_numpy(ref, q))


def test_count_at_least_edges():
    ref = np.array([1.0, 2.0, 2.0, 3.0])
    q = np.array([0.0, 1.0, 2.0, 2.5, 3.0, 4.0])
    expected = [4, 4, 3, 1, 1, 0]
    np.testing.assert_array_equal(_kernels.count_at_least_numpy(ref, q), expected)
    np.testing.assert_array_equal(_kernels.count_at_least(ref, q), expected)


@needs_numba
@pytest.mark.parametrize("bw", [0.01, 0.07, 0.4, 1.5])
def test_kde_agree(bw):
    pts = np.random.default_rng(3).beta(0.5, 2.0, 300)
    grid = np.linspace(0, 1, 257)
    np.testing.assert_allclose(_kernels.reflected_kde_numba(pts, grid, bw),
                               _kernels.reflected_kde_numpy(pts, grid, bw),
                               rtol=1e-9, atol=1e-12)


def test_env_flag_selects_numpy():
    env = dict(os.environ, HDATAIL_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c",
         "from hdatail import _kernels as k; "
         "print(k.USE_NUMBA, k.count_at_least is k.count_at_least_numpy)"],
        env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["False", "True"]


def test_numpy_path_end_to_end():
    # full pipeline through the fallback kernels gives identical output
    code = ("from hdatail import simulate, fit_hda; import json; "
            "r = fit_hda(simulate('ex22', 5000, 1), 70); "
            "print(r.models[0].to_json())")
    runs = []
    for flag in ("1", "0"):
        env = dict(os.environ, HDATAIL_DISABLE_NUMBA=flag)
        runs.append(subprocess.run([sys.executable, "-c", code], env=env,
                                   capture_output=True, text=True, check=True).stdout)
    assert runs[0] == runs[1]
