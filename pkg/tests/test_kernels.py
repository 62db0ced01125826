import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from steerwave import _kernels_py, kernels

try:
    from steerwave import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

needs_ext = pytest.mark.skipif(_kernels_c is None, reason="compiled extension not built")
unit_values = hnp.arrays(np.float64, st.integers(0, 200), elements=st.floats(-1, 1))


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")


@needs_ext
def test_extension_is_default():
    assert kernels.BACKEND == "cython"


@needs_ext
@given(st.integers(2, 12), st.integers(0, 40), unit_values)
def test_table_backends_agree(d, lmax, x):
    a = np.asarray(_kernels_c.legendre_table(d, lmax, x))
    b = _kernels_py.legendre_table(d, lmax, x)
    assert a.shape == b.shape
    assert np.abs(a - b).max(initial=0.0) <= 1e-13


@needs_ext
@given(st.integers(2, 12), hnp.arrays(np.float64, st.integers(1, 30), elements=st.floats(-5, 5)), unit_values)
def test_sum_backends_agree(d, weights, x):
    a = np.asarray(_kernels_c.legendre_sum(d, weights, x))
    b = _kernels_py.legendre_sum(d, weights, x)
    tol = 1e-13 * max(1.0, np.abs(weights).sum())
    assert np.abs(a - b).max(initial=0.0) <= tol


def test_sum_matches_table():
    x = np.linspace(-1, 1, 301)
    w = np.random.default_rng(0).standard_normal(11)
    for mod in filter(None, (_kernels_py, _kernels_c)):
        table = np.asarray(mod.legendre_table(4, 10, x))
        assert np.allclose(np.asarray(mod.legendre_sum(4, w, x)), w @ table, atol=1e-13)


def test_env_forces_fallback():
    env = dict(os.environ, SWT_PURE_PYTHON="1")
    code = "from steerwave import kernels; print(kernels.BACKEND)"
    proc = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert proc.stdout.strip() == "python"
