import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ch2lab import _kernels as K

needs_numba = pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba path disabled")


@needs_numba
@settings(max_examples=60, deadline=None)
@given(m=st.integers(1, 40), seed=st.integers(0, 2**32 - 1))
def test_ab_sums_paths_agree(m, seed):
    rng = np.random.default_rng(seed)
    a = np.concatenate(([0.0], rng.uniform(size=m + 1)))
    b = rng.uniform(size=m + 1)
    np.testing.assert_allclose(K.ab_sums_numba(a, b, m), K.ab_sums_numpy(a, b, m), rtol=1e-12, atol=0)


@needs_numba
@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 30), sigma=st.floats(-3, 1), shift=st.sampled_from([0.0, 1.0]),
       seed=st.integers(0, 2**32 - 1))
def test_log_terms_paths_agree(n, sigma, shift, seed):
    rng = np.random.default_rng(seed)
    sq = rng.uniform(size=n) * (rng.uniform(size=n) > 0.2)
    a = K.log_weighted_terms_numba(sq, sigma, shift, 1)
    b = K.log_weighted_terms_numpy(sq, sigma, shift, 1)
    np.testing.assert_array_equal(np.isinf(a), np.isinf(b))
    fin = np.isfinite(a)
    np.testing.assert_allclose(a[fin], b[fin], rtol=1e-13, atol=1e-13)
    assert K.logsumexp_numba(a) == pytest.approx(K.logsumexp_numpy(b), rel=1e-13)


def test_logsumexp_edge_cases():
    assert K.logsumexp(np.array([-np.inf, -np.inf])) == -np.inf
    assert K.logsumexp_numpy(np.array([])) == -np.inf
    assert K.logsumexp(np.array([1000.0, 1000.0])) == pytest.approx(1000 + np.log(2))


def test_ab_sums_by_hand():
    # m = 2: only AB1..AB4 with a handful of terms
    a = np.array([0.0, 1.0, 2.0, 3.0])
    b = np.array([1.0, 2.0, 3.0])
    out = K.ab_sums(a, b, 2)
    assert out[0] == pytest.approx(a[3] * a[2] * a[1])
    assert out[1] == pytest.approx((3 - 2 + 1) / 2 * a[3] * a[1] * a[2])
    ab3 = a[2] / 2 * b[1] * b[0] + a[3] / 3 * (b[1] * b[1] + b[2] * b[0])
    assert out[2] == pytest.approx(ab3)
    assert out[3] == pytest.approx(a[2] * b[2] * b[0])
    assert out[5] == out[6] == 0.0


def test_env_flag_selects_numpy():
    code = "from ch2lab import _kernels as K; print(K.backend())"
    env = dict(os.environ, CH2LAB_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
