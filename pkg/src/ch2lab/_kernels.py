"""Hot inner loops, compiled with numba when available.

Every kernel exists twice: a plain-loop body compiled by ``numba.njit`` and a
vectorised numpy twin.  The numba path is used unless ``CH2LAB_NUMBA=0`` is set
in the environment (or numba cannot be imported).  Both paths are tested
against each other; ``benchmarks/bench_kernels.py`` times them.
"""
import math
import os

import numpy as np

_WANT_NUMBA = os.environ.get("CH2LAB_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")

try:
    if not _WANT_NUMBA:
        raise ImportError
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised through the env flag
    HAVE_NUMBA = False


# ---------------------------------------------------------------- log-space sums

def log_weighted_terms_numpy(sq_norms, sigma, shift, start):
    """log of e^{2(j-shift)sigma}/j!^2 * sq_norms[j] for j >= start (else -inf)."""
    sq = np.asarray(sq_norms, dtype=np.float64)
    j = np.arange(sq.size, dtype=np.float64)
    with np.errstate(divide="ignore"):
        out = 2.0 * (j - shift) * sigma - 2.0 * _lgamma_vec(j + 1.0) + np.log(sq)
    out[: start] = -np.inf
    out[sq == 0.0] = -np.inf
    return out


def _lgamma_vec(z):
    return np.array([math.lgamma(t) for t in z])


def logsumexp_numpy(logs):
    logs = np.asarray(logs, dtype=np.float64)
    if logs.size == 0:
        return -np.inf
    top = logs.max()
    if not np.isfinite(top):
        return top
    return float(top + np.log(np.exp(logs - top).sum()))


def _log_weighted_terms_loop(sq_norms, sigma, shift, start):
    n = sq_norms.shape[0]
    out = np.empty(n)
    for j in range(n):
        if j < start or sq_norms[j] == 0.0:
            out[j] = -np.inf
        else:
            out[j] = 2.0 * (j - shift) * sigma - 2.0 * math.lgamma(j + 1.0) + math.log(sq_norms[j])
    return out


def _logsumexp_loop(logs):
    n = logs.shape[0]
    if n == 0:
        return -np.inf
    top = -np.inf
    for i in range(n):
        if logs[i] > top:
            top = logs[i]
    if not np.isfinite(top):
        return top
    acc = 0.0
    for i in range(n):
        acc += math.exp(logs[i] - top)
    return top + math.log(acc)


# ------------------------------------------------------- appendix double sums

def ab_sums_numpy(a, b, m):
    """Left-hand sides of the seven appendix double sums.

    ``a`` has length m+2 with a[0] unused (indices 1..m+1); ``b`` has length
    m+1 (indices 0..m).
    """
    out = np.zeros(7)
    for j in range(3, m + 2):
        ell = np.arange(2, j)
        out[0] += a[j] * np.sum(a[ell] * a[j - ell])
        out[1] += a[j] * np.sum((j - ell + 1) / ell * a[ell - 1] * a[j - ell + 1])
    for j in range(2, m + 2):
        ell = np.arange(1, j)
        out[2] += a[j] / j * np.sum(b[ell] * b[j - ell - 1])
    for j in range(2, m + 1):
        ell = np.arange(2, j + 1)
        out[3] += b[j] * np.sum(a[ell] * b[j - ell])
        out[4] += b[j] * np.sum((j - ell + 1) / ell * a[ell - 1] * b[j - ell + 1])
    for j in range(3, m + 1):
        ell = np.arange(2, j)
        out[5] += b[j] * np.sum(a[j - ell] * b[ell])
        out[6] += b[j] * np.sum((j - ell + 1) / ell * a[j - ell + 1] * b[ell - 1])
    return out


def _ab_sums_loop(a, b, m):
    out = np.zeros(7)
    for j in range(3, m + 2):
        for ell in range(2, j):
            out[0] += a[j] * a[ell] * a[j - ell]
            out[1] += (j - ell + 1) / ell * a[j] * a[ell - 1] * a[j - ell + 1]
    for j in range(2, m + 2):
        for ell in range(1, j):
            out[2] += a[j] * b[ell] * b[j - ell - 1] / j
    for j in range(2, m + 1):
        for ell in range(2, j + 1):
            out[3] += a[ell] * b[j] * b[j - ell]
            out[4] += (j - ell + 1) / ell * a[ell - 1] * b[j] * b[j - ell + 1]
    for j in range(3, m + 1):
        for ell in range(2, j):
            out[5] += a[j - ell] * b[j] * b[ell]
            out[6] += (j - ell + 1) / ell * a[j - ell + 1] * b[j] * b[ell - 1]
    return out


if HAVE_NUMBA:
    log_weighted_terms_numba = njit(cache=True)(_log_weighted_terms_loop)
    logsumexp_numba = njit(cache=True)(_logsumexp_loop)
    ab_sums_numba = njit(cache=True)(_ab_sums_loop)

    def log_weighted_terms(sq_norms, sigma, shift, start):
        return log_weighted_terms_numba(np.ascontiguousarray(sq_norms, dtype=np.float64),
                                        float(sigma), float(shift), int(start))

    def logsumexp(logs):
        return float(logsumexp_numba(np.ascontiguousarray(logs, dtype=np.float64)))

    def ab_sums(a, b, m):
        return ab_sums_numba(np.ascontiguousarray(a, dtype=np.float64),
                             np.ascontiguousarray(b, dtype=np.float64), int(m))
else:
    log_weighted_terms = log_weighted_terms_numpy
    logsumexp = logsumexp_numpy
    ab_sums = ab_sums_numpy


def backend():
    return "numba" if HAVE_NUMBA else "numpy"
