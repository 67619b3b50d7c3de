"""Analytic norm families.

* Kato-Masuda norms  ``||f||_{sigma,s}^2 = sum_j e^{2 j sigma} / j!^2 ||f^(j)||_s^2``
* scale norms        ``||f||_{(delta,s)} = sup_k delta^k (k+1)^2 ||f^(k)||_s / k!``
* the asymmetric Liapunov functional Phi_{sigma,m}(u, v) and its sigma-derivative
* the weighted sequences a_k, b_k and their l2-type sums A, A~, B, B~

All weighted sums are accumulated in log space so that |sigma| up to ~30 and
orders up to j_max do not overflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import OrderOverflowError, RejectedInputError
from .spectral import derivative_sq_norms


@dataclass(frozen=True)
class GevreyParams:
    sigma: float
    s: float = 2.0
    J_max: int = 12

    def __post_init__(self):
        if self.J_max < 2:
            raise RejectedInputError("J_max must be >= 2")
        if self.s < 0:
            raise RejectedInputError("s must be >= 0")


@dataclass(frozen=True)
class EParams:
    delta: float
    s: float = 2.0
    K_max: int = 12

    def __post_init__(self):
        if not 0.0 < self.delta <= 1.0:
            raise RejectedInputError(f"delta must lie in (0, 1], got {self.delta}")
        if self.s < 2:
            raise RejectedInputError(f"s must be >= 2, got {self.s}")
        if self.K_max < 1:
            raise RejectedInputError("K_max must be positive")


@dataclass(frozen=True)
class PhiValue:
    phi1: float
    phi2: float
    phi: float
    dphi: float
    dphi1: float = 0.0  # u-part of dphi
    dphi2: float = 0.0  # v-part of dphi


@dataclass(frozen=True)
class SeqQuadruple:
    a: np.ndarray  # a_1 .. a_{m+1}
    b: np.ndarray  # b_0 .. b_m
    A: float
    A_tilde: float
    B: float
    B_tilde: float

    @property
    def m(self):
        return len(self.b) - 1


def _series_log(sq, sigma, shift, start):
    return _kernels.log_weighted_terms(sq, sigma, shift, start)


def km_norm(f, p):
    """Kato-Masuda norm truncated at ``p.J_max``.

    Returns ``(value, tail_ratio)``.  ``tail_ratio`` is the last term over the
    running sum; when the last four terms are increasing the series looks
    divergent and ``tail_ratio`` is instead last/previous term (so >= 1).
    """
    if p.J_max > f.grid.j_max:
        raise OrderOverflowError(f"J_max={p.J_max} exceeds j_max={f.grid.j_max}")
    sq = derivative_sq_norms(f, p.J_max, p.s)
    logs = _series_log(sq, p.sigma, 0.0, 0)
    total = _kernels.logsumexp(logs)
    if not np.isfinite(total):
        return 0.0, 0.0
    tail = logs[-4:]
    if np.all(np.isfinite(tail)) and np.all(np.diff(tail) > 0):
        return math.exp(0.5 * total), math.exp(tail[-1] - tail[-2])
    return math.exp(0.5 * total), math.exp(logs[-1] - total) if np.isfinite(logs[-1]) else 0.0


def e_norm(f, p):
    """Scale norm ``||f||_{(delta,s)}`` over 0 <= k <= K_max; returns (value, argmax_k)."""
    if p.K_max > f.grid.j_max:
        raise OrderOverflowError(f"K_max={p.K_max} exceeds j_max={f.grid.j_max}")
    sq = derivative_sq_norms(f, p.K_max, p.s)
    k = np.arange(p.K_max + 1)
    with np.errstate(divide="ignore"):
        logs = (k * math.log(p.delta) + 2.0 * np.log(k + 1.0)
                - np.array([math.lgamma(t + 1.0) for t in k]) + 0.5 * np.log(sq))
    if not np.any(np.isfinite(logs)):
        return 0.0, 0
    kmax = int(np.argmax(logs))
    return math.exp(logs[kmax]), kmax


def e_norm_pair(st, p):
    """Sum convention ``||(u, v)|| = ||u|| + ||v||``."""
    return e_norm(st.u, p)[0] + e_norm(st.v, p)[0]


def _check_order(st, top):
    if top > st.u.grid.j_max:
        raise OrderOverflowError(f"order {top} exceeds j_max={st.u.grid.j_max}")


def phi(st, sigma, m):
    """Phi_{sigma,m}(u, v) together with its components and d/dsigma."""
    if m < 1:
        raise RejectedInputError("m must be a positive integer")
    _check_order(st, m + 2)
    su = derivative_sq_norms(st.u, m + 1, 2.0)
    sv = derivative_sq_norms(st.v, m, 2.0)
    lu = _series_log(su, sigma, 1.0, 1)
    lv = _series_log(sv, sigma, 0.0, 0)
    ju = np.arange(su.size, dtype=np.float64)
    jv = np.arange(sv.size, dtype=np.float64)
    with np.errstate(divide="ignore"):
        ldu = lu + np.log(np.maximum(ju - 1.0, 0.0))
        ldv = lv + np.log(jv)
    phi1 = 0.5 * _exp(_kernels.logsumexp(lu))
    phi2 = 0.5 * _exp(_kernels.logsumexp(lv))
    d1 = _exp(_kernels.logsumexp(ldu))
    d2 = _exp(_kernels.logsumexp(ldv))
    return PhiValue(phi1, phi2, phi1 + phi2, d1 + d2, d1, d2)


def _exp(x):
    return 0.0 if x == -np.inf else math.exp(x)


def phi_infinity(st, sigma0, J_max=12):
    """Limit m -> infinity of Phi_{sigma0,m}, through the Kato-Masuda norms.

    Uses ``1/2 e^{-2 sigma0}(||u||_{sigma0,2}^2 - ||u||_2^2) + 1/2 ||v||_{sigma0,2}^2``.
    Returns ``(value, tail_ratio)`` with the larger of the two tail ratios.
    """
    ku, tu = km_norm(st.u, GevreyParams(sigma0, 2.0, J_max))
    kv, tv = km_norm(st.v, GevreyParams(sigma0, 2.0, J_max))
    u2 = derivative_sq_norms(st.u, 0, 2.0)[0]
    value = 0.5 * math.exp(-2.0 * sigma0) * (ku * ku - u2) + 0.5 * kv * kv
    return value, max(tu, tv)


def sequence_sums(a, b):
    """A, A~, B, B~ for a = (a_1..a_{m+1}) and b = (b_0..b_m)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    ja = np.arange(1, a.size + 1)
    jb = np.arange(b.size)
    A = math.sqrt(np.sum(a * a))
    At = math.sqrt(np.sum(np.where(ja >= 2, ja * a * a, 0.0)))
    B = math.sqrt(np.sum(b * b))
    Bt = math.sqrt(np.sum(jb * b * b))
    return A, At, B, Bt


def seq_quantities(st, sigma, m):
    """a_k = e^{k sigma}||u^(k)||_2/k!  (k=1..m+1),  b_k = e^{k sigma}||v^(k)||_2/k!  (k=0..m)."""
    if m < 1:
        raise RejectedInputError("m must be a positive integer")
    _check_order(st, m + 1)
    su = derivative_sq_norms(st.u, m + 1, 2.0)
    sv = derivative_sq_norms(st.v, m, 2.0)
    a = np.exp(0.5 * _series_log(su, sigma, 0.0, 1))[1:]
    b = np.exp(0.5 * _series_log(sv, sigma, 0.0, 0))
    return SeqQuadruple(a, b, *sequence_sums(a, b))
