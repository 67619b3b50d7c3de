"""The generalized two-component Camassa-Holm system in nonlocal form.

    u_t = F1(u, v) = -beta u u_x - Lambda^{-2} d_x[-alpha u + (3-beta)/2 u^2 + beta/2 u_x^2 + v + v^2/2]
    v_t = F2(u, v) = -u_x - (u v)_x

plus the explicit algebra constants d(s), c(s), c_s, C_s used by the estimates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import (DivergentIntegralError, IncompatibleGridError, OrderOverflowError,
                     RejectedInputError)
from .spectral import Field, derivative_multiplier


@dataclass(frozen=True)
class SystemParams:
    alpha: float = 0.0
    beta: float = 1.0

    @property
    def globally_admissible(self):
        """Global theory needs 0 < beta < 2."""
        return 0.0 < self.beta < 2.0


class State:
    """Pair (u, v) of fields on one grid."""

    __slots__ = ("u", "v")

    def __init__(self, u, v):
        if u.grid.key() != v.grid.key():
            raise IncompatibleGridError("u and v must share a grid")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    def __setattr__(self, name, value):
        raise AttributeError("State is immutable")

    @property
    def grid(self):
        return self.u.grid

    @classmethod
    def zeros(cls, grid):
        z = Field.zeros(grid)
        return cls(z, z)

    @classmethod
    def from_spectra(cls, grid, uh, vh):
        return cls(Field.from_spectrum(grid, uh), Field.from_spectrum(grid, vh))

    def __add__(self, other):
        return State(self.u + other.u, self.v + other.v)

    def __sub__(self, other):
        return State(self.u - other.u, self.v - other.v)

    def __mul__(self, c):
        return State(c * self.u, c * self.v)

    __rmul__ = __mul__

    def min_v(self):
        return float(self.v.samples.min())

    def is_admissible(self):
        """Global-theory datum condition: inf v > -1."""
        return self.min_v() > -1.0

    def is_finite(self):
        return bool(np.all(np.isfinite(self.u.samples)) and np.all(np.isfinite(self.v.samples)))

    def __repr__(self):
        return f"State(u={self.u!r}, v={self.v!r})"


@dataclass(frozen=True)
class AlgebraConstants:
    s: float
    d_s: float
    c_small_s: float
    c_s: float
    C_s: float


def d_squared(s):
    """int_R (1 + xi^2)^{-s} d xi."""
    if s <= 0.5:
        raise DivergentIntegralError(f"(1+xi^2)^(-s) is not integrable for s={s} <= 1/2")
    if float(s).is_integer():
        return math.sqrt(math.pi) * math.exp(special.gammaln(s - 0.5) - special.gammaln(s))
    val, _ = integrate.quad(lambda t: (1.0 + t * t) ** (-s), -np.inf, np.inf, epsabs=0, epsrel=1e-13)
    return val


def default_c_s(s):
    """Default Kato-Ponce product constant: max(8, c(s))."""
    return max(8.0, math.sqrt((1.0 + 2.0 ** (2 * s)) * d_squared(s)))


def algebra_constants(s, c_s_override=None):
    d2 = d_squared(s)
    c_small = math.sqrt((1.0 + 2.0 ** (2 * s)) * d2)
    c_s = float(c_s_override) if c_s_override is not None else max(8.0, c_small)
    if c_s <= 0:
        raise RejectedInputError("c_s must be positive")
    return AlgebraConstants(s=float(s), d_s=math.sqrt(d2), c_small_s=c_small, c_s=c_s, C_s=18.0 * c_s)


# ------------------------------------------------------------------ kernels
#
# The kernels below act on raw spectra so that the Taylor recursion and the
# complex-time oracles can reuse them.  ``real=True`` projects physical
# products onto real arrays (ordinary evolution).

class _Ops:
    """Precomputed Fourier multipliers for one grid."""

    def __init__(self, grid):
        self.grid = grid
        xi = grid.xi
        self.d1 = derivative_multiplier(grid, 1)
        self.hd = self.d1 / (1.0 + xi * xi)  # Lambda^{-2} d_x
        self.keep = np.abs(grid.k) <= grid.N / 3.0
        self.to_phys = grid.phase / grid.dx
        self.to_spec = grid.dx * grid.phase

    def phys(self, h, real=True):
        out = np.fft.ifft(h * self.to_phys)
        return out.real if real else out

    def spec(self, x):
        return np.fft.fft(x) * self.to_spec * self.keep  # dealiased


_OPS_CACHE = {}


def ops_for(grid):
    key = grid.key()
    if key not in _OPS_CACHE:
        _OPS_CACHE[key] = _Ops(grid)
    return _OPS_CACHE[key]


def linear_part(ops, uh, vh, p):
    f1 = ops.hd * (p.alpha * uh - vh)
    f2 = -ops.d1 * uh
    return f1, f2


def quadratic_from_phys(ops, uu, uxux, vv, uv, p):
    """Quadratic part of F given physical-space products u*u, u_x*u_x, v*v, u*v."""
    sq_u = ops.spec(uu)
    f1 = -0.5 * p.beta * ops.d1 * sq_u - ops.hd * (
        0.5 * (3.0 - p.beta) * sq_u + 0.5 * p.beta * ops.spec(uxux) + 0.5 * ops.spec(vv))
    f2 = -ops.d1 * ops.spec(uv)
    return f1, f2


def rhs_spectra(grid, uh, vh, p, real=True):
    ops = ops_for(grid)
    u = ops.phys(uh, real)
    ux = ops.phys(ops.d1 * uh, real)
    v = ops.phys(vh, real)
    l1, l2 = linear_part(ops, uh, vh, p)
    q1, q2 = quadratic_from_phys(ops, u * u, ux * ux, v * v, u * v, p)
    return l1 + q1, l2 + q2


def rhs(st, p):
    """(F1(u, v), F2(u, v)) with every quadratic product dealiased."""
    f1, f2 = rhs_spectra(st.grid, st.u.spectrum, st.v.spectrum, p)
    return State.from_spectra(st.grid, f1, f2)


def _pairing_weights(grid, sigma, jlo, jhi, shift):
    """sum_{j=jlo}^{jhi} e^{2(j-shift) sigma}/j!^2 xi^{2j} (1+xi^2)^2, Nyquist zeroed for j>=1."""
    xi2 = grid.xi ** 2
    w = np.zeros(grid.N)
    for j in range(jlo, jhi + 1):
        c = math.exp(2.0 * (j - shift) * sigma - 2.0 * math.lgamma(j + 1.0))
        term = c * xi2 ** j
        if j:
            term[grid.nyquist] = 0.0
        w += term
    return w * (1.0 + xi2) ** 2


def weighted_h2_pairing(f, g, sigma, jlo, jhi, shift):
    """sum_j e^{2(j-shift)sigma}/j!^2 <f^(j), g^(j)>_2 computed on spectra."""
    grid = f.grid
    w = _pairing_weights(grid, sigma, jlo, jhi, shift)
    cross = f.spectrum.real * g.spectrum.real + f.spectrum.imag * g.spectrum.imag
    return float(np.sum(w * cross) * grid.dxi / (2.0 * np.pi))


def pairing(st, p, sigma, m):
    """<F(u, v), D Phi_{sigma,m}(u, v)> as the weighted sum of H^2 pairings."""
    if m + 2 > st.grid.j_max:
        raise OrderOverflowError(f"m={m} too large for j_max={st.grid.j_max}")
    F = rhs(st, p)
    return (weighted_h2_pairing(st.u, F.u, sigma, 1, m + 1, 1)
            + weighted_h2_pairing(st.v, F.v, sigma, 0, m, 0))
