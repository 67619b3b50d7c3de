"""Time-Taylor expansion of the solution and probes of its holomorphy disk.

Because F is quadratic, the t^k coefficient of F(sum_j U_j t^j) is the linear
part applied to U_k plus the quadratic part of the Cauchy products
sum_{i+j=k} (U_i, U_j).  The products are formed in physical space, so the
recursion is exact up to rounding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import legendre

from .errors import InsufficientDataError, OverflowSeriesError, RejectedInputError
from .norms import EParams, e_norm
from .system import State, linear_part, ops_for, quadratic_from_phys, rhs_spectra

K_CAP = 20
NOISE_FLOOR = 1e-13
GAUSS_NODES = 32


@dataclass
class TaylorSeries:
    coeffs: list
    params: object

    @property
    def K(self):
        return len(self.coeffs) - 1

    @property
    def grid(self):
        return self.coeffs[0].grid

    def spectra(self):
        uh = np.array([c.u.spectrum for c in self.coeffs])
        vh = np.array([c.v.spectrum for c in self.coeffs])
        return uh, vh

    def evaluate(self, t):
        """Partial sum at real t (Horner)."""
        uh, vh = self.spectra()
        su, sv = np.zeros_like(uh[0]), np.zeros_like(vh[0])
        for k in range(self.K, -1, -1):
            su = su * t + uh[k]
            sv = sv * t + vh[k]
        return State.from_spectra(self.grid, su, sv)

    def scale_norms(self, delta, s):
        """Pair norms ||U_k||_(delta, s+1), k = 0..K."""
        ep = EParams(delta, s + 1)
        return [e_norm(c.u, ep)[0] + e_norm(c.v, ep)[0] for c in self.coeffs]


def taylor_coeffs(st0, p, K, K_cap=K_CAP):
    if not 1 <= K <= K_cap:
        raise RejectedInputError(f"order K must lie in [1, {K_cap}], got {K}")
    grid = st0.grid
    ops = ops_for(grid)
    uh = [st0.u.spectrum]
    vh = [st0.v.spectrum]
    u = [ops.phys(uh[0])]
    ux = [ops.phys(ops.d1 * uh[0])]
    v = [ops.phys(vh[0])]
    for k in range(K):
        uu = sum(u[i] * u[k - i] for i in range(k + 1))
        uxux = sum(ux[i] * ux[k - i] for i in range(k + 1))
        vv = sum(v[i] * v[k - i] for i in range(k + 1))
        uv = sum(u[i] * v[k - i] for i in range(k + 1))
        l1, l2 = linear_part(ops, uh[k], vh[k], p)
        q1, q2 = quadratic_from_phys(ops, uu, uxux, vv, uv, p)
        nu = (l1 + q1) / (k + 1)
        nv = (l2 + q2) / (k + 1)
        # a coefficient this large squares past the float range at the next order
        if not (np.all(np.isfinite(nu)) and np.all(np.isfinite(nv))) or \
                max(np.abs(nu).max(), np.abs(nv).max()) > 1e150:
            raise OverflowSeriesError(f"coefficient of order {k + 1} overflows", last_order=k)
        uh.append(nu)
        vh.append(nv)
        u.append(ops.phys(nu))
        ux.append(ops.phys(ops.d1 * nu))
        v.append(ops.phys(nv))
    return TaylorSeries([State.from_spectra(grid, a, b) for a, b in zip(uh, vh)], p)


def recursion_residuals(series, radius=None):
    """Relative residuals of (k+1) U_{k+1} = [t^k] F(U(t)), k = 0..K-1.

    The right-hand side is extracted independently of the recursion: U(t) is
    summed at complex times on a circle, F is evaluated there with complex
    arithmetic, and a discrete Fourier transform over the circle picks out the
    coefficients (exact, since F(U(t)) is a polynomial of degree 2K).
    """
    uh, vh = series.spectra()
    K = series.K
    grid = series.grid
    w = (1.0 + grid.xi ** 2)
    norms = [math.sqrt(np.sum(w ** 2 * (np.abs(a) ** 2 + np.abs(b) ** 2))) for a, b in zip(uh, vh)]
    if norms[0] == 0.0:
        return np.zeros(K)
    if radius is None:
        nz = [(k, n) for k, n in enumerate(norms) if n > 0]
        kk, nn = nz[-1]
        radius = (norms[0] / nn) ** (1.0 / kk) if kk > 0 else 1.0
    nt = 2 * K + 2
    ts = radius * np.exp(2j * np.pi * np.arange(nt) / nt)
    powers = ts[:, None] ** np.arange(K + 1)[None, :]
    Ut = powers @ uh
    Vt = powers @ vh
    F1 = np.empty_like(Ut)
    F2 = np.empty_like(Vt)
    for n in range(nt):
        F1[n], F2[n] = rhs_spectra(grid, Ut[n], Vt[n], series.params, real=False)
    # c_k = (1/nt) sum_n F(t_n) t_n^{-k}
    c1 = np.fft.fft(F1, axis=0) / nt
    c2 = np.fft.fft(F2, axis=0) / nt
    res = np.empty(K)
    for k in range(K):
        e1 = c1[k] / radius ** k
        e2 = c2[k] / radius ** k
        ref = math.sqrt(np.sum(w ** 2 * (np.abs(e1) ** 2 + np.abs(e2) ** 2)))
        diff = math.sqrt(np.sum(w ** 2 * (np.abs((k + 1) * uh[k + 1] - e1) ** 2
                                          + np.abs((k + 1) * vh[k + 1] - e2) ** 2)))
        scale = max(ref, (k + 1) * norms[k + 1])
        res[k] = diff / scale if scale > 0 else 0.0
    return res


def disk_radius(series_or_norms, delta=0.5, s=2.0):
    """Radius 1/rho from a log-linear fit over the top ceil(K/2) orders."""
    if not 0 < delta < 1:
        raise RejectedInputError("delta must lie in (0, 1)")
    if s < 2:
        raise RejectedInputError("need s >= 2")
    if isinstance(series_or_norms, TaylorSeries):
        norms = series_or_norms.scale_norms(delta, s)
    else:
        norms = [float(x) for x in series_or_norms]
    norms = np.asarray(norms, dtype=np.float64)
    K = norms.size - 1
    floor = NOISE_FLOOR * norms[0]
    usable = np.flatnonzero((norms > floor) & np.isfinite(norms) & (norms > 0))
    if usable.size < 6:
        raise InsufficientDataError(f"only {usable.size} usable orders; need at least 6")
    top = usable[usable > K - math.ceil(K / 2)]
    if top.size < 2:
        top = usable[-max(2, math.ceil(K / 2)):]
    slope = np.polyfit(top.astype(np.float64), np.log(norms[top]), 1)[0]
    return math.exp(-slope)


# ------------------------------------------------------------------ Picard

@dataclass
class PicardResult:
    diffs: list
    diverged: bool
    floor: float
    ratios: list = field(default_factory=list)

    def contracting(self, bound=0.9):
        """Above the rounding floor the last ratio is <= bound (or the floor was reached)."""
        live = [r for r, d in zip(self.ratios, self.diffs[1:]) if d > self.floor]
        if not live:
            return all(d <= self.floor for d in self.diffs[1:]) or self.diffs[0] <= self.floor
        return live[-1] <= bound


def _integration_matrix(n):
    """W[i, j] = int_{-1}^{x_i} l_j(x) dx for Gauss-Legendre nodes x_i and x_n = +1."""
    x, _ = legendre.leggauss(n)
    V = legendre.legvander(x, n - 1)
    coef = np.linalg.inv(V)  # column j: Legendre coefficients of l_j
    icoef = legendre.legint(coef, lbnd=-1.0, axis=0)
    pts = np.append(x, 1.0)
    return x, legendre.legval(pts, icoef).T


def picard_probe(st0, p, t, delta=0.5, s=2.0, n_iters=8, nodes=GAUSS_NODES):
    """Successive differences of U_{n+1}(t) = U0 + int_0^t F(U_n) in ||.||_(delta, s+1)."""
    grid = st0.grid
    x, W = _integration_matrix(nodes)
    W = W * (t / 2.0)  # rows: nodes then endpoint
    u0, v0 = st0.u.spectrum, st0.v.spectrum
    U = np.repeat(u0[None, :], nodes + 1, axis=0)
    V = np.repeat(v0[None, :], nodes + 1, axis=0)
    ep = EParams(delta, s + 1)

    def size(a, b):
        return (e_norm(State.from_spectra(grid, a, b).u, ep)[0]
                + e_norm(State.from_spectra(grid, a, b).v, ep)[0])

    diffs = []
    for _ in range(n_iters):
        F1 = np.empty((nodes, grid.N), dtype=np.complex128)
        F2 = np.empty_like(F1)
        for i in range(nodes):
            F1[i], F2[i] = rhs_spectra(grid, U[i], V[i], p)
        Un = u0[None, :] + W @ F1
        Vn = v0[None, :] + W @ F2
        diffs.append(size(Un[-1] - U[-1], Vn[-1] - V[-1]))
        U, V = Un, Vn
    floor = 1e-12 * max(size(u0, v0), 1e-300) * max(1.0, abs(t))
    ratios = [b / a if a > 0 else 0.0 for a, b in zip(diffs, diffs[1:])]
    diverged = any(diffs[i] < diffs[i + 1] < diffs[i + 2] < diffs[i + 3] and diffs[i + 3] > floor
                   for i in range(len(diffs) - 3))
    return PicardResult(diffs, diverged, floor, ratios)
