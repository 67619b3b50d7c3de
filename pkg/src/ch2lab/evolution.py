"""Time stepping, measured analyticity radius and the strip lower bound.

The strip bound sigma(t) = sigma0 - (2L/K) sqrt(Phi_inf) (e^{Kt/2} - 1) - M t
collapses very fast for realistic K, so e^{sigma(t)} underflows early.  All
comparisons against it are done on logarithms: measured >= e^{sigma} is
checked as log(measured) >= sigma.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (BlowupError, InadmissibleDatumError, IndeterminateRadiusError,
                     RejectedInputError, StepSizeError)
from .inequalities import assemble_constants, le_report
from .norms import phi, phi_infinity
from .spectral import sobolev_norm
from .system import State, rhs_spectra

CSV_HEADER = ("t", "u_h3", "v_h3", "int_u", "int_v", "min_v", "sigma_t", "exp_sigma_t", "radius")
FIT_WINDOW = (1e-11, 1e-4)
TAIL_LIMIT = 1e-6
# sigma values below this are clamped when evaluating Phi; every weighted term
# with a positive power of e^{sigma} is already exactly zero there
SIGMA_FLOOR = -1e6


def cfl_bound(st, p):
    xi_max = float(np.abs(st.grid.xi).max())
    return 1.5 / (xi_max * (abs(p.beta) * float(np.abs(st.u.samples).max()) + 1.0))


def _rk4(grid, uh, vh, p, dt):
    k1 = rhs_spectra(grid, uh, vh, p)
    k2 = rhs_spectra(grid, uh + 0.5 * dt * k1[0], vh + 0.5 * dt * k1[1], p)
    k3 = rhs_spectra(grid, uh + 0.5 * dt * k2[0], vh + 0.5 * dt * k2[1], p)
    k4 = rhs_spectra(grid, uh + dt * k3[0], vh + dt * k3[1], p)
    return (uh + dt / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
            vh + dt / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]))


def step_rk4(st, p, dt, t=None):
    """One classical Runge-Kutta step of size ``dt``."""
    if not dt > 0:
        raise StepSizeError(f"dt must be positive, got {dt}")
    bound = cfl_bound(st, p)
    if dt > bound:
        raise StepSizeError(f"dt={dt:.3e} exceeds the CFL bound {bound:.3e}")
    with np.errstate(all="ignore"):
        uh, vh = _rk4(st.grid, st.u.spectrum, st.v.spectrum, p, dt)
    if not (np.all(np.isfinite(uh)) and np.all(np.isfinite(vh))):
        raise BlowupError(f"non-finite values after step at t={t}", time=t, last_good=st)
    return State.from_spectra(st.grid, uh, vh)


def diagnostics(st):
    return dict(u_h3=sobolev_norm(st.u, 3), v_h3=sobolev_norm(st.v, 3),
                int_u=float(st.u.spectrum[0].real), int_v=float(st.v.spectrum[0].real),
                min_v=st.min_v())


@dataclass
class Trajectory:
    times: list
    states: list
    diagnostics: list
    params: object = None
    flags: list = field(default_factory=list)

    @property
    def grid(self):
        return self.states[0].grid

    def append(self, t, st):
        if self.times and t <= self.times[-1]:
            raise RejectedInputError("snapshot times must increase")
        if self.states and st.grid.key() != self.grid.key():
            raise RejectedInputError("all snapshots must share a grid")
        self.times.append(float(t))
        self.states.append(st)
        self.diagnostics.append(diagnostics(st))

    def max_h3(self):
        return max(d["u_h3"] + d["v_h3"] for d in self.diagnostics)


def evolve(st0, p, t_end, dt, save_every=1):
    """Integrate to ``t_end`` with steps of (at most) ``dt``.

    The step is shrunk to t_end / ceil(t_end / dt) so the final time is hit
    exactly.  Snapshots are stored every ``save_every`` steps and at t_end.
    """
    if t_end < 0 or dt <= 0 or save_every < 1:
        raise RejectedInputError("need t_end >= 0, dt > 0, save_every >= 1")
    traj = Trajectory([], [], [], p)
    if not p.globally_admissible:
        traj.flags.append(f"beta={p.beta} outside (0, 2): global theory does not apply")
    if not st0.is_admissible():
        traj.flags.append(f"min v0 = {st0.min_v():.3g} <= -1: global theory does not apply")
    traj.append(0.0, st0)
    n = max(1, math.ceil(t_end / dt - 1e-12)) if t_end > 0 else 0
    h = t_end / n if n else dt
    st = st0
    for i in range(1, n + 1):
        try:
            st = step_rk4(st, p, h, t=i * h)
        except BlowupError as exc:
            raise BlowupError(str(exc), time=i * h, last_good=traj) from exc
        if i % save_every == 0 or i == n:
            traj.append(t_end if i == n else i * h, st)
    return traj


# ------------------------------------------------------------- radius

def _fit_slope(xi, la):
    return np.polyfit(xi, la, 1)[0]


def radius_estimate(f, window=FIT_WINDOW, curvature_ratio=1.15):
    """Exponential decay rate of |f^(xi)| (the strip half-width), capped at P*pi/4.

    A fit whose second half decays markedly faster than its first half
    (ratio of slopes above ``curvature_ratio``) signals super-exponential
    decay, i.e. an entire function, and returns the cap.
    """
    grid = f.grid
    cap = grid.P * math.pi / 4.0
    amp = np.abs(f.spectrum)
    top = amp.max()
    if not top > 1e-12:
        raise IndeterminateRadiusError("field is (numerically) zero")
    n = grid.N // 2
    k = np.arange(1, n)
    a = 0.5 * (amp[k] + amp[-k])
    xi = k / grid.P
    sel = (a >= window[0] * top) & (a <= window[1] * top)
    if sel.sum() < 2:
        if a[-1] > window[1] * top:
            raise IndeterminateRadiusError("spectrum not resolved: decay never reaches the fit window")
        # decay jumps over the window within one mode: faster than anything measurable
        return cap
    xs, la = xi[sel], np.log(a[sel])
    slope = _fit_slope(xs, la)
    if sel.sum() >= 6:
        half = xs.size // 2
        s1, s2 = _fit_slope(xs[:half], la[:half]), _fit_slope(xs[half:], la[half:])
        if s1 < 0 and s2 / s1 > curvature_ratio:
            return cap
    if slope >= 0:
        raise IndeterminateRadiusError("spectrum does not decay over the fit window")
    return min(-slope, cap)


def measured_radius(st):
    """Smaller of the component radii; zero components impose no limit."""
    vals = []
    for f in (st.u, st.v):
        try:
            vals.append(radius_estimate(f))
        except IndeterminateRadiusError:
            if np.abs(f.spectrum).max() > 1e-12:
                raise
    return min(vals) if vals else st.grid.P * math.pi / 4.0


# ------------------------------------------------------------- strip

@dataclass
class StripTrack:
    sigma0: float
    sigma_bar: float
    K: float
    L: float
    M: float
    mu0: float
    phi_inf: float
    times: list
    sigma: list
    exp_sigma: list
    radius: list
    log_r: list
    holds: list

    @property
    def all_hold(self):
        return all(self.holds)

    def r(self, i):
        return math.exp(self.log_r[i]) if self.log_r[i] < 709 else math.inf

    def to_dict(self):
        return dict(sigma0=self.sigma0, sigma_bar=self.sigma_bar, K=self.K, L=self.L, M=self.M,
                    mu0=self.mu0, phi_inf=self.phi_inf, all_hold=self.all_hold,
                    snapshots=[dict(t=t, sigma=s, exp_sigma=e, radius=r, log_r=lr, holds=h)
                               for t, s, e, r, lr, h in zip(self.times, self.sigma, self.exp_sigma,
                                                             self.radius, self.log_r, self.holds)])


def sigma_curve(t, sigma0, K, L, M, phi0):
    """sigma0 - (2L/K) sqrt(phi0) (e^{Kt/2} - 1) - M t; -inf once the exponential overflows."""
    if t == 0:
        return float(sigma0)
    if K == 0:
        growth = t / 2.0
    else:
        x = K * t / 2.0
        if x > 700:
            return -math.inf
        growth = math.expm1(x) / K
    return float(sigma0 - 2.0 * L * math.sqrt(phi0) * growth - M * t)


def strip_constants(traj, p, sigma_bar, constants=None):
    c = constants if constants is not None else assemble_constants(p, sigma_bar)
    mu0 = 1.0 + traj.max_h3()
    K = c["K1"] + c["K2"] * mu0
    L = c["L1"] + c["L2"] * math.exp(sigma_bar)
    M = c["M1"] + (c["M2"] + c["M3"] * math.exp(2 * sigma_bar)) * mu0
    return K, L, M, mu0


def strip_bound(traj, sigma0, sigma_bar, m_trunc=6, constants=None, p=None, J_max=12, radii=None):
    """Track sigma(t) and compare e^{sigma(t)} with the measured radius per snapshot.

    ``m_trunc`` is kept for interface symmetry; the tracked functional is the
    m -> infinity limit, with ``J_max`` terms in the Kato-Masuda sums.
    """
    if sigma0 > sigma_bar:
        raise RejectedInputError("need sigma0 <= sigma_bar")
    if not traj.states:
        raise RejectedInputError("empty trajectory")
    p = p if p is not None else traj.params
    phi_inf, tail = phi_infinity(traj.states[0], sigma0, J_max)
    if not math.isfinite(phi_inf) or tail > TAIL_LIMIT:
        raise InadmissibleDatumError(
            f"Phi_inf at sigma0={sigma0} not converged (tail ratio {tail:.2e}); datum not in A(e^sigma0)")
    K, L, M, mu0 = strip_constants(traj, p, sigma_bar, constants)
    if radii is None:
        radii = [measured_radius(st) for st in traj.states]
    sig, es, lr, holds = [], [], [], []
    for t, rad in zip(traj.times, radii):
        s = sigma_curve(t, sigma0, K, L, M, phi_inf)
        sig.append(s)
        es.append(math.exp(s) if s > -745 else 0.0)
        lr.append(math.log(phi_inf) + K * t if phi_inf > 0 else -math.inf)
        holds.append(bool(rad > 0 and math.log(rad) >= s))
    return StripTrack(sigma0, sigma_bar, K, L, M, mu0, phi_inf, list(traj.times), sig, es,
                      list(radii), lr, holds)


def phi_liapunov_check(traj, sigma0, m, K, L, M):
    """Phi_{sigma_m(t),m}(U(t)) <= Phi_{sigma0,m}(U0) e^{Kt} at every snapshot."""
    phi0 = phi(traj.states[0], sigma0, m).phi
    reports = []
    for t, st in zip(traj.times, traj.states):
        s = max(sigma_curve(t, sigma0, K, L, M, phi0), SIGMA_FLOOR)
        lhs = phi(st, s, m).phi
        x = K * t
        rhs = phi0 * math.exp(x) if x < 700 else (math.inf if phi0 > 0 else 0.0)
        reports.append(le_report(f"liapunov.t={t:.6g}", lhs, rhs, extra={"sigma_t": s}))
    return reports


# ------------------------------------------------------------- output

def _fmt(x):
    return repr(float(x))


def trajectory_csv(traj, track=None):
    """CSV text with the fixed header; strip columns left empty without a track."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for i, (t, d) in enumerate(zip(traj.times, traj.diagnostics)):
        row = [t, d["u_h3"], d["v_h3"], d["int_u"], d["int_v"], d["min_v"]]
        if track is not None:
            row += [track.sigma[i], track.exp_sigma[i], track.radius[i]]
            w.writerow([_fmt(x) for x in row])
        else:
            w.writerow([_fmt(x) for x in row] + ["", "", ""])
    return buf.getvalue()
