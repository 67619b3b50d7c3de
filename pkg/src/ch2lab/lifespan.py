"""Ovsyannikov constants and the analytic lifespan of the local solution.

With R the datum size in the top space of the scale, the abstract theorem
gives holomorphy on D(0, T(1 - delta)) for T = R / (16 L R + 8 M), and for
this system T = 1 / (gamma1 R + gamma2).
"""
from __future__ import annotations

import math

import numpy as np
from dataclasses import asdict, dataclass, field

from .errors import DegenerateDatumError, InadmissibleDatumError, RejectedInputError
from .norms import EParams, e_norm
from .system import algebra_constants

FIT_RADII = (1.0, 2.0)
FIT_TOL = 1e-8


@dataclass
class LifespanReport:
    R: float
    L: float
    M: float
    T: float
    gamma1: float
    gamma2: float
    gamma1_fit: float
    gamma2_fit: float
    s: float
    c_s: float
    C_s: float
    C_s1: float
    C_prime: float
    delta: float = 1.0
    notes: list = field(default_factory=list)

    @property
    def fit_consistent(self):
        return (abs(self.gamma1_fit - self.gamma1) <= FIT_TOL * self.gamma1
                and abs(self.gamma2_fit - self.gamma2) <= FIT_TOL * self.gamma2)

    def to_dict(self):
        d = asdict(self)
        d["fit_consistent"] = self.fit_consistent
        return d


def _constants(s, c_s=None):
    if s < 2:
        raise RejectedInputError(f"need s >= 2, got {s}")
    a = algebra_constants(s, c_s)
    b = algebra_constants(s + 1, c_s)
    return a, b, max(a.C_s, b.C_s)


def _coef(p):
    return 2 * abs(p.beta) + abs(3 - p.beta) + 2


def datum_norm(st0, s, delta=1.0, K_max=12):
    """||u0||_{(delta,s+1)} + ||v0||_{(delta,s+1)}, rejecting data whose sup is not attained."""
    total = 0.0
    ep = EParams(delta, s + 1, K_max)
    for name, f in (("u0", st0.u), ("v0", st0.v)):
        val, kmax = e_norm(f, ep)
        if not math.isfinite(val):
            raise InadmissibleDatumError(f"{name} has non-finite scale norm at delta={delta}")
        if val > 0 and kmax == K_max:
            raise InadmissibleDatumError(
                f"{name}: scale-norm terms still growing at order {K_max}; datum not in E_(delta, s+1)")
        total += val
    return total


def _LM(norm, R, p, C_prime, C_s1, delta=1.0, tail=2.0):
    coef = _coef(p)
    L = C_prime / delta * coef * (norm + R) + abs(p.alpha) + tail
    M = C_s1 / (2 * delta) * coef * norm ** 2 + (abs(p.alpha) + 2) / delta * norm
    return L, M


def lifespan_constants(st0, p, s, R, c_s=None):
    """(L, M) for the datum ``st0`` and ball radius ``R``."""
    if R < 0:
        raise RejectedInputError("R must be nonnegative")
    _, b, Cp = _constants(s, c_s)
    return _LM(datum_norm(st0, s), R, p, Cp, b.C_s)


def closed_form_gammas(p, s, c_s=None):
    a, b, Cp = _constants(s, c_s)
    return (32 * Cp + 4 * b.C_s) * _coef(p), 24 * (abs(p.alpha) + 2)


def _fit_gammas(p, Cp, C_s1, delta=1.0, tail=2.0):
    # denominator/R at two radii with the datum norm equal to R: gamma1 R + gamma2
    vals = []
    for r in FIT_RADII:
        L, M = _LM(r, r, p, Cp, C_s1, delta, tail)
        vals.append((16 * L * r + 8 * M) / r)
    g1 = (vals[1] - vals[0]) / (FIT_RADII[1] - FIT_RADII[0])
    return g1, vals[0] - g1 * FIT_RADII[0]


def _report(R, L, M, p, s, a, b, Cp, delta, tail, notes, c_s):
    f1, f2 = _fit_gammas(p, Cp, b.C_s, delta, tail)
    if delta == 1.0 and tail == 2.0:
        g1, g2 = closed_form_gammas(p, s, c_s)
    else:
        # no printed closed form for the rescaled variant
        g1, g2 = f1, f2
    return LifespanReport(R=R, L=L, M=M, T=R / (16 * L * R + 8 * M), gamma1=g1, gamma2=g2,
                         gamma1_fit=f1, gamma2_fit=f2, s=s, c_s=a.c_s, C_s=a.C_s, C_s1=b.C_s,
                         C_prime=Cp, delta=delta, notes=notes)


def lifespan_T(st0, p, s=2.0, c_s=None):
    """Lifespan report with R equal to the datum norm in E_(1, s+1)."""
    a, b, Cp = _constants(s, c_s)
    R = datum_norm(st0, s)
    if R == 0:
        raise DegenerateDatumError("zero datum: T = R/(16LR+8M) is 0/0")
    L, M = _LM(R, R, p, Cp, b.C_s)
    rep = _report(R, L, M, p, s, a, b, Cp, 1.0, 2.0, [], c_s)
    if not rep.fit_consistent:
        rep.notes.append("closed-form gammas disagree with the two-radius fit")
    return rep


def lifespan_scaled_variant(st0, p, s=2.0, Delta=1.0, c_s=None):
    """Lifespan in the rescaled scale E_(Delta d, s+1), 0 < d <= 1."""
    if not 0 < Delta <= 1:
        raise RejectedInputError("Delta must lie in (0, 1]")
    a, b, Cp = _constants(s, c_s)
    R = datum_norm(st0, s, Delta)
    if R == 0:
        raise DegenerateDatumError("zero datum: T = R/(16LR+8M) is 0/0")
    L, M = _LM(R, R, p, Cp, b.C_s, Delta, tail=1.0)
    notes = ["L_Delta ends in |alpha|+1 while L ends in |alpha|+2; both used as printed"]
    return _report(R, L, M, p, s, a, b, Cp, Delta, 1.0, notes, c_s)


def lambda_sweep(st0, p, s=2.0, lambdas=None, c_s=None):
    """T over scaled data lambda * st0: rows (lambda, R, T, T*gamma2, T*gamma1*R)."""
    if lambdas is None:
        lambdas = np.logspace(-3, 3, 13)
    rows = []
    for lam in lambdas:
        rep = lifespan_T(st0 * float(lam), p, s, c_s)
        rows.append((float(lam), rep.R, rep.T, rep.T * rep.gamma2, rep.T * rep.gamma1 * rep.R))
    return rows
