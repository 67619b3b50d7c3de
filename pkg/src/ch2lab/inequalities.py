"""Numerical checkers for the quantitative inequalities of the analytic theory.

Each checker returns :class:`CheckReport` objects comparing a directly computed
left-hand side with the printed right-hand side.  An inequality report passes
when ``lhs <= rhs * (1 + REL_SLACK) + ABS_SLACK``; an identity report passes
when ``|lhs - rhs| <= EQ_REL * max(|lhs|, |rhs|) + ABS_SLACK``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import _kernels
from .errors import OrderOverflowError, RejectedInputError
from .norms import EParams, e_norm, phi, seq_quantities, sequence_sums
from .spectral import (Field, derivative, derivative_sq_norms, helmholtz_inv, product,
                       sobolev_inner, sobolev_norm)
from .system import State, algebra_constants, default_c_s, pairing, weighted_h2_pairing

REL_SLACK = 1e-9
ABS_SLACK = 1e-12
EQ_REL = 1e-10

PI_S6 = math.pi / math.sqrt(6.0)
PI_S3 = math.pi / math.sqrt(3.0)


@dataclass
class CheckReport:
    name: str
    lhs: float
    rhs: float
    margin: float
    passed: bool
    tol: float
    inputs_digest: str = ""
    kind: str = "le"  # "le", "eq" or "skip"
    extra: dict | None = None

    def to_dict(self):
        return asdict(self)

    def line(self):
        status = "SKIP" if self.kind == "skip" else ("PASS" if self.passed else "FAIL")
        return f"{status} {self.name}: lhs={self.lhs:.6e} rhs={self.rhs:.6e} margin={self.margin:.3e}"


def le_report(name, lhs, rhs, digest="", extra=None):
    lhs, rhs = float(lhs), float(rhs)
    tol = abs(rhs) * REL_SLACK + ABS_SLACK
    margin = rhs - lhs
    return CheckReport(name, lhs, rhs, margin, bool(margin >= -tol), tol, digest, "le", extra)


def eq_report(name, lhs, rhs, digest="", rel=EQ_REL):
    lhs, rhs = float(lhs), float(rhs)
    tol = rel * max(abs(lhs), abs(rhs)) + ABS_SLACK
    margin = -abs(lhs - rhs)
    return CheckReport(name, lhs, rhs, margin, bool(abs(lhs - rhs) <= tol), tol, digest, "eq")


def skip_report(name, reason, digest=""):
    return CheckReport(name, 0.0, 0.0, 0.0, True, 0.0, digest, "skip", {"reason": reason})


def _mul(f, g):
    return product(f, g, dealiased=False)


# ----------------------------------------------------------------- Sobolev facts

def check_lemma11(f, g, h, s, digest=""):
    """Sobolev-space facts (i)-(vi) plus their specialised constants."""
    out = []
    n = sobolev_norm
    f1, f2 = derivative(f, 1), derivative(f, 2)
    out.append(eq_report("lemma11.i", n(f, 2) ** 2,
                         n(f, 0) ** 2 + 2 * n(f1, 0) ** 2 + n(f2, 0) ** 2, digest))
    out.append(eq_report("lemma11.i.lambda2", n(f, 2) ** 2, n(f - f2, 0) ** 2, digest))

    fg = _mul(f, g)
    if s > 0.5:
        d_s = algebra_constants(s).d_s
        out.append(le_report("lemma11.ii", n(fg, 0), d_s * n(f, 0) * n(g, s), digest))
    else:
        out.append(skip_report("lemma11.ii", "needs s > 1/2", digest))
    out.append(le_report("lemma11.ii.sqrtpi", n(fg, 0), math.sqrt(math.pi) * n(f, 0) * n(g, 1), digest))
    out.append(le_report("lemma11.ii.two", n(fg, 0), 2 * n(f, 0) * n(g, 1), digest))
    out.append(le_report("lemma11.ii.triple", abs(sobolev_inner(f, _mul(g, h), 0)),
                         2 * n(f, 0) * n(g, 0) * n(h, 1), digest))

    out.append(eq_report("lemma11.iii", n(helmholtz_inv(f, 0), s + 2), n(f, s), digest))
    out.append(le_report("lemma11.iv", n(f1, s), n(f, s + 1), digest))

    if s >= 1:
        c_s = default_c_s(s)
        out.append(le_report("lemma11.v", n(fg, s),
                             c_s * (n(f, s) * n(g, 1) + n(f, 1) * n(g, s)), digest))
    else:
        out.append(skip_report("lemma11.v", "needs s >= 1", digest))
    out.append(le_report("lemma11.v.eight", n(fg, 2), 8 * (n(f, 2) * n(g, 1) + n(f, 1) * n(g, 2)), digest))

    if s > 0.5:
        c_small = algebra_constants(s).c_small_s
        out.append(le_report("lemma11.vi", n(fg, s), c_small * n(f, s) * n(g, s), digest))
    else:
        out.append(skip_report("lemma11.vi", "needs s > 1/2", digest))
    out.append(le_report("lemma11.vi.four", n(fg, 1), 4 * n(f, 1) * n(g, 1), digest))
    out.append(le_report("lemma11.vi.eight", n(fg, 2), 8 * n(f, 2) * n(g, 2), digest))
    return out


# --------------------------------------------------------------- scale norms

def check_prop15(u, v, delta_p, delta, s, K_max=12, c_s=None, digest=""):
    """Scale-norm estimates: monotonicity, product, derivative, smoothing."""
    if not 0 < delta_p < delta <= 1:
        raise RejectedInputError("need 0 < delta' < delta <= 1")
    if s < 2:
        raise RejectedInputError("need s >= 2")

    def E(f, d, ss, K=K_max):
        return e_norm(f, EParams(d, ss, K))[0]

    gap = delta - delta_p
    # bounds that shift the derivative order need one extra term on the right
    Kr = min(K_max + 1, u.grid.j_max)
    C_s = 18.0 * (c_s if c_s is not None else default_c_s(s))
    out = [le_report("prop15.ii", E(_mul(u, v), delta, s), C_s * E(u, delta, s) * E(v, delta, s), digest)]
    for tag, w in (("u", u), ("v", v)):
        out.append(le_report(f"prop15.i.delta.{tag}", E(w, delta_p, s), E(w, delta, s), digest))
        out.append(le_report(f"prop15.i.s.{tag}", E(w, delta, s), E(w, delta, s + 1), digest))
        dw = derivative(w, 1)
        out.append(le_report(f"prop15.iii.a.{tag}", E(dw, delta_p, s), E(w, delta, s, Kr) / gap, digest))
        out.append(le_report(f"prop15.iii.b.{tag}", E(dw, delta, s), E(w, delta, s + 1, Kr), digest))
        for p in (0, 1, 2):
            out.append(le_report(f"prop15.iii.c{p}.{tag}", E(helmholtz_inv(w, p), delta, s),
                                 E(w, delta, s), digest))
        hd = helmholtz_inv(w, 1)
        out.append(le_report(f"prop15.iii.d.{tag}", E(hd, delta_p, s), E(w, delta, s, Kr) / gap, digest))
        out.append(eq_report(f"prop15.iv.{tag}", E(helmholtz_inv(w, 0), delta, s + 2), E(w, delta, s), digest))
        out.append(le_report(f"prop15.v.lower.{tag}", E(hd, delta_p, s + 1), E(hd, delta_p, s + 2), digest))
        out.append(le_report(f"prop15.v.{tag}", E(hd, delta_p, s + 2), E(w, delta, s, Kr) / gap, digest))
    return out


# ------------------------------------------------------------ appendix sums

AB_NAMES = ("AB1", "AB2", "AB3", "AB4", "AB5", "AB6", "AB7")


def ab_lhs(a, b, m):
    """The seven double sums; ``a`` = (a_1..a_{m+1}), ``b`` = (b_0..b_m)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.size != m + 1 or b.size != m + 1:
        raise RejectedInputError(f"need m+1={m + 1} entries in a and b, got {a.size}, {b.size}")
    if np.any(a < 0) or np.any(b < 0) or not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise RejectedInputError("sequences must be finite and non-negative")
    a_full = np.concatenate(([0.0], a))
    return _kernels.ab_sums(a_full, b, m)


def check_ab(a, b, m, digest=""):
    lhs = ab_lhs(a, b, m)
    A, At, B, Bt = sequence_sums(a, b)
    rhs = PI_S6 * np.array([A * At * At, A * At * At, At * B * Bt, At * B * Bt,
                            A * Bt * Bt, A * Bt * Bt, At * B * Bt])
    return [le_report(name, l, r, digest) for name, l, r in zip(AB_NAMES, lhs, rhs)]


def check_a2(st, sigma, m, digest=""):
    q = seq_quantities(st, sigma, m)
    pv = phi(st, sigma, m)
    es = math.exp(sigma)
    return [
        le_report("A2.first", math.exp(-2 * sigma) * q.A * q.A_tilde ** 2,
                  2 * math.sqrt(2) * es * math.sqrt(pv.phi1) * pv.dphi1, digest),
        le_report("A2.second", q.A_tilde * q.B * q.B_tilde,
                  2 * es * math.sqrt(pv.phi2) * math.sqrt(pv.dphi1 * pv.dphi2), digest),
        eq_report("A2.third", q.A * q.B_tilde ** 2, math.sqrt(2) * es * math.sqrt(pv.phi1) * pv.dphi2, digest),
    ]


# ---------------------------------------------------------- sectional estimates

SECTION_NAMES = tuple(f"est{i}" for i in range(1, 9))


def _dealiased(f, g):
    return product(f, g, dealiased=True)


def sectional_terms(st, sigma, m):
    """The eight weighted pairing sums E1..E8 (signed), built term by term.

    Products are dealiased exactly as in :func:`ch2lab.system.rhs`, so that
    ``pairing = -b E1 + a E2 - (3-b)/2 E3 - b/2 E4 - E5 - E6/2 - E7 - E8``.
    """
    if m + 3 > st.grid.j_max:
        raise OrderOverflowError(f"m={m} too large for j_max={st.grid.j_max}")
    u, v = st.u, st.v
    ux = derivative(u, 1)
    uu = _dealiased(u, u)
    G = [
        0.5 * derivative(uu, 1),                    # u u_x
        helmholtz_inv(u, 1),                        # Lambda^-2 d u
        helmholtz_inv(uu, 1),                       # Lambda^-2 d u^2
        helmholtz_inv(_dealiased(ux, ux), 1),       # Lambda^-2 d u_x^2
        helmholtz_inv(v, 1),                        # Lambda^-2 d v
        helmholtz_inv(_dealiased(v, v), 1),         # Lambda^-2 d v^2
    ]
    terms = [weighted_h2_pairing(u, g, sigma, 1, m + 1, 1) for g in G]
    terms.append(weighted_h2_pairing(v, ux, sigma, 0, m, 0))
    terms.append(weighted_h2_pairing(v, derivative(_dealiased(u, v), 1), sigma, 0, m, 0))
    return np.array(terms)


def section_coefficients(p):
    """Weights of |E_i| in the triangle bound of the pairing."""
    return np.array([abs(p.beta), abs(p.alpha), abs(3 - p.beta) / 2, abs(p.beta) / 2, 1.0, 0.5, 1.0, 1.0])


def section_signs(p):
    return np.array([-p.beta, p.alpha, -(3 - p.beta) / 2, -p.beta / 2, -1.0, -0.5, -1.0, -1.0])


def _norm_inputs(st, sigma, m):
    pv = phi(st, sigma, m)
    return dict(u3=sobolev_norm(st.u, 3), v3=sobolev_norm(st.v, 3), v2=sobolev_norm(st.v, 2),
                Phi=pv.phi, dPhi=pv.dphi, es=math.exp(sigma))


def sectional_rhs(u3, v3, v2, Phi, dPhi, es):
    """Printed right-hand sides of the eight estimates."""
    sq = math.sqrt(Phi)
    e2 = es * es
    return np.array([
        96 * u3 * Phi + (16 * u3 + 32 * PI_S3 * es * sq) * dPhi,
        2 * Phi,
        192 * u3 * Phi + (32 * u3 + 64 * PI_S3 * es * sq) * dPhi,
        64 * u3 * Phi + (16 * u3 + 32 * PI_S3 * es * sq) * dPhi,
        Phi,
        (16 * u3 + 8 * v2) * Phi + 16 * PI_S6 * sq * dPhi,
        4 * Phi + 2 * dPhi,
        ((66 + 16 * e2) * u3 + (18 + 8 * e2) * v3) * Phi
        + 16 * PI_S3 * (1 + math.sqrt(2)) * es * sq * dPhi
        + (8 * u3 + (4 * e2 + 13) * v3) * dPhi,
    ])


def sectional_bounds(st, p, sigma, m, digest=""):
    terms = sectional_terms(st, sigma, m)
    rhs = sectional_rhs(**_norm_inputs(st, sigma, m))
    return [le_report(name, abs(t), r, digest) for name, t, r in zip(SECTION_NAMES, terms, rhs)]


def assemble_constants(p, sigma):
    """Constants K1, K2, L1, L2, M1, M2, M3 of the main estimate at a fixed sigma.

    The estimate-8 terms carrying e^{2 sigma} in front of Phi are folded into
    K2 at the given sigma; ||u||_3, ||v||_3, ||v||_2 are each bounded by the
    pair norm ||(u, v)||_3 = ||u||_3 + ||v||_3.
    """
    c = section_coefficients(p)
    e2 = math.exp(2 * sigma)
    ku = 96 * c[0] + 192 * c[2] + 64 * c[3] + 16 * c[5] + (66 + 16 * e2) * c[7]
    kv = 8 * c[5] + (18 + 8 * e2) * c[7]
    mu = 16 * c[0] + 32 * c[2] + 16 * c[3] + 8 * c[7]
    return dict(
        K1=2 * c[1] + c[4] + 4 * c[6],
        K2=max(ku, kv),
        L1=16 * PI_S6 * c[5],
        L2=32 * PI_S3 * c[0] + 64 * PI_S3 * c[2] + 32 * PI_S3 * c[3] + 16 * PI_S3 * (1 + math.sqrt(2)) * c[7],
        M1=2 * c[6],
        M2=max(mu, 13 * c[7]),
        M3=4 * c[7],
    )


def main_estimate(st, p, sigma, m, digest=""):
    """|<F, D Phi>| against the weighted sum of the eight sectional bounds."""
    lhs = abs(pairing(st, p, sigma, m))
    terms = sectional_terms(st, sigma, m)
    ni = _norm_inputs(st, sigma, m)
    coeff = section_coefficients(p)
    rhs = float(coeff @ sectional_rhs(**ni))
    triangle = float(coeff @ np.abs(terms))
    k = assemble_constants(p, sigma)
    n3 = ni["u3"] + ni["v3"]
    shaped = ((k["K1"] + k["K2"] * n3) * ni["Phi"]
              + (k["L1"] + k["L2"] * ni["es"]) * math.sqrt(ni["Phi"]) * ni["dPhi"]
              + (k["M1"] + (k["M2"] + k["M3"] * ni["es"] ** 2) * n3) * ni["dPhi"])
    extra = dict(constants=k, triangle=triangle, shaped_rhs=shaped,
                 combination=float(section_signs(p) @ terms))
    return le_report("main_estimate", lhs, rhs, digest, extra)


# ------------------------------------------------------------- random fixtures

def random_analytic_field(grid, rng, r, amplitude=1.0, band=None):
    """Real trigonometric polynomial with Gaussian coefficients damped by e^{-r|xi|}.

    Modes are kept for |xi| <= ``band`` (default N/(6P)) so that products of two
    fixtures are resolved exactly and survive two-thirds dealiasing.
    """
    if band is None:
        band = grid.N / (6.0 * grid.P)
    half = np.abs(grid.xi) <= band
    coef = (rng.standard_normal(grid.N) + 1j * rng.standard_normal(grid.N)) * np.exp(-r * np.abs(grid.xi))
    coef = np.where(half, coef, 0.0)
    # Hermitian symmetrisation
    idx = (-grid.k) % grid.N
    coef = 0.5 * (coef + np.conj(coef[idx]))
    coef[grid.nyquist] = 0.0
    f = Field.from_spectrum(grid, coef)
    nrm = sobolev_norm(f, 0)
    return f * (amplitude / nrm) if nrm > 0 else f


def random_decay_sequence(rng, n, rate=None):
    """Non-negative sequence with geometric decay and random jitter."""
    rate = rng.uniform(0.05, 2.0) if rate is None else rate
    return rng.uniform(0.0, 1.0, n) * np.exp(-rate * np.arange(n)) * rng.lognormal(0.0, 1.0)


def ensemble_case(grid, seed):
    """Random inputs for one verification case: (u, v, h, r, m, sigma, s, delta', delta)."""
    rng = np.random.default_rng(seed)
    r = rng.uniform(0.5, 3.0)
    amp_u, amp_v, amp_h = np.exp(rng.uniform(np.log(0.05), np.log(2.0), 3))
    u = random_analytic_field(grid, rng, r, amp_u)
    v = random_analytic_field(grid, rng, r, amp_v)
    h = random_analytic_field(grid, rng, rng.uniform(0.5, 3.0), amp_h)
    m = int(rng.integers(2, 7))
    sigma = float(rng.uniform(-2.0, 0.0))
    s = float(rng.choice([1.0, 1.5, 2.0, 3.0]))
    delta = float(rng.uniform(0.2, 1.0))
    delta_p = float(rng.uniform(0.05, 0.95) * delta)
    return dict(u=u, v=v, h=h, r=r, m=m, sigma=sigma, s=s, delta=delta, delta_p=delta_p, rng=rng)


def run_case(grid, seed, p):
    """Every checker on one seeded random case."""
    c = ensemble_case(grid, seed)
    tag = f"seed={seed}"
    st = State(c["u"], c["v"])
    reports = []
    reports += check_lemma11(c["u"], c["v"], c["h"], c["s"], tag)
    reports += check_prop15(c["u"], c["v"], c["delta_p"], c["delta"], max(2.0, c["s"]), digest=tag)
    q = seq_quantities(st, c["sigma"], c["m"])
    reports += check_ab(q.a, q.b, c["m"], tag)
    mm = int(c["rng"].integers(1, 65))
    reports += [CheckReport(rep.name + ".random", **{k: v for k, v in rep.to_dict().items() if k != "name"})
                for rep in check_ab(random_decay_sequence(c["rng"], mm + 1),
                                    random_decay_sequence(c["rng"], mm + 1), mm, tag)]
    reports += check_a2(st, c["sigma"], c["m"], tag)
    reports += sectional_bounds(st, p, c["sigma"], c["m"], tag)
    reports.append(main_estimate(st, p, c["sigma"], c["m"], tag))
    return reports


def summarize(reports):
    """Per-name minimum margin and failure count."""
    out = {}
    for rep in reports:
        if rep.kind == "skip":
            continue
        d = out.setdefault(rep.name, {"count": 0, "failures": 0, "min_margin": math.inf,
                                      "min_rel_margin": math.inf})
        d["count"] += 1
        d["failures"] += 0 if rep.passed else 1
        d["min_margin"] = min(d["min_margin"], rep.margin)
        scale = max(abs(rep.rhs), abs(rep.lhs))
        d["min_rel_margin"] = min(d["min_rel_margin"], rep.margin / scale if scale > 0 else 0.0)
    return out
