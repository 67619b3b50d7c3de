"""Command-line entry point: ``ch2lab {verify,lifespan,taylor,evolve}``.

Artifacts go to the output directory as deterministic JSON/CSV/text files.
The exit status is 1 when a hard check fails (or, with ``--strict``, when a
soft flag is raised), 2 on configuration or input errors, 0 otherwise.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import evolution, inequalities, lifespan, taylor
from .config import RunConfig, parse_config, serialize_config
from .errors import BlowupError, Ch2LabError
from .system import State

log = logging.getLogger("ch2lab")

THREADS_ENV = "CH2LAB_THREADS"


class Outcome:
    """Collects hard failures and soft flags for one command."""

    def __init__(self):
        self.hard = []
        self.soft = []

    def check(self, ok, message, hard=True):
        if not ok:
            (self.hard if hard else self.soft).append(message)
        return ok

    def status(self, strict):
        return 1 if self.hard or (strict and self.soft) else 0

    def to_dict(self):
        return {"hard_failures": self.hard, "soft_flags": self.soft}


def _clean(x):
    """JSON-safe copy: non-finite floats become strings, numpy scalars plain."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def write_json(path, obj):
    Path(path).write_text(json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n")


def write_columns(path, rows, header):
    lines = [f"# {header}"] + [" ".join(repr(float(v)) for v in row) for row in rows]
    Path(path).write_text("\n".join(lines) + "\n")


def _threads():
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


# ------------------------------------------------------------- commands

def _zero_case(grid, p, m):
    z = State.zeros(grid)
    reps = []
    reps += inequalities.check_lemma11(z.u, z.v, z.u, 2.0, "zero")
    reps += inequalities.check_prop15(z.u, z.v, 0.25, 0.5, 2.0, digest="zero")
    reps += inequalities.check_ab(np.zeros(m + 1), np.zeros(m + 1), m, "zero")
    reps += inequalities.check_a2(z, -1.0, m, "zero")
    reps += inequalities.sectional_bounds(z, p, -1.0, m, "zero")
    reps.append(inequalities.main_estimate(z, p, -1.0, m, "zero"))
    return reps


def cmd_verify(cfg, out, seed, outcome):
    grid, p = cfg.grid(), cfg.params()
    base = cfg["verify.seed"] if seed is None else seed
    n = cfg["verify.ensemble"]
    if cfg["verify.zero_only"]:
        batches = [_zero_case(grid, p, cfg["norms.m"]) for _ in range(n)]
    else:
        seeds = [base + i for i in range(n)]
        with ThreadPoolExecutor(_threads()) as pool:
            batches = list(pool.map(lambda sd: inequalities.run_case(grid, sd, p), seeds))
    reports = [r for b in batches for r in b]
    summary = inequalities.summarize(reports)
    failures = [r.to_dict() for r in reports if not r.passed]
    for name, d in summary.items():
        outcome.check(d["failures"] == 0, f"{name}: {d['failures']} of {d['count']} cases failed")
    write_json(out / "verify.json", {"cases": n, "base_seed": base, "zero_only": cfg["verify.zero_only"],
                                     "reports": len(reports), "summary": summary,
                                     "failures": failures[:100], **outcome.to_dict()})


def cmd_lifespan(cfg, out, seed, outcome):
    p, s = cfg.params(), cfg["norms.s"]
    st0 = cfg.state()
    rep = lifespan.lifespan_T(st0, p, s)
    outcome.check(rep.fit_consistent, "closed-form gamma1/gamma2 disagree with the two-radius fit")
    try:
        var = lifespan.lifespan_scaled_variant(st0, p, s, cfg["lifespan.Delta"]).to_dict()
    except Ch2LabError as exc:
        var = {"error": str(exc)}
        outcome.check(False, f"scaled variant: {exc}", hard=False)
    lams = np.logspace(math.log10(cfg["lifespan.lambda_min"]), math.log10(cfg["lifespan.lambda_max"]),
                       cfg["lifespan.lambda_points"])
    rows = lifespan.lambda_sweep(st0, p, s, lams)
    Ts = [r[2] for r in rows]
    outcome.check(all(b < a for a, b in zip(Ts, Ts[1:])), "T(lambda) is not strictly decreasing")
    small = abs(rows[0][3] - 1.0)
    large = abs(rows[-1][4] - 1.0)
    outcome.check(small <= 1e-6, f"small-data end: |T gamma2 - 1| = {small:.3e} > 1e-6", hard=False)
    outcome.check(large <= 1e-3, f"large-data end: |T gamma1 R - 1| = {large:.3e} > 1e-3", hard=False)
    with open(out / "lifespan_sweep.csv", "w") as fh:
        fh.write("lambda,R,T,T_gamma2,T_gamma1_R\n")
        for row in rows:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")
    write_columns(out / "lifespan_T.dat", [(r[0], r[2]) for r in rows], "lambda T")
    write_json(out / "lifespan.json", {"report": rep.to_dict(), "scaled_variant": var,
                                       "small_end_deviation": small, "large_end_deviation": large,
                                       **outcome.to_dict()})


def cmd_taylor(cfg, out, seed, outcome):
    p, s, delta = cfg.params(), cfg["norms.s"], cfg["norms.delta"]
    st0 = cfg.state()
    series = taylor.taylor_coeffs(st0, p, cfg["taylor.K"])
    res = taylor.recursion_residuals(series)
    outcome.check(float(np.max(res, initial=0.0)) <= 1e-10, "recursion residual above 1e-10")
    norms = series.scale_norms(delta, s)
    result = {"norms": norms, "residuals": res.tolist()}
    try:
        T = lifespan.lifespan_T(st0, p, s).T
        result["T"] = T
        radius = taylor.disk_radius(norms, delta, s)
        result["disk_radius"] = radius
        outcome.check(radius >= T * (1 - delta), "estimated disk radius below T(1-delta)")
        t = cfg["taylor.picard_fraction"] * T * (1 - delta)
        pr = taylor.picard_probe(st0, p, t, delta, s, cfg["taylor.picard_iters"])
        result["picard"] = {"t": t, "diffs": pr.diffs, "ratios": pr.ratios, "diverged": pr.diverged}
        outcome.check(pr.contracting(), "Picard differences do not contract")
        outcome.check(not pr.diverged, "Picard differences grew over three consecutive iterations", hard=False)
    except Ch2LabError as exc:
        result["error"] = str(exc)
        outcome.check(False, f"taylor: {exc}", hard=False)
    write_columns(out / "taylor_norms.dat", list(enumerate(norms)), "k ||U_k||")
    write_json(out / "taylor.json", {**result, **outcome.to_dict()})


def cmd_evolve(cfg, out, seed, outcome):
    p = cfg.params()
    st0 = cfg.state()
    if cfg["run.global"]:
        outcome.check(st0.is_admissible(), "run.global: min v0 must exceed -1")
    try:
        traj = evolution.evolve(st0, p, cfg["time.t_end"], cfg["time.dt"], cfg["time.save_every"])
    except BlowupError as exc:
        traj = exc.last_good
        outcome.check(False, f"blowup at t={exc.time}")
    for flag in traj.flags:
        outcome.check(False, flag, hard=False)
    summary = {"times": traj.times}
    track = None
    try:
        track = evolution.strip_bound(traj, cfg["norms.sigma0"], cfg["norms.sigma_bar"],
                                      cfg["norms.m_trunc"], p=p, J_max=cfg["norms.J_max"])
        outcome.check(track.all_hold, "measured radius below e^sigma(t) at some snapshot")
        reps = evolution.phi_liapunov_check(traj, cfg["norms.sigma0"], cfg["norms.m"],
                                            track.K, track.L, track.M)
        outcome.check(all(r.passed for r in reps), "Phi exceeds r(t) at some snapshot")
        summary["strip"] = track.to_dict()
        summary["liapunov"] = [r.to_dict() for r in reps]
    except Ch2LabError as exc:
        summary["error"] = str(exc)
        outcome.check(False, f"strip tracking: {exc}")
    d0, d1 = traj.diagnostics[0], traj.diagnostics[-1]
    drift = max(abs(d1["int_u"] - d0["int_u"]), abs(d1["int_v"] - d0["int_v"]))
    summary["mean_drift"] = drift
    outcome.check(drift <= 1e-10 * max(1.0, traj.times[-1]), f"mean drift {drift:.3e}", hard=False)
    (out / "trajectory.csv").write_text(evolution.trajectory_csv(traj, track))
    if track is not None:
        write_columns(out / "radius.dat", list(zip(track.times, track.radius)), "t measured_radius")
    write_json(out / "evolve.json", {**summary, **outcome.to_dict()})


COMMANDS = {"verify": cmd_verify, "lifespan": cmd_lifespan, "taylor": cmd_taylor, "evolve": cmd_evolve}


def build_parser():
    ap = argparse.ArgumentParser(prog="ch2lab", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", type=Path, help="key-value configuration file")
    ap.add_argument("--seed", type=int, help="base seed for random ensembles")
    ap.add_argument("--out", type=Path, help="output directory (overrides output.dir)")
    ap.add_argument("--strict", action="store_true", help="treat soft flags as failures")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = parse_config(args.config.read_text()) if args.config else RunConfig()
    except (OSError, Ch2LabError) as exc:
        print(f"ch2lab: config error: {exc}", file=sys.stderr)
        return 2
    if args.seed is not None and args.seed < 0:
        print("ch2lab: --seed must be nonnegative", file=sys.stderr)
        return 2
    out = args.out if args.out is not None else Path(cfg["output.dir"])
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.effective").write_text(serialize_config(cfg))
    outcome = Outcome()
    try:
        COMMANDS[args.command](cfg, out, args.seed, outcome)
    except Ch2LabError as exc:
        print(f"ch2lab {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    for msg in outcome.hard:
        print(f"FAIL {msg}")
    for msg in outcome.soft:
        print(f"FLAG {msg}")
    status = outcome.status(args.strict)
    print(f"{args.command}: {'ok' if status == 0 else 'failed'} ({len(outcome.hard)} hard, "
          f"{len(outcome.soft)} soft) -> {out}")
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
