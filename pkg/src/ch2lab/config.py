"""Plain ``section.key = value`` run configuration.

One assignment per line, ``#`` starts a comment, blank lines are ignored.
Every key has a type, a default and a range check; unknown keys are errors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ConfigError
from .fixtures import PROFILES

_pos = (lambda x: x > 0, "must be positive")
_nonneg = (lambda x: x >= 0, "must be nonnegative")
_any = (lambda x: True, "")
_unit = (lambda x: 0 < x < 1, "must lie in (0, 1)")
_unit_closed = (lambda x: 0 < x <= 1, "must lie in (0, 1]")
_profile = (lambda x: x in PROFILES, "must be one of " + ", ".join(PROFILES))


def _even(x):
    return x >= 8 and x % 2 == 0


def _profile_keys(prefix, profile, amplitude):
    return {
        f"{prefix}.profile": (str, profile, _profile),
        f"{prefix}.amplitude": (float, amplitude, _any),
        f"{prefix}.width": (float, 1.0, _pos),
        f"{prefix}.center": (float, 0.0, _any),
        f"{prefix}.rate": (float, 1.0, _pos),
        f"{prefix}.path": (str, "", _any),
    }


SCHEMA = {
    "grid.P": (float, 16.0, _pos),
    "grid.N": (int, 1024, (_even, "must be an even integer >= 8")),
    "grid.j_max": (int, 16, (lambda x: 4 <= x <= 40, "must lie in [4, 40]")),
    "params.alpha": (float, 0.0, _any),
    "params.beta": (float, 1.0, _any),
    **_profile_keys("u0", "gaussian", 1.0),
    **_profile_keys("v0", "gaussian", 1.0),
    "norms.sigma0": (float, -1.0, _any),
    "norms.sigma_bar": (float, 0.0, _any),
    "norms.m": (int, 4, (lambda x: 1 <= x <= 12, "must lie in [1, 12]")),
    "norms.m_trunc": (int, 6, (lambda x: x >= 1, "must be >= 1")),
    "norms.s": (float, 2.0, (lambda x: x >= 2, "must be >= 2")),
    "norms.delta": (float, 0.5, _unit),
    "norms.J_max": (int, 12, (lambda x: 1 <= x <= 40, "must lie in [1, 40]")),
    "time.t_end": (float, 2.0, _nonneg),
    "time.dt": (float, 0.01, _pos),
    "time.save_every": (int, 10, (lambda x: x >= 1, "must be >= 1")),
    "verify.seed": (int, 0, _nonneg),
    "verify.ensemble": (int, 200, (lambda x: x >= 1, "must be >= 1")),
    "verify.zero_only": (bool, False, _any),
    "lifespan.lambda_min": (float, 1e-3, _pos),
    "lifespan.lambda_max": (float, 1e3, _pos),
    "lifespan.lambda_points": (int, 13, (lambda x: x >= 2, "must be >= 2")),
    "lifespan.Delta": (float, 0.5, _unit_closed),
    "taylor.K": (int, 12, (lambda x: 6 <= x <= 20, "must lie in [6, 20]")),
    "taylor.picard_iters": (int, 8, (lambda x: x >= 4, "must be >= 4")),
    "taylor.picard_fraction": (float, 0.25, _unit),
    "output.dir": (str, "out", _any),
    "output.formats": (str, "json,csv", _any),
    "run.global": (bool, False, _any),
}


def _convert(kind, raw, key, line):
    try:
        if kind is bool:
            low = raw.lower()
            if low in ("true", "yes", "1", "on"):
                return True
            if low in ("false", "no", "0", "off"):
                return False
            raise ValueError(raw)
        if kind is int:
            return int(raw)
        if kind is float:
            val = float(raw)
            if not math.isfinite(val):
                raise ValueError(raw)
            return val
        if len(raw) >= 2 and raw[0] == raw[-1] and raw[0] in "\"'":
            return raw[1:-1]
        return raw
    except ValueError:
        raise ConfigError(f"{key}: cannot read {raw!r} as {kind.__name__}", line) from None


@dataclass
class RunConfig:
    values: dict = field(default_factory=lambda: {k: v[1] for k, v in SCHEMA.items()})

    def __getitem__(self, key):
        return self.values[key]

    def grid(self):
        from .spectral import Grid
        return Grid(self["grid.P"], self["grid.N"], self["grid.j_max"])

    def params(self):
        from .system import SystemParams
        return SystemParams(self["params.alpha"], self["params.beta"])

    def profile(self, prefix):
        name = self[f"{prefix}.profile"]
        kw = {}
        if name in ("gaussian", "sech", "sech2"):
            kw = dict(amplitude=self[f"{prefix}.amplitude"], width=self[f"{prefix}.width"],
                      center=self[f"{prefix}.center"])
        elif name == "synthetic_spectrum":
            kw = dict(rate=self[f"{prefix}.rate"], amplitude=self[f"{prefix}.amplitude"])
        elif name == "from_file":
            kw = dict(path=self[f"{prefix}.path"])
        return name, kw

    def state(self, grid=None):
        from . import fixtures
        from .system import State
        grid = grid or self.grid()
        fields = []
        for pre in ("u0", "v0"):
            name, kw = self.profile(pre)
            fields.append(fixtures.build(grid, name, **kw))
        return State(*fields)


def _validate(values, lines):
    for key, (kind, _, (ok, why)) in SCHEMA.items():
        if not ok(values[key]):
            raise ConfigError(f"{key} = {values[key]!r} {why}", lines.get(key))
    for pre in ("u0", "v0"):
        if values[f"{pre}.profile"] == "from_file" and not values[f"{pre}.path"]:
            raise ConfigError(f"{pre}.path is required for profile from_file", lines.get(f"{pre}.profile"))
    if values["norms.sigma0"] > values["norms.sigma_bar"]:
        raise ConfigError("norms.sigma0 must not exceed norms.sigma_bar", lines.get("norms.sigma0"))
    if values["lifespan.lambda_min"] >= values["lifespan.lambda_max"]:
        raise ConfigError("lifespan.lambda_min must be below lifespan.lambda_max", lines.get("lifespan.lambda_min"))
    if values["norms.m"] + 3 > values["grid.j_max"]:
        raise ConfigError("norms.m + 3 must not exceed grid.j_max", lines.get("norms.m"))
    if values["run.global"] and not 0 < values["params.beta"] < 2:
        raise ConfigError(f"run.global requires 0 < beta < 2, got beta = {values['params.beta']}",
                          lines.get("params.beta", lines.get("run.global")))


def parse_config(text):
    values = {k: v[1] for k, v in SCHEMA.items()}
    lines = {}
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"expected 'section.key = value', got {raw.strip()!r}", no)
        key, val = (part.strip() for part in body.split("=", 1))
        if key not in SCHEMA:
            raise ConfigError(f"unknown key {key!r}", no)
        if key in lines:
            raise ConfigError(f"duplicate key {key!r} (first set on line {lines[key]})", no)
        if not val:
            raise ConfigError(f"missing value for {key!r}", no)
        values[key] = _convert(SCHEMA[key][0], val, key, no)
        lines[key] = no
    _validate(values, lines)
    return RunConfig(values)


def _render(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, str):
        return f'"{v}"' if (v == "" or v != v.strip()) else v
    return str(v)


def serialize_config(cfg):
    """Canonical text form, every key written; parse(serialize(c)) == c."""
    out, section = [], None
    for key in SCHEMA:
        sec = key.split(".", 1)[0]
        if sec != section:
            if section is not None:
                out.append("")
            section = sec
        out.append(f"{key} = {_render(cfg.values[key])}")
    return "\n".join(out) + "\n"
