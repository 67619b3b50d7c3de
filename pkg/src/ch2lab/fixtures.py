"""Initial-data fixtures: closed-form profiles, synthetic spectra, files."""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import RejectedInputError
from .spectral import Field, make_field

PROFILES = ("gaussian", "sech", "sech2", "synthetic_spectrum", "from_file", "zero")


def gaussian(grid, amplitude=1.0, width=1.0, center=0.0):
    return make_field(grid, lambda x: amplitude * np.exp(-((x - center) / width) ** 2))


def sech(grid, amplitude=1.0, width=1.0, center=0.0):
    return make_field(grid, lambda x: amplitude / np.cosh((x - center) / width))


def sech2(grid, amplitude=1.0, width=1.0, center=0.0):
    return make_field(grid, lambda x: amplitude / np.cosh((x - center) / width) ** 2)


def synthetic_spectrum(grid, rate=1.0, amplitude=1.0):
    """Field whose transform is exactly ``amplitude * exp(-rate |xi|)``."""
    if rate <= 0:
        raise RejectedInputError("decay rate must be positive")
    spec = amplitude * np.exp(-rate * np.abs(grid.xi))
    spec[grid.nyquist] = 0.0
    return Field.from_spectrum(grid, spec)


def from_file(grid, path):
    """Load samples from text.

    One column: exactly N values on the grid.  Two columns: (x, f) pairs,
    interpolated periodically onto the grid.
    """
    try:
        data = np.loadtxt(Path(path), ndmin=2)
    except (OSError, ValueError) as exc:
        raise RejectedInputError(f"cannot read samples from {path}: {exc}") from exc
    if data.shape[1] == 1:
        vals = data[:, 0]
        if vals.size != grid.N:
            raise RejectedInputError(f"{path}: expected {grid.N} samples, got {vals.size}")
        return Field.from_samples(grid, vals)
    if data.shape[1] != 2:
        raise RejectedInputError(f"{path}: expected one or two columns")
    xs, fs = data[:, 0], data[:, 1]
    order = np.argsort(xs)
    vals = np.interp(grid.x, xs[order], fs[order], period=grid.length)
    return Field.from_samples(grid, vals)


def build(grid, name, **kw):
    """Dispatch by profile name; keyword arguments go to the profile."""
    if name == "gaussian":
        return gaussian(grid, **kw)
    if name == "sech":
        return sech(grid, **kw)
    if name == "sech2":
        return sech2(grid, **kw)
    if name == "synthetic_spectrum":
        return synthetic_spectrum(grid, **kw)
    if name == "from_file":
        return from_file(grid, **kw)
    if name == "zero":
        return Field.zeros(grid)
    raise RejectedInputError(f"unknown profile {name!r}; choose from {', '.join(PROFILES)}")
