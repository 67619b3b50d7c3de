"""Fields on a periodised line ``[-P*pi, P*pi)`` and their Fourier calculus.

A :class:`Field` keeps grid samples and a Fourier spectrum side by side.  The
spectrum is the Riemann-sum approximation of the continuous transform
``fhat(xi) = int f(x) exp(-i xi x) dx`` on the wavenumbers ``xi_k = k/P``, so
Sobolev norms are quadratures of their real-line definitions::

    ||f||_s^2 = (2 pi)^-1 sum_k (1 + xi_k^2)^s |fhat(xi_k)|^2 dxi,   dxi = 1/P.

Arrays are stored in numpy's FFT ordering (``k = 0, 1, ..., N/2-1, -N/2, ..., -1``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import IncompatibleGridError, OrderOverflowError, RejectedInputError

J_MAX = 16


@dataclass(frozen=True)
class Grid:
    """Uniform grid with ``N`` points on ``[-P*pi, P*pi)``."""

    P: float = 16.0
    N: int = 1024
    j_max: int = J_MAX
    x: np.ndarray = field(init=False, repr=False, compare=False)
    k: np.ndarray = field(init=False, repr=False, compare=False)
    xi: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not (self.P > 0 and math.isfinite(self.P)):
            raise RejectedInputError(f"half-width factor P must be positive, got {self.P}")
        if int(self.N) != self.N or self.N < 8 or self.N % 2:
            raise RejectedInputError(f"mode count N must be an even integer >= 8, got {self.N}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "P", float(self.P))
        x = -self.P * np.pi + self.dx * np.arange(self.N)
        k = np.fft.fftfreq(self.N, d=1.0 / self.N).round().astype(np.int64)
        for name, arr in (("x", x), ("k", k), ("xi", k / self.P)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def length(self):
        return 2.0 * np.pi * self.P

    @property
    def dx(self):
        return self.length / self.N

    @property
    def dxi(self):
        return 1.0 / self.P

    @property
    def nyquist(self):
        """Index (FFT order) of the unpaired k = -N/2 mode."""
        return self.N // 2

    @property
    def phase(self):
        # exp(-i xi_k x_0) with x_0 = -P*pi is (-1)^k
        return np.where(self.k % 2 == 0, 1.0, -1.0)

    def key(self):
        return (self.P, self.N)


def _same_grid(f, g):
    if f.grid.key() != g.grid.key():
        raise IncompatibleGridError(f"grids differ: {f.grid.key()} vs {g.grid.key()}")


class Field:
    """Real function on a :class:`Grid`, held as samples and spectrum.

    Instances are immutable; build them with :func:`make_field`,
    :meth:`from_samples` or :meth:`from_spectrum`.
    """

    __slots__ = ("grid", "samples", "spectrum")

    def __init__(self, grid, samples, spectrum):
        samples = np.array(samples, dtype=np.float64)
        spectrum = np.array(spectrum, dtype=np.complex128)
        samples.setflags(write=False)
        spectrum.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "spectrum", spectrum)

    def __setattr__(self, name, value):
        raise AttributeError("Field is immutable")

    @classmethod
    def from_samples(cls, grid, samples):
        samples = np.asarray(samples, dtype=np.float64)
        if samples.shape != (grid.N,):
            raise RejectedInputError(f"expected {grid.N} samples, got shape {samples.shape}")
        if not np.all(np.isfinite(samples)):
            raise RejectedInputError("non-finite sample values")
        spectrum = grid.dx * grid.phase * np.fft.fft(samples)
        return cls(grid, samples, spectrum)

    @classmethod
    def from_spectrum(cls, grid, spectrum):
        spectrum = np.asarray(spectrum, dtype=np.complex128)
        if spectrum.shape != (grid.N,):
            raise RejectedInputError(f"expected {grid.N} coefficients, got shape {spectrum.shape}")
        samples = np.fft.ifft(spectrum * grid.phase / grid.dx).real
        return cls(grid, samples, spectrum)

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros(grid.N), np.zeros(grid.N, dtype=np.complex128))

    # linear structure; products go through :func:`product`
    def __add__(self, other):
        _same_grid(self, other)
        return Field(self.grid, self.samples + other.samples, self.spectrum + other.spectrum)

    def __sub__(self, other):
        _same_grid(self, other)
        return Field(self.grid, self.samples - other.samples, self.spectrum - other.spectrum)

    def __neg__(self):
        return Field(self.grid, -self.samples, -self.spectrum)

    def __mul__(self, c):
        if isinstance(c, Field):
            return NotImplemented
        return Field(self.grid, c * self.samples, c * self.spectrum)

    __rmul__ = __mul__

    def __repr__(self):
        return f"Field(P={self.grid.P}, N={self.grid.N}, max|f|={np.abs(self.samples).max():.3e})"

    def is_zero(self):
        return not np.any(self.spectrum)


def make_field(grid, sampler):
    """Sample ``sampler`` (vectorised callable) on the grid."""
    values = np.asarray(sampler(grid.x), dtype=np.float64)
    if values.ndim == 0:
        values = np.full(grid.N, float(values))
    return Field.from_samples(grid, values)


def derivative_multiplier(grid, j):
    """(i xi)^j with the Nyquist mode removed for j >= 1."""
    if j < 0:
        raise RejectedInputError("derivative order must be nonnegative")
    if j > grid.j_max:
        raise OrderOverflowError(f"derivative order {j} exceeds j_max={grid.j_max}")
    mult = (1j ** (j % 4)) * grid.xi ** j
    if j:
        mult[grid.nyquist] = 0.0
    return mult


def derivative(f, j=1):
    return Field.from_spectrum(f.grid, f.spectrum * derivative_multiplier(f.grid, j))


def helmholtz_inv(f, p=0):
    """Lambda^{-2} d^p f, i.e. multiplier (i xi)^p / (1 + xi^2), for p in {0, 1, 2}."""
    if p not in (0, 1, 2):
        raise RejectedInputError(f"p must be 0, 1 or 2, got {p}")
    xi = f.grid.xi
    mult = derivative_multiplier(f.grid, p) / (1.0 + xi * xi)
    return Field.from_spectrum(f.grid, f.spectrum * mult)


def bessel_weight(grid, s):
    return (1.0 + grid.xi ** 2) ** s


def sobolev_norm(f, s=0.0):
    if s < 0:
        raise RejectedInputError("Sobolev index must be >= 0")
    return math.sqrt(sobolev_inner(f, f, s))


def sobolev_inner(f, g, s=0.0):
    _same_grid(f, g)
    w = bessel_weight(f.grid, s)
    val = np.sum(w * (f.spectrum.real * g.spectrum.real + f.spectrum.imag * g.spectrum.imag))
    return float(val * f.grid.dxi / (2.0 * np.pi))


def derivative_sq_norms(f, jmax, s):
    """Array of ||f^{(j)}||_s^2 for j = 0..jmax, evaluated directly on the spectrum.

    Matches ``sobolev_norm(derivative(f, j), s)**2`` (same Nyquist convention)
    without building intermediate fields.
    """
    grid = f.grid
    if jmax > grid.j_max:
        raise OrderOverflowError(f"derivative order {jmax} exceeds j_max={grid.j_max}")
    power = np.abs(f.spectrum) ** 2 * bessel_weight(grid, s)
    xi2 = grid.xi ** 2
    out = np.empty(jmax + 1)
    out[0] = power.sum()
    power = power.copy()
    power[grid.nyquist] = 0.0
    for j in range(1, jmax + 1):
        power = power * xi2
        out[j] = power.sum()
    return out * grid.dxi / (2.0 * np.pi)


def dealias(f):
    """Two-thirds rule: drop modes with |k| > N/3."""
    keep = np.abs(f.grid.k) <= f.grid.N / 3.0
    return Field.from_spectrum(f.grid, np.where(keep, f.spectrum, 0.0))


def product(f, g, dealiased=True):
    """Pointwise product, optionally followed by two-thirds truncation."""
    _same_grid(f, g)
    h = Field.from_samples(f.grid, f.samples * g.samples)
    return dealias(h) if dealiased else h


def l2_quadrature(f):
    """Grid-side sum f(x_j)^2 dx (used for Plancherel checks)."""
    return float(np.sum(f.samples ** 2) * f.grid.dx)
