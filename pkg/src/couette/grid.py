"""Spectral grids, fields, transforms, and moving-frame operators.

All fields live on a periodic box in the sheared coordinates
(z, y) = (x - t*y, y), stored as complex Fourier coefficients indexed
by (k, xi). The background shear then enters every operator only
through the shifted vertical frequency xi - k*t.

Transform normalization is fixed so that the discrete Parseval identity
holds with the continuous measure:

    sum |coeffs|^2 * dk * dxi  ==  sum |u|^2 * dx * dy

which matches the convention u_hat(k) = (1/2pi) * integral u e^{-i k.x}.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ValidationError

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class FrequencyGrid:
    """Mode counts and box sizes defining the discrete frequency lattice.

    Wavenumbers follow FFT ordering, except that the Nyquist mode is
    assigned the positive frequency: k in dk * {-nx/2+1, ..., nx/2}.
    """

    nx: int
    ny: int
    lx: float
    ly: float

    @property
    def dk(self):
        return TWO_PI / self.lx

    @property
    def dxi(self):
        return TWO_PI / self.ly

    @cached_property
    def kx(self):
        """1D array of horizontal wavenumbers, FFT order, Nyquist positive."""
        m = np.fft.fftfreq(self.nx, d=1.0 / self.nx)
        m[self.nx // 2] = self.nx // 2
        return m * self.dk

    @cached_property
    def xi(self):
        """1D array of vertical wavenumbers, FFT order, Nyquist positive."""
        m = np.fft.fftfreq(self.ny, d=1.0 / self.ny)
        m[self.ny // 2] = self.ny // 2
        return m * self.dxi

    @cached_property
    def kmesh(self):
        return self.kx[:, None] * np.ones((1, self.ny))

    @cached_property
    def ximesh(self):
        return np.ones((self.nx, 1)) * self.xi[None, :]

    @property
    def xi_max(self):
        return (self.ny // 2) * self.dxi

    @property
    def k_max(self):
        return (self.nx // 2) * self.dk

    @property
    def shape(self):
        return (self.nx, self.ny)

    def x(self):
        return np.arange(self.nx) * (self.lx / self.nx)

    def y(self):
        return np.arange(self.ny) * (self.ly / self.ny)


def make_grid(nx, ny, lx, ly):
    """Validate sizes and build a FrequencyGrid.

    nx, ny must be even and >= 8; lx, ly positive.
    """
    for name, n in (("nx", nx), ("ny", ny)):
        if not isinstance(n, (int, np.integer)):
            raise ValidationError(f"{name} must be an integer, got {n!r}")
        if n % 2 != 0 or n < 8:
            raise ValidationError(f"{name} must be even and >= 8, got {n}")
    for name, length in (("lx", lx), ("ly", ly)):
        if not length > 0:
            raise ValidationError(f"{name} must be positive, got {length}")
    return FrequencyGrid(int(nx), int(ny), float(lx), float(ly))


@dataclass
class SpectralField:
    """Complex Fourier coefficients of a real field on a FrequencyGrid."""

    grid: FrequencyGrid
    coeffs: np.ndarray

    def __post_init__(self):
        if self.coeffs.shape != self.grid.shape:
            raise ValidationError(
                f"coefficient shape {self.coeffs.shape} does not match "
                f"grid {self.grid.shape}"
            )

    def copy(self):
        return SpectralField(self.grid, self.coeffs.copy())

    def is_finite(self):
        return bool(np.all(np.isfinite(self.coeffs)))

    def hermitian_error(self):
        """Max |c(-k,-xi) - conj(c(k,xi))| relative to max |c|."""
        c = self.coeffs
        nx, ny = c.shape
        ix = (-np.arange(nx)) % nx
        iy = (-np.arange(ny)) % ny
        mirrored = c[np.ix_(ix, iy)]
        scale = np.abs(c).max()
        if scale == 0.0:
            return 0.0
        return float(np.abs(mirrored - np.conj(c)).max() / scale)

    def l2_norm(self):
        """Parseval L2 norm: sqrt(sum |c|^2 dk dxi)."""
        g = self.grid
        return float(
            np.sqrt(np.sum(np.abs(self.coeffs) ** 2) * g.dk * g.dxi)
        )


@dataclass
class MovingFrameState:
    """A spectral field tagged with its moving-frame time."""

    t: float
    f: SpectralField

    def __post_init__(self):
        if self.t < 0:
            raise ValidationError(f"time must be >= 0, got {self.t}")


def transform_forward(u, grid):
    """Real physical array -> SpectralField (Parseval normalization)."""
    u = np.asarray(u, dtype=float)
    if u.shape != grid.shape:
        raise ValidationError(
            f"physical array shape {u.shape} does not match grid {grid.shape}"
        )
    scale = grid.lx * grid.ly / (TWO_PI * grid.nx * grid.ny)
    return SpectralField(grid, np.fft.fft2(u) * scale)


def transform_inverse(field):
    """SpectralField -> real physical array."""
    g = field.grid
    scale = TWO_PI * g.nx * g.ny / (g.lx * g.ly)
    return np.real(np.fft.ifft2(field.coeffs * scale))


def laplacian_moving(field, t):
    """Apply the moving-frame Laplacian symbol -(k^2 + (xi - k t)^2)."""
    g = field.grid
    sym = -(g.kmesh**2 + (g.ximesh - g.kmesh * t) ** 2)
    return SpectralField(g, field.coeffs * sym)


def biot_savart_velocity(field, t):
    """Advecting velocity field of the moving-frame vorticity equation.

    Per-mode symbol (i(xi - k t), -ik) / (k^2 + (xi - k t)^2); the (0,0)
    mode is zeroed (it is the only zero of the denominator). The sign is
    chosen so that the nonlinear term of the vorticity equation is
    exactly v . grad f with the components returned here.
    """
    g = field.grid
    xs = g.ximesh - g.kmesh * t
    den = g.kmesh**2 + xs**2
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = np.where(den > 0.0, 1.0 / np.where(den > 0.0, den, 1.0), 0.0)
    u1 = SpectralField(g, 1j * xs * inv * field.coeffs)
    u2 = SpectralField(g, -1j * g.kmesh * inv * field.coeffs)
    return u1, u2


def gradient_moving(field, t):
    """Moving-frame gradient (d/dz, d/dy - t d/dz): symbols (ik, i(xi-kt))."""
    g = field.grid
    gz = SpectralField(g, 1j * g.kmesh * field.coeffs)
    gy = SpectralField(g, 1j * (g.ximesh - g.kmesh * t) * field.coeffs)
    return gz, gy
