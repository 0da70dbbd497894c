"""Initial vorticity family for stability experiments.

The family mirrors the Fourier weights of the smallness assumption the
experiments probe: coefficients shaped like

    a * <k>^{-6} <1/k>^{-4} <xi>^{-6} * bump(k, xi) * phase

with Hermitian-symmetric random phases from a seeded generator, so the
assumed initial norm is proportional to the single swept amplitude a.
"""
from __future__ import annotations

import numpy as np

from .grid import SpectralField, transform_inverse
from .solver import dealias_mask


def _bracket(a):
    return np.sqrt(1.0 + np.asarray(a, dtype=float) ** 2)


def family_envelope(grid):
    """Deterministic spectral envelope <k>^{-6} <1/k>^{-4} <xi>^{-6} bump.

    The k = 0 column vanishes identically (the <1/k>^{-4} factor), and
    the bump restricts support to the dealias-resolved band.
    """
    k = grid.kmesh
    xi = grid.ximesh
    with np.errstate(divide="ignore"):
        inv = np.where(k != 0.0, 1.0 / np.where(k != 0.0, k, 1.0), np.inf)
    env = _bracket(k) ** -6 * _bracket(xi) ** -6
    env = env * np.where(k != 0.0, _bracket(inv) ** -4.0, 0.0)
    return env * dealias_mask(grid)


def make_initial_data(grid, amplitude, seed):
    """Random member of the experiment family at the given amplitude."""
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(grid.shape)
    phases = np.fft.fft2(noise)
    mags = np.abs(phases)
    phases = phases / np.where(mags > 0.0, mags, 1.0)
    coeffs = amplitude * family_envelope(grid) * phases
    return SpectralField(grid, coeffs)


def smallness_norm(field):
    """Size of the initial data in the assumed-smallness space:

    || <D>^6 <1/D_x>^4 w ||_{L2} + || <D>^5 <1/D_x>^4 w ||_{L1}.

    The L1 term is evaluated in physical space. k = 0 modes carry an
    infinite low-frequency weight; the family never populates them and
    they are excluded here.
    """
    g = field.grid
    k = g.kmesh
    xi = g.ximesh
    nonzero = k != 0.0
    with np.errstate(divide="ignore"):
        invk = np.where(nonzero, 1.0 / np.where(nonzero, k, 1.0), 0.0)
    low = np.where(nonzero, _bracket(invk) ** 4.0, 0.0)
    iso = np.sqrt(1.0 + k**2 + xi**2)
    w6 = iso**6 * low * field.coeffs
    l2 = float(np.sqrt(np.sum(np.abs(w6) ** 2) * g.dk * g.dxi))
    w5 = SpectralField(g, iso**5 * low * field.coeffs)
    phys = transform_inverse(w5)
    l1 = float(np.sum(np.abs(phys)) * (g.lx / g.nx) * (g.ly / g.ny))
    return l2 + l1


def calibrated_amplitude(grid, seed, target_norm):
    """Amplitude making the family's smallness norm equal target_norm."""
    unit = make_initial_data(grid, 1.0, seed)
    return target_norm / smallness_norm(unit)
