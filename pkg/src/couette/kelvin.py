"""Closed-form linear (Kelvin) solution and its decay envelopes.

The linearized shear-diffusion equation is diagonal in the moving-frame
Fourier variables: each mode (k, xi) decays by the exact factor
exp(-nu * J(k, xi, t)) with

    J(k, xi, t) = (k^2 + xi^2) t - k xi t^2 + k^2 t^3 / 3
                = integral_0^t  k^2 + (xi - k s)^2  ds.

No coefficient ever moves between grid modes: the frequency shift of
the classical static-frame solution formula is absorbed into the label
change xi_static = xi - k t, which is exactly where the cumulative
exponent is evaluated (`kelvin_exponent(nu, k, xi - k t, t)` equals
nu * J(k, xi, t)). A mode is "off-grid" when its static-frame frequency
|xi - k t| exceeds the resolved band; such modes are no longer faithful
samples of the whole-plane problem and are aborted on or truncated per
policy.
"""
from __future__ import annotations

import logging

import numpy as np

from .errors import OffGridShiftError, ValidationError
from .grid import SpectralField

log = logging.getLogger(__name__)


def kelvin_exponent(nu, k, xi, t):
    """Cumulative viscous exponent nu * [(k^2+xi^2) t + k xi t^2 + k^2 t^3/3].

    Equals nu * integral_0^t k^2 + (xi + k(t-s))^2 ds; agrees with direct
    quadrature of that integrand. Vectorized over all arguments.
    """
    k = np.asarray(k, dtype=float)
    xi = np.asarray(xi, dtype=float)
    t = np.asarray(t, dtype=float)
    return nu * ((k**2 + xi**2) * t + k * xi * t**2 + k**2 * t**3 / 3.0)


def viscous_integral(nu, k, xi, t1, t2):
    """nu * integral_{t1}^{t2} k^2 + (xi - k s)^2 ds, via exponent differences.

    `xi` is the moving-frame label, held fixed while the physical
    frequency xi - k s sweeps.
    """
    return kelvin_exponent(nu, k, xi - k * t2, t2) - kelvin_exponent(
        nu, k, xi - k * t1, t1
    )


def offgrid_keep_mask(grid, t):
    """Modes whose sheared frequency |xi - k t| is still resolved."""
    return np.abs(grid.ximesh - grid.kmesh * t) <= grid.xi_max + 1e-12


def kelvin_solve(omega_in, nu, t, shift_policy="abort"):
    """Exact linear solution at time t in moving-frame variables.

    Each coefficient of `omega_in` is multiplied by the closed-form decay
    factor; the result is the moving-frame representation f_hat(t, k, xi)
    (static-frame content sits at the shifted frequency xi - k t).

    shift_policy: 'abort' raises OffGridShiftError when any energetic
    mode shifts out of the resolved band; 'truncate' zeroes those modes
    and logs the lost mass.
    """
    if t < 0:
        raise ValidationError(f"time must be >= 0, got {t}")
    if shift_policy not in ("abort", "truncate"):
        raise ValidationError(f"unknown shift_policy {shift_policy!r}")
    g = omega_in.grid
    decay = np.exp(
        -kelvin_exponent(nu, g.kmesh, g.ximesh - g.kmesh * t, t)
    )
    out = omega_in.coeffs * decay
    keep = offgrid_keep_mask(g, t)
    if not keep.all():
        lost = out[~keep]
        lost_mass = float(np.sqrt(np.sum(np.abs(lost) ** 2) * g.dk * g.dxi))
        if shift_policy == "abort":
            if lost_mass > 0.0:
                raise OffGridShiftError(int((~keep).sum()), lost_mass, t)
        else:
            out = np.where(keep, out, 0.0)
            if lost_mass > 0.0:
                log.debug(
                    "truncated %d off-grid modes at t=%g (mass %.3e)",
                    int((~keep).sum()), t, lost_mass,
                )
    return SpectralField(g, out)


def envelope_enhanced(nu, c, k, t, amplitude=1.0):
    """Enhanced-dissipation envelope C * exp(-c nu^{1/3} |k|^{2/3} t)."""
    k = np.asarray(k, dtype=float)
    return amplitude * np.exp(-c * nu ** (1.0 / 3.0) * np.abs(k) ** (2.0 / 3.0) * t)


def envelope_inviscid(k, xi, t, amplitude=1.0, nu=0.0, c=0.0):
    """Inviscid-damping envelope for the stream function:

    C <t>^{-2} (1 + k^2 + (xi + k t)^2) / |k|^4 * exp(-c nu^{1/3}|k|^{2/3} t).

    k = 0 is rejected: the |k|^{-4} singularity is real (zero modes do
    not damp).
    """
    k = np.asarray(k, dtype=float)
    if np.any(k == 0.0):
        raise ValidationError("envelope_inviscid requires k != 0")
    xi = np.asarray(xi, dtype=float)
    bracket_t = 1.0 + t**2
    poly = (1.0 + k**2 + (xi + k * t) ** 2) / np.abs(k) ** 4
    damp = np.exp(-c * nu ** (1.0 / 3.0) * np.abs(k) ** (2.0 / 3.0) * t)
    return amplitude / bracket_t * poly * damp
