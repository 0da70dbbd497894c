"""Ghost-weight Fourier multipliers and weighted energy norms.

Three bounded per-mode weights drive the energy estimates:

  m1 -- arctan(nu^{1/3} |k|^{-1/3} sgn(k) xi) + pi/2, whose transport
        derivative k d_xi m1 produces the enhanced-dissipation density;
  m2 -- arctan(xi/k) + pi/2, whose derivative k d_xi m2 = k^2/(k^2+xi^2)
        produces the inviscid-damping density;
  m3 -- an l-integral fuzzifying the continuum of Orr critical times,
        whose transport derivative is the positive density upsilon.

m3 and upsilon are evaluated by adaptive quadrature with algebraic
endpoint weights absorbing the integrable |l|^{kappa-1} (resp. |l|^kappa)
singularity at l = 0.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import QuadratureError, ValidationError, WeightOverflowError

WEIGHT_OVERFLOW = 1e300
_QUAD_EPSREL = 1e-10
_QUAD_EPSABS = 1e-13


@dataclass(frozen=True)
class MultiplierParams:
    """Scalar knobs consumed by every weight formula.

    nu in (0,1], c > 0, eps in (0, 1/2), kappa > 0, delta > 0,
    c0 < 1/12. The quasi-linear diagnostics additionally require the
    regime eps > (1-delta)/2 and kappa < 2 eps/(1-delta) - 1, checked by
    `check_quasilinear_regime`.
    """

    nu: float
    c: float = 0.05
    eps: float = 0.4
    kappa: float = 0.02
    delta: float = 0.1
    c0: float = 1.0 / 12.0 - 1e-3

    def __post_init__(self):
        if not 0.0 < self.nu <= 1.0:
            raise ValidationError(f"nu must be in (0, 1], got {self.nu}")
        if not self.c > 0.0:
            raise ValidationError(f"c must be positive, got {self.c}")
        if not 0.0 < self.eps < 0.5:
            raise ValidationError(f"eps must be in (0, 1/2), got {self.eps}")
        if not self.kappa > 0.0:
            raise ValidationError(f"kappa must be positive, got {self.kappa}")
        if not self.delta > 0.0:
            raise ValidationError(f"delta must be positive, got {self.delta}")
        if not self.c0 < 1.0 / 12.0:
            raise ValidationError(f"c0 must be < 1/12, got {self.c0}")

    def check_quasilinear_regime(self):
        if not self.eps > (1.0 - self.delta) / 2.0:
            raise ValidationError(
                f"quasi-linear regime needs eps > (1-delta)/2 = "
                f"{(1 - self.delta) / 2:g}, got eps={self.eps}"
            )
        kappa_max = 2.0 * self.eps / (1.0 - self.delta) - 1.0
        if not self.kappa < kappa_max:
            raise ValidationError(
                f"quasi-linear regime needs kappa < {kappa_max:g}, "
                f"got kappa={self.kappa}"
            )


def theorem_preset(nu, quasilinear=False):
    """Admissible parameter points used throughout the experiments.

    Plain preset: eps = 0.4, c = 0.05. Quasi-linear preset:
    delta = 0.1, eps = 0.46, kappa = 0.02 (satisfies the regime check).
    """
    if quasilinear:
        p = MultiplierParams(nu=nu, c=0.05, eps=0.46, kappa=0.02, delta=0.1)
        p.check_quasilinear_regime()
        return p
    return MultiplierParams(nu=nu, c=0.05, eps=0.4)


def m1(params, k, xi):
    """Enhanced-dissipation multiplier, valued in (0, pi); k != 0."""
    k = np.asarray(k, dtype=float)
    if np.any(k == 0.0):
        raise ValidationError("m1 requires k != 0")
    arg = params.nu ** (1.0 / 3.0) * np.abs(k) ** (-1.0 / 3.0) * np.sign(k) * xi
    return np.arctan(arg) + np.pi / 2.0


def m2(k, xi):
    """Inviscid-damping multiplier arctan(xi/k) + pi/2; k != 0."""
    k = np.asarray(k, dtype=float)
    if np.any(k == 0.0):
        raise ValidationError("m2 requires k != 0")
    return np.arctan(np.asarray(xi, dtype=float) / k) + np.pi / 2.0


def m2_transport(k, xi):
    """Exact k d_xi m2 = k^2 / (k^2 + xi^2)."""
    k = np.asarray(k, dtype=float)
    xi = np.asarray(xi, dtype=float)
    return k**2 / (k**2 + xi**2)


def lemma21_check_m1(params, k, xi):
    """Return (k d_xi m1, its lower bound) for the dissipation inequality.

    lhs = nu^{1/3}|k|^{2/3} / (1 + nu^{2/3}|k|^{-2/3} xi^2)
    rhs = nu^{1/3}|k|^{2/3}/4 - nu xi^2 / 2
    """
    k = np.asarray(k, dtype=float)
    xi = np.asarray(xi, dtype=float)
    nu = params.nu
    lhs = nu ** (1.0 / 3.0) * np.abs(k) ** (2.0 / 3.0) / (
        1.0 + nu ** (2.0 / 3.0) * np.abs(k) ** (-2.0 / 3.0) * xi**2
    )
    rhs = 0.25 * nu ** (1.0 / 3.0) * np.abs(k) ** (2.0 / 3.0) - 0.5 * nu * xi**2
    return lhs, rhs


def lambda_rate(k):
    """Capped enhanced-dissipation rate min(1, |k|^{2/3})."""
    return np.minimum(1.0, np.abs(np.asarray(k, dtype=float)) ** (2.0 / 3.0))


@functools.lru_cache(maxsize=None)
def c_kappa(kappa):
    """Upper bound pi * integral <1/l>^{-1-kappa} |l|^{-2} dl (closed form)."""
    if not kappa > 0.0:
        raise ValidationError(f"kappa must be positive, got {kappa}")
    return float(
        np.pi ** 1.5 * special.gamma(kappa / 2.0) / special.gamma((1.0 + kappa) / 2.0)
    )


def _quad(func, a, b, **kw):
    val, err = integrate.quad(
        func, a, b, epsrel=_QUAD_EPSREL, epsabs=_QUAD_EPSABS, limit=200, **kw
    )
    tol = max(_QUAD_EPSABS, _QUAD_EPSREL * abs(val)) * 100.0
    if err > tol and err > 1e-8:
        raise QuadratureError(err, tol)
    return val


def m3(params, t, k, xi):
    """Echo-cascade multiplier: integral over l of

        <1/l>^{-1-kappa} |l|^{-2} (sgn(l) arctan(A) + pi/2),
        A = (xi + t(k - l)) / (1 + |k - l| + |l|).

    The |l|^{kappa-1} endpoint singularity on [0,1] is handled by the
    QAWS algebraic weight; the result is positive and below c_kappa.
    """
    if t < 0:
        raise ValidationError(f"t must be >= 0, got {t}")
    kap = params.kappa

    def bracket(l_abs, sign):
        l = sign * l_abs
        a = (xi + t * (k - l)) / (1.0 + abs(k - l) + abs(l))
        return sign * math.atan(a) + math.pi / 2.0

    def smooth(l_abs, sign):
        # integrand with the |l|^{kappa-1} factor stripped
        return (1.0 + l_abs**2) ** (-(1.0 + kap) / 2.0) * bracket(l_abs, sign)

    def tail(l_abs, sign):
        return (
            (1.0 + 1.0 / l_abs**2) ** (-(1.0 + kap) / 2.0)
            / l_abs**2
            * bracket(l_abs, sign)
        )

    total = 0.0
    for sign in (1.0, -1.0):
        total += _quad(
            lambda l, s=sign: smooth(l, s), 0.0, 1.0,
            weight="alg", wvar=(kap - 1.0, 0.0),
        )
        total += _quad(lambda l, s=sign: tail(l, s), 1.0, np.inf)
    return total


def upsilon(params, t, k, xi):
    """Inviscid dissipation density (-d_t + k d_xi) m3, in closed integral
    form:

        integral <1/l>^{-1-kappa} |l|^{-1} D / (D^2 + (xi + t(k-l))^2) dl,
        D = 1 + |k - l| + |l|.

    Positive for all (t, k, xi).
    """
    if t < 0:
        raise ValidationError(f"t must be >= 0, got {t}")
    kap = params.kappa

    def core(l_abs, sign):
        l = sign * l_abs
        d = 1.0 + abs(k - l) + abs(l)
        return d / (d**2 + (xi + t * (k - l)) ** 2)

    def smooth(l_abs, sign):
        # integrand with the |l|^kappa factor stripped
        return (1.0 + l_abs**2) ** (-(1.0 + kap) / 2.0) * core(l_abs, sign)

    def tail(l_abs, sign):
        return (
            (1.0 + 1.0 / l_abs**2) ** (-(1.0 + kap) / 2.0)
            / l_abs
            * core(l_abs, sign)
        )

    total = 0.0
    for sign in (1.0, -1.0):
        total += _quad(
            lambda l, s=sign: smooth(l, s), 0.0, 1.0,
            weight="alg", wvar=(kap, 0.0),
        )
        total += _quad(lambda l, s=sign: tail(l, s), 1.0, np.inf)
    return total


def upsilon_finite_difference(params, t, k, xi, h=1e-4):
    """(-d_t + k d_xi) m3 by central differences; cross-check for upsilon."""
    dm_dt = (m3(params, t + h, k, xi) - m3(params, max(t - h, 0.0), k, xi)) / (
        (t + h) - max(t - h, 0.0)
    )
    dm_dxi = (m3(params, t, k, xi + h) - m3(params, t, k, xi - h)) / (2.0 * h)
    return -dm_dt + k * dm_dxi


def weight_values(params, k, t, m=1.0, rate_kind="lambda"):
    """Per-mode weight e^{c nu^{1/3} rate(k) t} <k>^m <1/k>^eps for k != 0."""
    k = np.asarray(k, dtype=float)
    if rate_kind == "lambda":
        rate = lambda_rate(k)
    elif rate_kind == "two_thirds":
        rate = np.abs(k) ** (2.0 / 3.0)
    else:
        raise ValidationError(f"unknown rate_kind {rate_kind!r}")
    with np.errstate(divide="ignore"):
        inv_bracket = np.where(
            k != 0.0, np.sqrt(1.0 + 1.0 / np.where(k != 0.0, k, 1.0) ** 2), np.inf
        )
    with np.errstate(over="ignore"):
        growth = np.exp(params.c * params.nu ** (1.0 / 3.0) * rate * t)
    bracket = np.sqrt(1.0 + k**2)
    return growth * bracket**m * inv_bracket**params.eps


@dataclass(frozen=True)
class WeightedNorm:
    """Weighted L2 norm over k != 0 plus the unweighted k = 0 column."""

    value: float
    zero_mode: float


def weight_theorem_norm(field, params, t, m=1.0, rate_kind="lambda"):
    """Weighted spectral L2 norm of a field at time t.

    The k = 0 column carries an infinite <1/k>^eps weight and no shear
    transport; it is excluded from the weighted sum and returned
    separately, unweighted.
    """
    g = field.grid
    nonzero = g.kmesh != 0.0
    w = weight_values(params, g.kmesh, t, m=m, rate_kind=rate_kind)
    w = np.where(nonzero, w, 0.0)
    if np.any(w > WEIGHT_OVERFLOW):
        idx = np.unravel_index(int(np.argmax(w)), w.shape)
        raise WeightOverflowError(g.kmesh[idx], float(w[idx]))
    meas = g.dk * g.dxi
    value = float(np.sqrt(np.sum((w * np.abs(field.coeffs)) ** 2) * meas))
    zero = float(
        np.sqrt(np.sum(np.abs(field.coeffs[~nonzero]) ** 2) * meas)
    )
    return WeightedNorm(value=value, zero_mode=zero)
