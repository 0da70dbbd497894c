"""Echo-cascade toy model: nonlinear frequency transfer near Orr times.

One vertical frequency xi > 0 is retained. The unknown f(t, l, xi) on a
horizontal-frequency grid is driven through the coupling kernel

    xi (k - l) / (l^2 + (xi - l t)^2)

against a background f(t, k - l, 0) of zero-in-xi modes, which feel no
shear shift and simply decay viscously. The kernel is a Lorentzian in
time of O(1) width centered at the Orr critical time t = xi / l, so
low-l shells deposit their transfer late, at t ~ N xi for l ~ 1/N.

`run_amplification` measures the worst-case transfer of the scaling
analysis: shells l in [1/N, 2/N] seeded at amplitude nu^beta
N^{1/2-eps} against a unit background on [1, 2], integrated over the
critical window, with the dissipation onset x0 = nu^{1/3} N xi held
fixed across the N sweep so the measured log-log slope isolates the
exponent (3/2 - eps - 3 beta): growth 1/2 - eps for beta = 1/3, flat or
decaying -eps for beta = 1/2.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError


def log_l_grid(l_min, l_max, per_octave=16, mirrored=True):
    """Log-spaced positive l grid, optionally with mirrored negatives."""
    if not 0 < l_min < l_max:
        raise ValidationError("need 0 < l_min < l_max")
    n = max(2, int(np.ceil(np.log2(l_max / l_min) * per_octave)) + 1)
    pos = np.geomspace(l_min, l_max, n)
    if mirrored:
        return np.concatenate([-pos[::-1], pos])
    return pos


@dataclass(frozen=True)
class ToyConfig:
    xi: float
    l_grid: np.ndarray
    k_grid: np.ndarray
    nu: float
    beta: float
    eps: float
    c: float
    t_max: float
    dt: float
    bg_grid: np.ndarray = field(
        default_factory=lambda: np.linspace(0.25, 2.75, 101)
    )

    def __post_init__(self):
        if not self.xi > 0:
            raise ValidationError(f"xi must be positive, got {self.xi}")
        for name in ("l_grid", "k_grid", "bg_grid"):
            a = getattr(self, name)
            if len(a) == 0 or np.any(np.diff(a) <= 0):
                raise ValidationError(f"{name} must be nonempty and sorted")
        if not self.dt > 0:
            raise ValidationError(f"dt must be positive, got {self.dt}")


def default_toy_dt(nu):
    return 0.1 * min(1.0, nu ** (-1.0 / 3.0) / 100.0)


@dataclass
class ToyState:
    t: float
    f_xi: np.ndarray   # f(t, l, xi) on l_grid
    f_zero: np.ndarray  # f(t, ., 0) on bg_grid


def coupling_kernel(t, l, xi, k_minus_l):
    """xi (k - l) / (l^2 + (xi - l t)^2); peaks in t at the Orr time xi/l."""
    l = np.asarray(l, dtype=float)
    return xi * k_minus_l / (l**2 + (xi - l * t) ** 2)


def toy_rhs(state, config):
    """Time derivative of the toy state.

    f_xi modes feel the sheared viscous symbol and the l-integral of the
    coupling (trapezoid over the l grid, background interpolated at
    k - l); f_zero modes decay by -nu k^2 only (no Orr shift at xi = 0).
    """
    t = state.t
    xi = config.xi
    l = config.l_grid
    visc = -config.nu * (l**2 + (xi - l * t) ** 2) * state.f_xi
    kern = xi / (l**2 + (xi - l * t) ** 2)  # (k - l) factor applied below
    dfx = np.empty_like(state.f_xi)
    for i, k in enumerate(l):
        km = k - l
        bg = np.interp(km, config.bg_grid, state.f_zero, left=0.0, right=0.0)
        integrand = kern * km * state.f_xi * bg
        dfx[i] = np.trapezoid(integrand, l)
    dfz = -config.nu * config.bg_grid**2 * state.f_zero
    return visc + dfx, dfz


def run_toy(config, state0):
    """RK4 integration of the toy model; returns list of states."""
    states = [state0]
    s = state0
    n = int(np.ceil(config.t_max / config.dt - 1e-12))
    for _ in range(n):
        h = min(config.dt, config.t_max - s.t)

        def f(t, fx, fz):
            return toy_rhs(ToyState(t, fx, fz), config)

        a1, b1 = f(s.t, s.f_xi, s.f_zero)
        a2, b2 = f(s.t + h / 2, s.f_xi + h / 2 * a1, s.f_zero + h / 2 * b1)
        a3, b3 = f(s.t + h / 2, s.f_xi + h / 2 * a2, s.f_zero + h / 2 * b2)
        a4, b4 = f(s.t + h, s.f_xi + h * a3, s.f_zero + h * b3)
        s = ToyState(
            s.t + h,
            s.f_xi + h / 6 * (a1 + 2 * a2 + 2 * a3 + a4),
            s.f_zero + h / 6 * (b1 + 2 * b2 + 2 * b3 + b4),
        )
        states.append(s)
    return states


@dataclass(frozen=True)
class AmplificationRow:
    n_shell: int
    nu: float
    beta: float
    eps: float
    amplification: float
    cutoff_active: bool


@dataclass
class AmplificationReport:
    rows: list

    def slope(self):
        """Least-squares slope of log A vs log N over the sweep."""
        ns = np.array([r.n_shell for r in self.rows], dtype=float)
        amps = np.array([r.amplification for r in self.rows], dtype=float)
        if np.any(amps <= 0) or len(ns) < 2:
            raise ValidationError("need >= 2 rows with positive amplification")
        coef = np.polyfit(np.log(ns), np.log(amps), 1)
        return float(coef[0])

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["N", "nu", "beta", "eps", "A", "cutoff_active"])
            for r in self.rows:
                writer.writerow(
                    [r.n_shell, repr(r.nu), repr(r.beta), repr(r.eps),
                     repr(r.amplification), int(r.cutoff_active)]
                )


def shell_amplification(n_shell, nu, beta, eps, c, xi=1.0, n_l=33, n_k=21,
                        dt=0.1):
    """Worst-case transfer onto k in [1, 2] from the shell l in [1/N, 2/N].

    Seeds f(t, l, xi) = nu^beta e^{-c nu^{1/3} N^{-2/3} t} N^{1/2-eps}
    on the shell and f(t, k-l, 0) = nu^beta e^{-c nu^{1/3} t} on [1, 2],
    integrates the coupling over the critical window, and returns the
    output L2 mass on [1, 2] divided by nu^beta.
    """
    N = float(n_shell)
    l = np.geomspace(1.0 / N, 2.0 / N, n_l)
    k = np.linspace(1.0, 2.0, n_k)
    t_end = 2.0 * N * xi + 40.0
    t = np.arange(0.0, t_end + dt, dt)
    rate13 = c * nu ** (1.0 / 3.0)
    # time profile per l: Lorentzian around xi/l times both decay factors
    decay = np.exp(-rate13 * (N ** (-2.0 / 3.0) + 1.0) * t)  # (nt,)
    lor = 1.0 / (l[None, :] ** 2 + (xi - l[None, :] * t[:, None]) ** 2)
    time_factor = np.trapezoid(decay[:, None] * lor, t, axis=0)  # (nl,)
    # transfer onto each output k: integral over the shell in l
    km = k[:, None] - l[None, :]
    chi = ((km >= 1.0) & (km <= 2.0)).astype(float)
    integrand = xi * km * chi * time_factor[None, :] * N ** (0.5 - eps)
    out = nu ** (2.0 * beta) * np.trapezoid(integrand, l, axis=1)  # (nk,)
    mass = float(np.sqrt(np.trapezoid(out**2, k)))
    return mass / nu**beta


def run_amplification(n_shells, beta, eps, c=0.05, xi=1.0, x0=1.0,
                      nu_fixed=None):
    """Sweep shells N, coupling nu to N so nu^{1/3} N xi = x0 stays fixed
    (pass nu_fixed to override). Returns an AmplificationReport."""
    rows = []
    for n in n_shells:
        nu = nu_fixed if nu_fixed is not None else (x0 / (n * xi)) ** 3
        if not 0 < nu <= 1:
            raise ValidationError(
                f"derived nu={nu:g} outside (0, 1]; adjust x0 or the sweep"
            )
        a = shell_amplification(n, nu, beta, eps, c, xi=xi)
        cutoff = c * nu ** (1.0 / 3.0) * n * xi > 0.2
        rows.append(AmplificationRow(n, nu, beta, eps, a, cutoff))
    return AmplificationReport(rows)


def transfer_time_profile(n_shell, nu, c, xi=1.0, l_value=None, dt=0.05):
    """Share of the transferred mass accrued within |t - xi/l| <= 5.

    Uses the dominant shell value l = 1.5/N unless given.
    """
    N = float(n_shell)
    l = l_value if l_value is not None else 1.5 / N
    t_c = xi / l
    t = np.arange(0.0, 2.5 * t_c + 40.0, dt)
    rate13 = c * nu ** (1.0 / 3.0)
    w = np.exp(-rate13 * (N ** (-2.0 / 3.0) + 1.0) * t) / (
        l**2 + (xi - l * t) ** 2
    )
    total = np.trapezoid(w, t)
    window = np.abs(t - t_c) <= 5.0
    inside = np.trapezoid(np.where(window, w, 0.0), t)
    return float(inside / total)
