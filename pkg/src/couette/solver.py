"""Pseudo-spectral time stepping of the moving-frame vorticity equation.

The linear part (shear transport + viscosity) is diagonal per mode with
a known closed-form propagator, so time stepping uses a Lawson-style
integrating-factor RK4: the viscous symbol nu (k^2 + (xi - k t)^2) is
integrated exactly over every substage interval, and only the quadratic
term is treated explicitly. In `linear_only` mode the scheme therefore
reproduces the Kelvin solution to roundoff.

The quadratic term v . grad f is evaluated pseudo-spectrally with
2/3-rule dealiasing; the direct O(N^4) convolution is kept in
`convolution_direct` as a test oracle.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import StepRejected, ValidationError
from .grid import (
    MovingFrameState,
    SpectralField,
    biot_savart_velocity,
    gradient_moving,
    transform_forward,
    transform_inverse,
)
from .kelvin import kelvin_solve, offgrid_keep_mask, viscous_integral

MODES = ("full", "linear_only", "quasilinear")
SHIFT_POLICIES = ("abort", "truncate")

ALL_TERMS = frozenset({"source", "transport", "reaction", "nonlinear"})


@dataclass(frozen=True)
class SolverConfig:
    nu: float
    dt: float
    t_max: float
    dealias: float = 2.0 / 3.0
    mode: str = "full"
    shift_policy: str = "abort"
    quasilinear_terms: frozenset = ALL_TERMS

    def __post_init__(self):
        if not self.dt > 0:
            raise ValidationError(f"dt must be positive, got {self.dt}")
        if self.t_max < 0:
            raise ValidationError(f"t_max must be >= 0, got {self.t_max}")
        if not 0.0 < self.dealias <= 1.0:
            raise ValidationError(f"dealias must be in (0, 1], got {self.dealias}")
        if self.mode not in MODES:
            raise ValidationError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.shift_policy not in SHIFT_POLICIES:
            raise ValidationError(
                f"shift_policy must be one of {SHIFT_POLICIES}, "
                f"got {self.shift_policy!r}"
            )

    def validate_horizon(self, grid):
        """No-remap constraint: keep xi - k t on-grid for the whole run.

        Enforced as a hard error under the 'abort' policy; under
        'truncate' the run proceeds and off-grid modes (exponentially
        small once dissipation has acted) are zeroed as they leave.
        """
        drift = self.t_max * grid.k_max * self.dealias
        if drift > grid.xi_max / 2.0 and self.shift_policy == "abort":
            raise ValidationError(
                f"t_max * max|k| = {drift:g} exceeds xi_max/2 = "
                f"{grid.xi_max / 2:g}; enlarge ly/ny or use "
                f"shift_policy='truncate'"
            )


def dealias_mask(grid, fraction=2.0 / 3.0):
    """Boolean keep-mask implementing the 2/3 rule (Nyquist always cut)."""
    mx = np.rint(grid.kx / grid.dk).astype(int)
    my = np.rint(grid.xi / grid.dxi).astype(int)
    cut_x = int(np.floor(fraction * (grid.nx // 2)))
    cut_y = int(np.floor(fraction * (grid.ny // 2)))
    keep_x = np.abs(mx) <= min(cut_x, grid.nx // 2 - 1)
    keep_y = np.abs(my) <= min(cut_y, grid.ny // 2 - 1)
    return keep_x[:, None] & keep_y[None, :]


def nonlinear_rhs(f, t, mask=None):
    """Quadratic term v . grad f of the moving-frame vorticity equation.

    Velocity and gradients are inverse-transformed, multiplied in
    physical space, transformed forward, and dealiased with `mask`.
    """
    g = f.grid
    if mask is None:
        mask = dealias_mask(g)
    v1h, v2h = biot_savart_velocity(f, t)
    g1h, g2h = gradient_moving(f, t)
    prod = (
        transform_inverse(v1h) * transform_inverse(g1h)
        + transform_inverse(v2h) * transform_inverse(g2h)
    )
    out = transform_forward(prod, g)
    out.coeffs *= mask
    return out


def max_velocity(f, t):
    """Max pointwise speed of the advecting field, for CFL control."""
    v1h, v2h = biot_savart_velocity(f, t)
    v1 = transform_inverse(v1h)
    v2 = transform_inverse(v2h)
    return float(np.sqrt(v1**2 + v2**2).max())


def convolution_direct(f, t):
    """Brute-force O(N^4) evaluation of the quadratic term.

    Sums v_hat(l, eta) . i(k - l, xi - eta - (k - l) t) f_hat(k-l, xi-eta)
    over all grid mode pairs (linear convolution: out-of-grid partners
    dropped), scaled by dk dxi / 2pi to match the transform
    normalization. Test oracle only; pair with dealias-masked inputs.
    """
    g = f.grid
    nx, ny = g.nx, g.ny
    mx = np.rint(g.kx / g.dk).astype(int)
    my = np.rint(g.xi / g.dxi).astype(int)
    order_x = np.argsort(mx)
    order_y = np.argsort(my)
    # dense arrays indexed by integer mode, ascending
    c = f.coeffs[np.ix_(order_x, order_y)]
    kv = g.kx[order_x]
    xv = g.xi[order_y]
    out = np.zeros((nx, ny), dtype=complex)
    xs = xv[None, :] - kv[:, None] * t
    den = kv[:, None] ** 2 + xs**2
    inv = np.where(den > 0, 1.0 / np.where(den > 0, den, 1.0), 0.0)
    v1 = 1j * xs * inv * c
    v2 = -1j * kv[:, None] * inv * c
    for i, k in enumerate(kv):
        for j, xi in enumerate(xv):
            # partner mode k2 = k - kv[p], xi2 = xi - xv[q]
            k2 = k - kv[:, None]
            xi2 = xi - xv[None, :]
            pi = np.rint(k2 / g.dk).astype(int) - mx[order_x[0]]
            qi = np.rint(xi2 / g.dxi).astype(int) - my[order_y[0]]
            ok = (pi >= 0) & (pi < nx) & (qi >= 0) & (qi < ny)
            pi = np.clip(pi, 0, nx - 1)
            qi = np.clip(qi, 0, ny - 1)
            partner = np.where(ok, c[pi, qi], 0.0)
            term = v1 * (1j * k2) * partner + v2 * (1j * (xi2 - k2 * t)) * partner
            out[i, j] = term.sum()
    out *= g.dk * g.dxi / (2.0 * np.pi)
    # back to FFT ordering
    inv_x = np.argsort(order_x)
    inv_y = np.argsort(order_y)
    return SpectralField(g, out[np.ix_(inv_x, inv_y)])


def _propagator(grid, nu, t1, t2):
    """Per-mode exact linear propagator exp(-nu * int_{t1}^{t2} symbol)."""
    return np.exp(
        -viscous_integral(nu, grid.kmesh, grid.ximesh, t1, t2)
    )


def step(state, config, mask=None, check_cfl=True):
    """Advance one Lawson integrating-factor RK4 step.

    The exact per-mode propagator handles the time-dependent viscous
    symbol over each substage; RK4 handles the quadratic term. Raises
    StepRejected when the advective CFL number exceeds 0.5.
    """
    g = state.f.grid
    if not state.f.is_finite():
        raise ValidationError("field contains non-finite entries")
    h = config.dt
    t = state.t
    nu = config.nu
    if mask is None:
        mask = dealias_mask(g, config.dealias)
    u = state.f.coeffs
    e_half = _propagator(g, nu, t, t + h / 2.0)
    e_mid = _propagator(g, nu, t + h / 2.0, t + h)
    e_full = _propagator(g, nu, t, t + h)

    if config.mode == "linear_only":
        new = e_full * u
    else:
        if check_cfl:
            vmax = max_velocity(state.f, t)
            hmin = min(g.lx / g.nx, g.ly / g.ny)
            cfl = vmax * h / hmin
            if cfl > 0.5:
                raise StepRejected(cfl, 0.45 * hmin / vmax)

        def rhs(coeffs, tau):
            return nonlinear_rhs(SpectralField(g, coeffs), tau, mask).coeffs

        k1 = rhs(u, t)
        k2 = rhs(e_half * (u + 0.5 * h * k1), t + h / 2.0)
        k3 = rhs(e_half * u + 0.5 * h * k2, t + h / 2.0)
        k4 = rhs(e_full * u + h * e_mid * k3, t + h)
        new = e_full * u + (h / 6.0) * (e_full * k1 + 2.0 * e_mid * (k2 + k3) + k4)

    if config.shift_policy == "truncate":
        new = np.where(offgrid_keep_mask(g, t + h), new, 0.0)
    return MovingFrameState(t=t + h, f=SpectralField(g, new))


@dataclass
class QuasiState:
    """Quasi-linear decomposition state: exact linear part + remainder."""

    t: float
    omega_L: SpectralField
    omega_NL: SpectralField


def quasilinear_rhs(omega_L, omega_NL, t, mask, terms=ALL_TERMS):
    """Interaction terms driving the quasi-linear remainder.

    source:    v(L) . grad L      transport: v(L) . grad NL
    reaction:  v(NL) . grad L     nonlinear: v(NL) . grad NL
    """
    g = omega_L.grid
    vL = [transform_inverse(c) for c in biot_savart_velocity(omega_L, t)]
    vN = [transform_inverse(c) for c in biot_savart_velocity(omega_NL, t)]
    gL = [transform_inverse(c) for c in gradient_moving(omega_L, t)]
    gN = [transform_inverse(c) for c in gradient_moving(omega_NL, t)]
    prod = np.zeros(g.shape)
    if "source" in terms:
        prod = prod + vL[0] * gL[0] + vL[1] * gL[1]
    if "transport" in terms:
        prod = prod + vL[0] * gN[0] + vL[1] * gN[1]
    if "reaction" in terms:
        prod = prod + vN[0] * gL[0] + vN[1] * gL[1]
    if "nonlinear" in terms:
        prod = prod + vN[0] * gN[0] + vN[1] * gN[1]
    out = transform_forward(prod, g)
    out.coeffs *= mask
    return out


def step_quasilinear(qstate, config, omega_in, mask=None, check_cfl=True):
    """Advance the remainder omega_NL one step; omega_L is never stepped,
    it is refreshed from the closed-form Kelvin solution at every stage
    time."""
    g = qstate.omega_NL.grid
    h = config.dt
    t = qstate.t
    nu = config.nu
    if mask is None:
        mask = dealias_mask(g, config.dealias)
    terms = config.quasilinear_terms

    def lin(tau):
        return kelvin_solve(omega_in, nu, tau, shift_policy="truncate")

    l0 = qstate.omega_L
    l_half = lin(t + h / 2.0)
    l_full = lin(t + h)

    if check_cfl:
        total = SpectralField(g, l0.coeffs + qstate.omega_NL.coeffs)
        vmax = max_velocity(total, t)
        hmin = min(g.lx / g.nx, g.ly / g.ny)
        cfl = vmax * h / hmin
        if cfl > 0.5:
            raise StepRejected(cfl, 0.45 * hmin / vmax)

    def rhs(coeffs, lpart, tau):
        return quasilinear_rhs(
            lpart, SpectralField(g, coeffs), tau, mask, terms
        ).coeffs

    u = qstate.omega_NL.coeffs
    e_half = _propagator(g, nu, t, t + h / 2.0)
    e_mid = _propagator(g, nu, t + h / 2.0, t + h)
    e_full = _propagator(g, nu, t, t + h)
    k1 = rhs(u, l0, t)
    k2 = rhs(e_half * (u + 0.5 * h * k1), l_half, t + h / 2.0)
    k3 = rhs(e_half * u + 0.5 * h * k2, l_half, t + h / 2.0)
    k4 = rhs(e_full * u + h * e_mid * k3, l_full, t + h)
    new = e_full * u + (h / 6.0) * (e_full * k1 + 2.0 * e_mid * (k2 + k3) + k4)
    if config.shift_policy == "truncate":
        new = np.where(offgrid_keep_mask(g, t + h), new, 0.0)
    return QuasiState(t=t + h, omega_L=l_full, omega_NL=SpectralField(g, new))


@dataclass
class Trajectory:
    """Probe series and final state of one run."""

    times: list
    series: dict
    final: SpectralField
    final_t: float
    snapshots: list = field(default_factory=list)
    n_steps: int = 0


def run(initial, config, probes=(), probe_interval=None, keep_snapshots=False):
    """Integrate to t_max, invoking probe callbacks at regular intervals.

    probes: iterable of (name, fn) with fn(field, t) -> float. The
    trajectory is deterministic given initial data and config.
    """
    g = initial.grid
    config.validate_horizon(g)
    mask = dealias_mask(g, config.dealias)
    if probe_interval is None:
        probe_interval = max(config.dt, config.t_max / 64.0)

    quasilinear = config.mode == "quasilinear"
    if quasilinear:
        zero = SpectralField(g, np.zeros(g.shape, dtype=complex))
        qstate = QuasiState(t=0.0, omega_L=initial.copy(), omega_NL=zero)
        current = lambda: SpectralField(
            g, qstate.omega_L.coeffs + qstate.omega_NL.coeffs
        )
    else:
        state = MovingFrameState(t=0.0, f=initial.copy())
        current = lambda: state.f

    times = []
    series = {name: [] for name, _ in probes}
    snapshots = []

    def record(t):
        times.append(t)
        f = current()
        for name, fn in probes:
            series[name].append(fn(f, t))
        if keep_snapshots:
            snapshots.append(f.copy())

    record(0.0)
    n_steps = int(np.ceil(config.t_max / config.dt - 1e-12))
    next_probe = probe_interval
    t = 0.0
    for i in range(n_steps):
        dt_i = min(config.dt, config.t_max - t)
        cfg_i = config if dt_i == config.dt else replace(config, dt=dt_i)
        if quasilinear:
            qstate = step_quasilinear(qstate, cfg_i, initial, mask)
            t = qstate.t
        else:
            state = step(state, cfg_i, mask)
            t = state.t
        if t + 1e-12 >= next_probe or i == n_steps - 1:
            record(t)
            while t + 1e-12 >= next_probe:
                next_probe += probe_interval

    return Trajectory(
        times=times,
        series=series,
        final=current(),
        final_t=t,
        snapshots=snapshots,
        n_steps=n_steps,
    )
