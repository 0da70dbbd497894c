"""Acceptance gate: eleven numbered criteria, one pass/fail line each.

Every criterion states its tolerance and (where applicable) runtime
budget inline; run with `pytest -v -s tests/test_acceptance.py` to see
the lines as they pass.
"""
import time

import numpy as np
import pytest
from scipy.integrate import simpson

import couette as C
from couette import toy
from couette import weights as W
from couette.grid import SpectralField


def _report(num, label, ok, detail):
    line = f"criterion {num:2d} [{'PASS' if ok else 'FAIL'}] {label}: {detail}"
    print(line)
    assert ok, line


def test_criterion_01_linear_solver_matches_kelvin_oracle():
    t0 = time.perf_counter()
    g = C.make_grid(64, 64, 2 * np.pi, 2 * np.pi)
    f0 = C.make_initial_data(g, 1e-3, 42)
    cfg = C.SolverConfig(
        nu=1e-2, dt=0.05, t_max=5.0, mode="linear_only",
        shift_policy="truncate",
    )
    final = C.run(f0, cfg).final
    exact = C.kelvin_solve(f0, 1e-2, 5.0, "truncate")
    diff = SpectralField(g, final.coeffs - exact.coeffs)
    rel = diff.l2_norm() / exact.l2_norm()
    elapsed = time.perf_counter() - t0
    _report(
        1, "linear_only vs kelvin_solve, 64x64, nu=1e-2, t=5",
        rel <= 1e-10 and elapsed < 5.0,
        f"relative L2 error {rel:.3e} (<= 1e-10), {elapsed:.2f}s (< 5s)",
    )


def test_criterion_02_exponent_matches_simpson_quadrature():
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(1000):
        nu = 10.0 ** rng.uniform(-6, -1)
        k = rng.uniform(-8, 8)
        a = rng.uniform(-20, 20)
        t = rng.uniform(0.05, 30.0)
        s = np.linspace(0.0, t, 2001)
        quad = simpson(nu * (k**2 + (a + k * s) ** 2), x=s)
        closed = C.kelvin_exponent(nu, k, a, t)
        worst = max(worst, abs(closed - quad) / max(abs(quad), 1e-300))
    _report(
        2, "kelvin_exponent vs Simpson, 1000 samples",
        worst <= 1e-10,
        f"worst relative error {worst:.3e} (<= 1e-10)",
    )


def test_criterion_03_inviscid_damping_slope():
    t0 = time.perf_counter()
    g = C.make_grid(32, 512, 2 * np.pi, 2 * np.pi)
    u = np.cos(g.x())[:, None] * np.exp(
        -np.minimum(g.y(), g.ly - g.y()) ** 2
    )[None, :]
    f0 = C.transform_forward(u, g)
    times = np.linspace(1.0, 60.0, 60)
    vals = [
        C.stream_gradient_norm(C.kelvin_solve(f0, 0.0, t, "truncate"), t)
        for t in times
    ]
    series = C.NormSeries(times, vals, "stream_gradient")
    slope, r2 = C.fit_decay(series, (5.0, 50.0), kind="power")
    elapsed = time.perf_counter() - t0
    _report(
        3, "Kelvin stream-gradient power law on t in [5, 50]",
        abs(slope + 2.0) <= 0.3 and elapsed < 10.0,
        f"slope {slope:.3f} (-2 +- 0.3), r^2={r2:.4f}, "
        f"{elapsed:.2f}s (< 10s)",
    )


def test_criterion_04_lemma_inequalities():
    params = W.theorem_preset(1e-3)
    rng = np.random.default_rng(4)
    k = rng.uniform(-8, 8, 10_000)
    k[np.abs(k) < 1e-3] = 1.0
    xi = rng.uniform(-20, 20, 10_000)
    lhs, rhs = W.lemma21_check_m1(params, k, xi)
    violations = int(np.sum(lhs < rhs))

    h = 1e-6
    worst_fd = 0.0
    for _ in range(1000):
        kk = rng.uniform(-8, 8)
        if abs(kk) < 1e-2:
            continue
        xx = rng.uniform(-20, 20)
        fd = kk * (W.m2(kk, xx + h) - W.m2(kk, xx - h)) / (2 * h)
        worst_fd = max(worst_fd, abs(fd - W.m2_transport(kk, xx)))
    _report(
        4, "transport inequality (1e4 samples) + m2 derivative",
        violations == 0 and worst_fd <= 1e-6,
        f"{violations} violations (need 0); m2 FD error {worst_fd:.3e} "
        f"(<= 1e-6)",
    )


def test_criterion_05_upsilon_identity():
    params = W.theorem_preset(1e-3)
    rng = np.random.default_rng(5)
    worst = 0.0
    all_positive = True
    for _ in range(100):
        t = rng.uniform(0.5, 15.0)
        k = rng.uniform(-5, 5)
        xi = rng.uniform(-10, 10)
        ups = W.upsilon(params, t, k, xi)
        fd = W.upsilon_finite_difference(params, t, k, xi)
        all_positive &= ups > 0.0
        worst = max(worst, abs(ups - fd) / abs(ups))
    _report(
        5, "(-d_t + k d_xi) m3 vs upsilon quadrature, 100 samples",
        worst <= 1e-4 and all_positive,
        f"worst relative error {worst:.3e} (<= 1e-4); positive "
        f"everywhere: {all_positive}",
    )


def test_criterion_06_brute_force_convolution():
    worst = 0.0
    for n in (8, 16):
        g = C.make_grid(n, n, 2 * np.pi, 2 * np.pi)
        f = C.make_initial_data(g, 1.0, 6)
        # restrict support so the quadratic product stays strictly below
        # Nyquist: the linear convolution then has no folding ambiguity
        mx = np.rint(g.kmesh / g.dk)
        my = np.rint(g.ximesh / g.dxi)
        b = (n // 2 - 1) // 2
        f = SpectralField(g, f.coeffs * ((np.abs(mx) <= b) & (np.abs(my) <= b)))
        t = 0.7
        fast = C.nonlinear_rhs(f, t, np.ones(g.shape, dtype=bool))
        slow = C.convolution_direct(f, t)
        scale = np.abs(slow.coeffs).max()
        worst = max(worst, np.abs(fast.coeffs - slow.coeffs).max() / scale)
    _report(
        6, "nonlinear_rhs vs O(N^4) convolution, 8x8 and 16x16",
        worst <= 1e-10,
        f"worst relative error {worst:.3e} (<= 1e-10)",
    )


def test_criterion_07_fourth_order_in_time():
    g = C.make_grid(32, 32, 2 * np.pi, 2 * np.pi)
    f0 = C.make_initial_data(g, 0.5, 11)

    def final(dt):
        cfg = C.SolverConfig(
            nu=1e-2, dt=dt, t_max=1.0, mode="full", shift_policy="truncate"
        )
        return C.run(f0, cfg).final.coeffs

    ref = final(1.0 / 512)
    e1 = np.abs(final(0.05) - ref).max()
    e2 = np.abs(final(0.025) - ref).max()
    ratio = e1 / e2
    _report(
        7, "dt-halving error ratio",
        14.0 <= ratio <= 18.0,
        f"ratio {ratio:.2f} (16 +- 2)",
    )


def test_criterion_08_quasilinear_identity():
    t0 = time.perf_counter()
    nu = 1e-3
    t_end = 2.0 * nu ** (-1.0 / 6.0)
    g = C.make_grid(128, 256, 2 * np.pi, 2 * np.pi)
    f0 = C.make_initial_data(g, 1e-6, 8)
    kw = dict(nu=nu, dt=0.02, t_max=t_end, shift_policy="truncate")
    full = C.run(f0, C.SolverConfig(mode="full", **kw)).final
    quasi = C.run(f0, C.SolverConfig(mode="quasilinear", **kw)).final
    diff = SpectralField(g, quasi.coeffs - full.coeffs)
    rel = diff.l2_norm() / full.l2_norm()
    elapsed = time.perf_counter() - t0
    _report(
        8, "omega_L + omega_NL vs full solver at 128x256",
        rel <= 1e-6 and elapsed < 120.0,
        f"relative L2 error {rel:.3e} (<= 1e-6), {elapsed:.1f}s (< 2min)",
    )


def test_criterion_09_toy_model_slopes():
    t0 = time.perf_counter()
    shells = [8, 16, 32, 64]
    rep_third = toy.run_amplification(shells, 1.0 / 3.0, 0.1)
    rep_half = toy.run_amplification(shells, 0.5, 0.1)
    s_third = rep_third.slope()
    s_half = rep_half.slope()
    cutoff_ok = not any(
        r.cutoff_active for r in rep_third.rows + rep_half.rows
    )
    elapsed = time.perf_counter() - t0
    _report(
        9, "echo amplification slopes over N in {8,...,64}",
        abs(s_third - 0.4) <= 0.15 and s_half <= 0.15 and cutoff_ok
        and elapsed < 60.0,
        f"beta=1/3 slope {s_third:.3f} (0.4 +- 0.15); beta=1/2 slope "
        f"{s_half:.3f} (<= 0.15); cutoff inactive: {cutoff_ok}; "
        f"{elapsed:.1f}s (< 1min)",
    )


def test_criterion_10_weighted_norm_boundedness():
    t0 = time.perf_counter()
    nu = 1e-3
    g = C.make_grid(128, 512, 64 * np.pi, 2 * np.pi)
    amplitude = C.calibrated_amplitude(g, seed=10, target_norm=nu**0.4)
    f0 = C.make_initial_data(g, amplitude, 10)
    params = W.theorem_preset(nu, quasilinear=True)  # c=0.05, eps=0.46
    cfg = C.SolverConfig(
        nu=nu, dt=0.1, t_max=5.0 * nu ** (-1.0 / 3.0),
        shift_policy="truncate",
    )
    traj = C.run(
        f0, cfg,
        probes=[
            ("weighted",
             lambda f, t: W.weight_theorem_norm(f, params, t).value),
        ],
        probe_interval=1.0,
    )
    series = np.asarray(traj.series["weighted"])
    growth = float(series.max() / series[0])
    elapsed = time.perf_counter() - t0
    _report(
        10, "weighted-norm growth, 128x512, lx=64pi, t in [0, 50]",
        growth <= 4.0 and elapsed < 600.0,
        f"growth factor {growth:.3f} (<= 4), {elapsed:.1f}s (< 10min)",
    )


def test_criterion_11_determinism_and_resume(tmp_path):
    import hashlib
    import os
    import shutil

    base = C.RunConfig(
        nx=16, ny=32, lx=4 * np.pi, ly=2 * np.pi, nu=1e-2, dt=0.05,
        t_max=1.5, amplitude=1e-4, seed=3,
    )
    nus = [1e-2, 3e-2, 1e-1]
    amps = [1e-5, 1e-4, 1e-3]

    def hashes(root):
        out = {}
        for dirpath, _, files in os.walk(root):
            for fn in files:
                p = os.path.join(dirpath, fn)
                with open(p, "rb") as fh:
                    out[os.path.relpath(p, root)] = hashlib.sha256(
                        fh.read()
                    ).hexdigest()
        return out

    d1 = tmp_path / "a"
    d2 = tmp_path / "b"
    C.sweep_campaign(base, nus, amps, d1, threads=1)
    C.sweep_campaign(base, nus, amps, d2, threads=4)
    repeat_ok = hashes(d1) == hashes(d2)

    victim = sorted(os.listdir(d1 / "runs"))[0]
    shutil.rmtree(d1 / "runs" / victim)
    os.remove(d1 / "sweep.csv")
    C.sweep_campaign(base, nus, amps, d1, threads=2, resume=True)
    resume_ok = hashes(d1) == hashes(d2)
    _report(
        11, "3x3 campaign byte-identity (repeat + interrupted resume)",
        repeat_ok and resume_ok,
        f"repeat identical: {repeat_ok}; resume identical: {resume_ok}",
    )
