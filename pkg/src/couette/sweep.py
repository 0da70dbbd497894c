"""Experiment campaigns: run configs, threshold bisection, beta fits.

Every run is reproducible from a RunConfig value: the config hashes to
a directory name under `runs/`, holding `norms.csv`, `manifest.json`
and the final-state checkpoint. A campaign interrupted and resumed
reuses completed run directories verbatim, so outputs are byte-identical
to an uninterrupted campaign.
"""
from __future__ import annotations

import csv
import hashlib
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace

import numpy as np

from .checkpoint import save_checkpoint
from .diagnostics import (
    ClassifyThresholds,
    NormProbeSpec,
    classify,
    enstrophy_nonzero,
    norm_probe,
    read_series_csv,
    write_manifest,
    write_norm_csv,
)
from .errors import BracketInvalid, ValidationError
from .grid import make_grid
from .initial_data import make_initial_data
from .solver import SolverConfig, Trajectory, run
from .weights import MultiplierParams


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce one run."""

    nx: int
    ny: int
    lx: float
    ly: float
    nu: float
    dt: float
    t_max: float
    amplitude: float
    seed: int
    dealias: float = 2.0 / 3.0
    mode: str = "full"
    shift_policy: str = "truncate"
    c: float = 0.05
    eps: float = 0.4
    kappa: float = 0.02
    delta: float = 0.1
    m: float = 1.0
    rate_kind: str = "lambda"
    probe_interval: float = 0.0  # 0 -> auto
    stable_max: float = 4.0
    transitioned_min: float = 100.0

    def auto_probe_interval(self):
        if self.probe_interval > 0:
            return self.probe_interval
        # resolve the enhanced-dissipation scale, keep >= 8 samples
        return min(0.1 * self.nu ** (-1.0 / 3.0), max(self.t_max / 8.0, self.dt))

    def to_json(self):
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text):
        return cls(**json.loads(text))

    def digest(self):
        return hashlib.sha256(self.to_json().encode()).hexdigest()[:16]


def execute_run(config, out_dir, resume=False):
    """Run one configuration, writing runs/<hash>/ outputs.

    Returns (verdict, run_dir). With resume=True a completed run
    directory is trusted and reread instead of recomputed.
    """
    run_dir = os.path.join(out_dir, "runs", config.digest())
    manifest_path = os.path.join(run_dir, "manifest.json")
    norms_path = os.path.join(run_dir, "norms.csv")
    if resume and os.path.exists(manifest_path):
        with open(manifest_path) as fh:
            manifest = json.load(fh)
        if manifest.get("complete"):
            times, series = read_series_csv(norms_path)
            record = Trajectory(
                times=list(times), series=series, final=None, final_t=times[-1]
            )
            verdict = classify(record, _thresholds(config))
            return verdict, run_dir

    os.makedirs(run_dir, exist_ok=True)
    grid = make_grid(config.nx, config.ny, config.lx, config.ly)
    params = MultiplierParams(
        nu=config.nu, c=config.c, eps=config.eps,
        kappa=config.kappa, delta=config.delta,
    )
    initial = make_initial_data(grid, config.amplitude, config.seed)
    solver_cfg = SolverConfig(
        nu=config.nu, dt=config.dt, t_max=config.t_max,
        dealias=config.dealias, mode=config.mode,
        shift_policy=config.shift_policy,
    )
    spec_w = NormProbeSpec(kind="vorticity", m=config.m,
                           rate_kind=config.rate_kind)
    spec_d = NormProbeSpec(kind="damping_integrand", m=config.m,
                           rate_kind=config.rate_kind)
    probes = [
        ("weighted", lambda f, t: norm_probe(f, t, params, spec_w)),
        ("damping", lambda f, t: norm_probe(f, t, params, spec_d)),
        ("enstrophy", lambda f, t: enstrophy_nonzero(f)),
    ]
    record = run(
        initial, solver_cfg, probes=probes,
        probe_interval=config.auto_probe_interval(),
    )
    verdict = classify(record, _thresholds(config))
    write_norm_csv(norms_path, record.series, record.times)
    save_checkpoint(
        os.path.join(run_dir, "final.ctl"), record.final, record.final_t,
        config.nu,
    )
    write_manifest(manifest_path, {
        "config": json.loads(config.to_json()),
        "hash": config.digest(),
        "classification": verdict.classification,
        "growth_factor": verdict.growth_factor,
        "damping_integral": verdict.damping_integral,
        "complete": True,
    })
    return verdict, run_dir


def _thresholds(config):
    return ClassifyThresholds(
        stable_max=config.stable_max,
        transitioned_min=config.transitioned_min,
    )


@dataclass
class SweepResult:
    """Verdicts per (nu, amplitude), critical amplitudes, and beta fit."""

    verdicts: dict            # (nu, amplitude) -> classification
    growth: dict              # (nu, amplitude) -> growth factor
    a_star: dict              # nu -> critical amplitude (may be empty)
    beta_hat: float = np.nan
    beta_band: float = np.nan


def sweep_campaign(base, nus, amplitudes, out_dir, threads=1, resume=False):
    """Classify every (nu, amplitude) cell; emit sweep.csv deterministically.

    Cells run in parallel (each run is an isolated value); results are
    sorted by key before emission so output bytes are independent of the
    thread count.
    """
    os.makedirs(out_dir, exist_ok=True)
    cells = [(nu, a) for nu in nus for a in amplitudes]

    def work(cell):
        nu, a = cell
        cfg = replace(base, nu=nu, amplitude=a)
        verdict, _ = execute_run(cfg, out_dir, resume=resume)
        return cell, verdict

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, cells))
    else:
        results = [work(c) for c in cells]

    verdicts = {}
    growth = {}
    for cell, verdict in sorted(results, key=lambda r: r[0]):
        verdicts[cell] = verdict.classification
        growth[cell] = verdict.growth_factor

    with open(os.path.join(out_dir, "sweep.csv"), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["nu", "amplitude", "classification", "growth_factor"])
        for (nu, a) in sorted(verdicts):
            writer.writerow(
                [repr(float(nu)), repr(float(a)), verdicts[(nu, a)],
                 repr(float(growth[(nu, a)]))]
            )
    result = SweepResult(verdicts=verdicts, growth=growth, a_star={})
    flag_monotonicity_violations(result)
    return result


def flag_monotonicity_violations(result):
    """Stability should be monotone in amplitude at fixed nu: a smaller
    transitioned amplitude with a larger stable one is a grid artifact.
    Returns the offending (nu, a_low, a_high) triples (also stored)."""
    by_nu = {}
    for (nu, a), cls in result.verdicts.items():
        by_nu.setdefault(nu, []).append((a, cls))
    violations = []
    for nu, rows in by_nu.items():
        rows.sort()
        for i, (a_lo, cls_lo) in enumerate(rows):
            if cls_lo != "transitioned":
                continue
            for a_hi, cls_hi in rows[i + 1:]:
                if cls_hi == "stable":
                    violations.append((nu, a_lo, a_hi))
    result.monotonicity_violations = violations
    return violations


def bisect_threshold(classify_fn, bracket, max_iters=20,
                     extend_fn=None):
    """Bisect the stable/transitioned boundary in amplitude.

    classify_fn(a) -> 'stable' | 'transitioned' | 'inconclusive'.
    The bracket must classify (stable, transitioned) at (low, high).
    An inconclusive midpoint triggers one horizon extension through
    extend_fn(a) when provided, else counts as stable (conservative).
    Deterministic; final bracket width is (hi - lo) * 2**-max_iters.
    """
    lo, hi = bracket
    if not lo < hi:
        raise ValidationError(f"bracket must satisfy lo < hi, got {bracket}")
    cls_lo = classify_fn(lo)
    cls_hi = classify_fn(hi)
    if cls_lo == "inconclusive" and extend_fn is not None:
        cls_lo = extend_fn(lo)
    if cls_hi == "inconclusive" and extend_fn is not None:
        cls_hi = extend_fn(hi)
    if not (cls_lo == "stable" and cls_hi == "transitioned"):
        raise BracketInvalid(
            f"bracket endpoints classify as ({cls_lo}, {cls_hi}); "
            "need (stable, transitioned)"
        )
    for _ in range(max_iters):
        mid = 0.5 * (lo + hi)
        cls = classify_fn(mid)
        if cls == "inconclusive" and extend_fn is not None:
            cls = extend_fn(mid)
        if cls == "transitioned":
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def make_pipeline_classifier(base, nu, out_dir, resume=False,
                             horizon_factor=2.0):
    """(classify_fn, extend_fn) pair running the real solver pipeline."""

    def classify_at(a, t_max=None):
        cfg = replace(base, nu=nu, amplitude=a)
        if t_max is not None:
            cfg = replace(cfg, t_max=t_max)
        verdict, _ = execute_run(cfg, out_dir, resume=resume)
        return verdict.classification

    def extend(a):
        return classify_at(a, t_max=base.t_max * horizon_factor)

    return classify_at, extend


def fit_beta(nus, a_stars):
    """Slope of log a*(nu) vs log nu, with a residual-based band.

    Requires >= 4 nu points spanning >= 1.5 decades. Returns
    (beta_hat, band, distances) where distances holds the gaps to the
    reference exponents 1/3 and 1/2.
    """
    nus = np.asarray(nus, dtype=float)
    a_stars = np.asarray(a_stars, dtype=float)
    if len(nus) < 4:
        raise ValidationError(f"need >= 4 nu points, got {len(nus)}")
    span = np.log10(nus.max() / nus.min())
    if span < 1.5:
        raise ValidationError(
            f"nu points span {span:.2f} decades; need >= 1.5"
        )
    x = np.log(nus)
    y = np.log(a_stars)
    coef, cov = np.polyfit(x, y, 1, cov=True)
    beta_hat = float(coef[0])
    band = float(2.0 * np.sqrt(cov[0, 0]))
    distances = {"1/3": abs(beta_hat - 1.0 / 3.0),
                 "1/2": abs(beta_hat - 0.5)}
    return beta_hat, band, distances
