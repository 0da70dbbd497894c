"""Trajectory diagnostics: weighted norms, decay fits, stability verdicts."""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, asdict

import numpy as np

from .errors import ValidationError
from .grid import SpectralField
from .weights import weight_theorem_norm


def stream_gradient_field(field, t):
    """Apply the d_x grad (-Delta_L)^{-1} symbol (moving-frame gradient).

    Per-mode magnitude |k| <(k, xi)> / (k^2 + (xi - k t)^2): the inverse
    Laplacian carries the sheared frequency while the gradient weight is
    taken in the frame-adapted variables, so the result tracks the
    algebraic Orr decay of the stream function.
    """
    g = field.grid
    k = g.kmesh
    xi = g.ximesh
    xs = xi - k * t
    den = k**2 + xs**2
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = np.where(den > 0.0, 1.0 / np.where(den > 0.0, den, 1.0), 0.0)
    mag = np.abs(k) * np.sqrt(k**2 + xi**2) * inv
    return SpectralField(g, mag * field.coeffs)


def stream_gradient_norm(field, t):
    """Unweighted L2 norm of the stream-function gradient diagnostic."""
    return stream_gradient_field(field, t).l2_norm()


@dataclass(frozen=True)
class NormProbeSpec:
    """Which weighted norm a probe computes.

    kind: 'vorticity' weights the field itself; 'damping_integrand'
    first applies the stream-gradient symbol.
    """

    kind: str = "vorticity"
    m: float = 1.0
    rate_kind: str = "lambda"

    def __post_init__(self):
        if self.kind not in ("vorticity", "damping_integrand"):
            raise ValidationError(f"unknown probe kind {self.kind!r}")


def norm_probe(field, t, params, spec=NormProbeSpec()):
    """Weighted norm of a trajectory snapshot (k != 0 part)."""
    if spec.kind == "damping_integrand":
        field = stream_gradient_field(field, t)
    return weight_theorem_norm(
        field, params, t, m=spec.m, rate_kind=spec.rate_kind
    ).value


def enstrophy_nonzero(field):
    """Unweighted spectral L2 mass of the k != 0 modes."""
    g = field.grid
    nz = g.kmesh != 0.0
    return float(
        np.sqrt(np.sum(np.abs(field.coeffs[nz]) ** 2) * g.dk * g.dxi)
    )


@dataclass
class NormSeries:
    """Time-stamped values of one weighted norm."""

    times: np.ndarray
    values: np.ndarray
    norm_id: str

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.times.shape != self.values.shape:
            raise ValidationError("times and values must have equal length")
        if len(self.times) > 1 and np.any(np.diff(self.times) <= 0):
            raise ValidationError("times must be strictly increasing")
        if not np.all(np.isfinite(self.values)):
            raise ValidationError("values must be finite")


def fit_decay(series, window, kind="exp"):
    """Least-squares rate of a norm series over a time window.

    kind='exp' fits log(value) against t (exponential rate);
    kind='power' fits log(value) against log(t) (power-law slope).
    Returns (rate, r_squared).
    """
    t0, t1 = window
    sel = (series.times >= t0) & (series.times <= t1)
    t = series.times[sel]
    v = series.values[sel]
    if len(t) < 8:
        raise ValidationError(f"need >= 8 samples in window, got {len(t)}")
    if np.any(v <= 0.0):
        raise ValidationError("fit requires positive values")
    if kind == "exp":
        x = t
    elif kind == "power":
        if np.any(t <= 0.0):
            raise ValidationError("power fit requires positive times")
        x = np.log(t)
    else:
        raise ValidationError(f"unknown fit kind {kind!r}")
    y = np.log(v)
    coef, residuals, *_ = np.polyfit(x, y, 1, full=True)
    rate = float(coef[0])
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(residuals[0]) if len(residuals) else 0.0
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return rate, r2


@dataclass(frozen=True)
class ClassifyThresholds:
    stable_max: float = 4.0
    transitioned_min: float = 100.0
    tail_slack: float = 0.01


@dataclass
class StabilityVerdict:
    classification: str  # stable | transitioned | inconclusive
    growth_factor: float
    damping_integral: float


def classify(record, thresholds=ClassifyThresholds()):
    """Band a finished run as stable / transitioned / inconclusive.

    `record` is a solver Trajectory whose probes include 'weighted'
    (the theorem-norm series), 'enstrophy' (unweighted k != 0 mass) and
    optionally 'damping' (whose square is time-integrated). Stable
    requires bounded weighted growth AND a nonincreasing enstrophy tail
    over the last quarter of the run.
    """
    times = np.asarray(record.times, dtype=float)
    if len(times) == 0:
        return StabilityVerdict("inconclusive", np.nan, np.nan)
    weighted = np.asarray(record.series.get("weighted", []), dtype=float)
    enstrophy = np.asarray(record.series.get("enstrophy", []), dtype=float)
    damping = np.asarray(record.series.get("damping", []), dtype=float)
    integral = (
        float(np.trapezoid(damping**2, times)) if len(damping) else np.nan
    )
    if len(weighted) == 0 or weighted[0] <= 0.0:
        return StabilityVerdict("inconclusive", np.nan, integral)
    growth = float(weighted.max() / weighted[0])
    tail_ok = True
    if len(enstrophy) >= 4:
        tail = enstrophy[3 * len(enstrophy) // 4:]
        tail_ok = bool(tail.max() <= tail[0] * (1.0 + thresholds.tail_slack))
    if growth >= thresholds.transitioned_min:
        cls = "transitioned"
    elif growth <= thresholds.stable_max and tail_ok:
        cls = "stable"
    else:
        cls = "inconclusive"
    return StabilityVerdict(cls, growth, integral)


def write_norm_csv(path, series_map, times):
    """Serialize norm series as CSV rows (time, value, norm_id)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time", "value", "norm_id"])
        for norm_id in sorted(series_map):
            for t, v in zip(times, series_map[norm_id]):
                writer.writerow([repr(float(t)), repr(float(v)), norm_id])


def write_manifest(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_series_csv(path):
    """Inverse of write_norm_csv: returns (times, series_map)."""
    series = {}
    times_by_id = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            nid = row["norm_id"]
            series.setdefault(nid, []).append(float(row["value"]))
            times_by_id.setdefault(nid, []).append(float(row["time"]))
    if not series:
        return np.array([]), {}
    any_id = sorted(series)[0]
    return np.asarray(times_by_id[any_id]), {
        k: np.asarray(v) for k, v in series.items()
    }
