import numpy as np
import pytest

import couette as C
from couette import diagnostics as D
from couette.errors import ValidationError
from couette.grid import SpectralField
from couette.solver import Trajectory


def test_stream_gradient_single_mode_magnitude():
    g = C.make_grid(16, 16, 2 * np.pi, 2 * np.pi)
    coeffs = np.zeros(g.shape, dtype=complex)
    coeffs[1, 2] = 1.0
    t = 0.9
    out = D.stream_gradient_field(SpectralField(g, coeffs), t)
    k, xi = g.kx[1], g.xi[2]
    expected = abs(k) * np.sqrt(k**2 + xi**2) / (k**2 + (xi - k * t) ** 2)
    assert abs(out.coeffs[1, 2]) == pytest.approx(expected)


def test_stream_gradient_zero_mode_vanishes():
    g = C.make_grid(16, 16, 2 * np.pi, 2 * np.pi)
    f = SpectralField(g, np.ones(g.shape, dtype=complex))
    out = D.stream_gradient_field(f, 0.0)
    assert np.all(out.coeffs[0, :] == 0.0)


def test_kelvin_damping_diagnostic_slope_minus_two():
    # single-k data: the stream-gradient norm of the exact linear
    # solution decays like t^-2 (frequency mixing)
    g = C.make_grid(32, 256, 2 * np.pi, 2 * np.pi)
    u = np.cos(g.x())[:, None] * np.exp(
        -np.minimum(g.y(), g.ly - g.y()) ** 2
    )[None, :]
    f0 = C.transform_forward(u, g)
    times = np.linspace(1.0, 40.0, 40)
    vals = [
        D.stream_gradient_norm(C.kelvin_solve(f0, 0.0, t, "truncate"), t)
        for t in times
    ]
    series = D.NormSeries(times, vals, "sg")
    rate, r2 = D.fit_decay(series, (5.0, 35.0), kind="power")
    assert rate == pytest.approx(-2.0, abs=0.3)
    assert r2 > 0.99


def test_norm_series_validation():
    with pytest.raises(ValidationError):
        D.NormSeries([0.0, 1.0], [1.0], "x")
    with pytest.raises(ValidationError):
        D.NormSeries([0.0, 0.0], [1.0, 1.0], "x")
    with pytest.raises(ValidationError):
        D.NormSeries([0.0, 1.0], [1.0, np.nan], "x")


def test_fit_decay_exponential_synthetic():
    t = np.linspace(0.0, 10.0, 50)
    series = D.NormSeries(t, 3.0 * np.exp(-0.7 * t), "x")
    rate, r2 = D.fit_decay(series, (0.0, 10.0), kind="exp")
    assert rate == pytest.approx(-0.7, rel=1e-10)
    assert r2 == pytest.approx(1.0)


def test_fit_decay_power_synthetic():
    t = np.linspace(1.0, 50.0, 60)
    series = D.NormSeries(t, 5.0 * t**-2.0, "x")
    rate, _ = D.fit_decay(series, (1.0, 50.0), kind="power")
    assert rate == pytest.approx(-2.0, rel=1e-10)


def test_fit_decay_requires_samples_and_positivity():
    t = np.linspace(0.0, 1.0, 4)
    with pytest.raises(ValidationError):
        D.fit_decay(D.NormSeries(t, np.ones(4), "x"), (0.0, 1.0))
    t = np.linspace(0.0, 1.0, 10)
    v = np.ones(10)
    v[3] = -1.0
    with pytest.raises(ValidationError):
        D.fit_decay(D.NormSeries(t, np.abs(v), "x"), (0.0, 0.01))


def _record(times, weighted, enstrophy):
    return Trajectory(
        times=list(times),
        series={"weighted": list(weighted), "enstrophy": list(enstrophy),
                "damping": list(weighted)},
        final=None,
        final_t=times[-1],
    )


def test_classify_stable():
    t = np.linspace(0.0, 10.0, 21)
    decay = np.exp(-0.1 * t)
    verdict = D.classify(_record(t, decay, decay))
    assert verdict.classification == "stable"
    assert verdict.growth_factor == pytest.approx(1.0)
    assert verdict.damping_integral > 0.0


def test_classify_transitioned():
    t = np.linspace(0.0, 10.0, 21)
    growth = np.exp(0.5 * t)
    verdict = D.classify(_record(t, growth, growth))
    assert verdict.classification == "transitioned"
    assert verdict.growth_factor >= 100.0


def test_classify_inconclusive_on_moderate_growth():
    t = np.linspace(0.0, 10.0, 21)
    mid = 1.0 + 9.0 * (t / 10.0)  # peaks at 10x: above stable, below 100x
    verdict = D.classify(_record(t, mid, np.ones_like(t)))
    assert verdict.classification == "inconclusive"


def test_classify_rising_tail_blocks_stable():
    t = np.linspace(0.0, 10.0, 21)
    flat = np.ones_like(t)
    rising = np.concatenate([np.ones(16), np.linspace(1.0, 1.5, 5)])
    verdict = D.classify(_record(t, flat, rising))
    assert verdict.classification == "inconclusive"


def test_norm_csv_round_trip(tmp_path):
    times = [0.0, 0.5, 1.0]
    series = {"b": [3.0, 2.0, 1.0], "a": [1.0, 2.0, 3.0]}
    path = tmp_path / "norms.csv"
    D.write_norm_csv(path, series, times)
    t_back, s_back = D.read_series_csv(path)
    assert np.array_equal(t_back, times)
    assert set(s_back) == {"a", "b"}
    assert np.array_equal(s_back["b"], series["b"])


def test_norm_csv_deterministic_bytes(tmp_path):
    times = [0.0, 1.0 / 3.0]
    series = {"x": [0.1, 0.2]}
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    D.write_norm_csv(p1, series, times)
    D.write_norm_csv(p2, series, times)
    assert p1.read_bytes() == p2.read_bytes()
    # repr round-trips floats exactly
    _, s_back = D.read_series_csv(p1)
    assert s_back["x"][0] == 0.1
