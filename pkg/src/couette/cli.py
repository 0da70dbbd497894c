"""Command-line interface.

Subcommands: linear, solve, toy, weights, sweep, norms. Exit codes:
0 success, 1 validation error (bad flags, bad config, missing files),
2 numerical failure (CFL rejection, quadrature nonconvergence, weight
overflow, off-grid abort).
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from . import checkpoint, diagnostics, kelvin, sweep, toy, weights
from .errors import NumericalError, ValidationError
from .grid import SpectralField, make_grid, transform_forward
from .sweep import RunConfig


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ValidationError(message)


def load_config(path):
    if not os.path.exists(path):
        raise ValidationError(f"config file not found: {path}")
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def _build_parser():
    p = _Parser(prog="couette", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="TOML config file")
        sp.add_argument("--out", default="out", help="output directory")
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--resume", action="store_true")

    sp = sub.add_parser("linear", help="linear-oracle runs and envelope fits")
    common(sp)
    sp.add_argument("--nu", type=float, default=1e-3)
    sp.add_argument("--fit", choices=["inviscid", "enhanced"],
                    default="inviscid")

    sp = sub.add_parser("solve", help="full or quasi-linear solver run")
    common(sp)

    sp = sub.add_parser("toy", help="echo-cascade toy-model sweeps")
    common(sp)
    sp.add_argument("--beta", type=float, default=1.0 / 3.0)
    sp.add_argument("--eps", type=float, default=0.1)
    sp.add_argument("--shells", type=int, nargs="+",
                    default=[8, 16, 32, 64])

    sp = sub.add_parser("weights", help="multiplier tables and checks")
    common(sp)
    sp.add_argument("--check-lemma21", action="store_true")
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--nu", type=float, default=1e-3)

    sp = sub.add_parser("sweep", help="threshold campaign")
    common(sp)

    sp = sub.add_parser("norms", help="recompute norms from checkpoints")
    common(sp)
    sp.add_argument("checkpoints", nargs="+", help="checkpoint files")
    return p


def cmd_linear(args):
    os.makedirs(args.out, exist_ok=True)
    grid = make_grid(32, 512, 2.0 * np.pi, 2.0 * np.pi)
    # single-k Gaussian-in-xi initial data at k = +-1
    u = np.cos(grid.x())[:, None] * np.exp(
        -np.minimum(grid.y(), grid.ly - grid.y()) ** 2
    )[None, :]
    f0 = transform_forward(u, grid)
    times = np.linspace(1.0, 60.0, 60)
    if args.fit == "inviscid":
        # the power-law (Orr) decay is isolated from the exponential
        # viscous factor by evaluating the oracle at nu = 0
        values = [
            diagnostics.stream_gradient_norm(
                kelvin.kelvin_solve(f0, 0.0, t, "truncate"), t
            )
            for t in times
        ]
        series = diagnostics.NormSeries(times, values, "stream_gradient")
        rate, r2 = diagnostics.fit_decay(series, (5.0, 50.0), kind="power")
        label = "power-law slope"
    else:
        params = weights.theorem_preset(args.nu)
        values = [
            kelvin.kelvin_solve(f0, args.nu, t, "truncate").l2_norm()
            for t in times
        ]
        series = diagnostics.NormSeries(times, values, "l2")
        rate, r2 = diagnostics.fit_decay(series, (5.0, 50.0), kind="exp")
        rate /= params.nu ** (1.0 / 3.0)  # report in nu^{1/3} units
        label = "decay rate / nu^(1/3)"
    report = {"fit": args.fit, "nu": args.nu, label: rate, "r_squared": r2}
    path = os.path.join(args.out, f"linear_{args.fit}.json")
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
    print(f"{label}: {rate:.4f} (r^2 = {r2:.5f}) -> {path}")
    return 0


def _runconfig_from_toml(doc, seed):
    grid = doc.get("grid", {})
    solver = doc.get("solver", {})
    params = doc.get("params", {})
    initial = doc.get("initial", {})
    try:
        return RunConfig(
            nx=grid["nx"], ny=grid["ny"],
            lx=float(grid["lx"]), ly=float(grid["ly"]),
            nu=float(solver["nu"]), dt=float(solver["dt"]),
            t_max=float(solver["t_max"]),
            dealias=float(solver.get("dealias", 2.0 / 3.0)),
            mode=solver.get("mode", "full"),
            shift_policy=solver.get("shift_policy", "truncate"),
            c=float(params.get("c", 0.05)),
            eps=float(params.get("eps", 0.4)),
            kappa=float(params.get("kappa", 0.02)),
            delta=float(params.get("delta", 0.1)),
            m=float(params.get("m", 1.0)),
            rate_kind=params.get("rate_kind", "lambda"),
            amplitude=float(initial.get("amplitude", 1.0)),
            seed=int(initial.get("seed", seed)),
            probe_interval=float(doc.get("probes", {}).get("interval", 0.0)),
        )
    except KeyError as exc:
        raise ValidationError(f"config missing required key: {exc}") from exc


def cmd_solve(args):
    if not args.config:
        raise ValidationError("solve requires --config")
    doc = load_config(args.config)
    cfg = _runconfig_from_toml(doc, args.seed)
    verdict, run_dir = sweep.execute_run(cfg, args.out, resume=args.resume)
    print(
        f"{verdict.classification} growth_factor={verdict.growth_factor:.3f} "
        f"-> {run_dir}"
    )
    return 0


def cmd_toy(args):
    os.makedirs(args.out, exist_ok=True)
    report = toy.run_amplification(args.shells, args.beta, args.eps)
    path = os.path.join(args.out, "toy_sweep.csv")
    report.write_csv(path)
    print(f"slope(log A vs log N) = {report.slope():.4f} -> {path}")
    return 0


def cmd_weights(args):
    os.makedirs(args.out, exist_ok=True)
    params = weights.MultiplierParams(nu=args.nu)
    rng = np.random.default_rng(args.seed)
    if args.check_lemma21:
        k = rng.uniform(-8.0, 8.0, args.samples)
        k[k == 0.0] = 1.0
        xi = rng.uniform(-20.0, 20.0, args.samples)
        lhs, rhs = weights.lemma21_check_m1(params, k, xi)
        passes = int(np.sum(lhs >= rhs))
        path = os.path.join(args.out, "lemma21_report.txt")
        with open(path, "w") as fh:
            fh.write(
                f"lemma 2.1 transport inequality: {passes}/{args.samples} "
                f"samples pass (nu={args.nu})\n"
            )
        print(f"{passes}/{args.samples} passes -> {path}")
        return 0 if passes == args.samples else 2
    # multiplier table
    path = os.path.join(args.out, "multipliers.csv")
    with open(path, "w") as fh:
        fh.write("k,xi,m1,m2,lambda\n")
        for k in (-2.0, -1.0, -0.5, 0.5, 1.0, 2.0):
            for xi in (-4.0, -1.0, 0.0, 1.0, 4.0):
                fh.write(
                    f"{k},{xi},{weights.m1(params, k, xi)},"
                    f"{weights.m2(k, xi)},{weights.lambda_rate(k)}\n"
                )
    print(f"multiplier table -> {path}")
    return 0


def cmd_sweep(args):
    if not args.config:
        raise ValidationError("sweep requires --config")
    doc = load_config(args.config)
    cfg = _runconfig_from_toml(doc, args.seed)
    campaign = doc.get("sweep", {})
    nus = [float(v) for v in campaign.get("nus", [cfg.nu])]
    amplitudes = [float(v) for v in campaign.get("amplitudes", [])]
    if not amplitudes:
        raise ValidationError("sweep config needs [sweep] amplitudes")
    result = sweep.sweep_campaign(
        cfg, nus, amplitudes, args.out,
        threads=args.threads, resume=args.resume,
    )
    n = len(result.verdicts)
    print(f"{n} cells -> {os.path.join(args.out, 'sweep.csv')}")
    return 0


def cmd_norms(args):
    os.makedirs(args.out, exist_ok=True)
    rows = []
    for path in args.checkpoints:
        field, t, nu = checkpoint.load_checkpoint(path)
        params = weights.theorem_preset(nu)
        w = diagnostics.norm_probe(field, t, params)
        rows.append((path, t, nu, w))
    out_path = os.path.join(args.out, "norms_recomputed.csv")
    with open(out_path, "w") as fh:
        fh.write("checkpoint,time,nu,weighted_norm\n")
        for path, t, nu, w in rows:
            fh.write(f"{path},{t!r},{nu!r},{w!r}\n")
    print(f"{len(rows)} checkpoints -> {out_path}")
    return 0


_COMMANDS = {
    "linear": cmd_linear,
    "solve": cmd_solve,
    "toy": cmd_toy,
    "weights": cmd_weights,
    "sweep": cmd_sweep,
    "norms": cmd_norms,
}


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
