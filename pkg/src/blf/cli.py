"""Command-line front end.

Subcommands: ``simulate`` (reference processes to CSV), ``fit`` (model a
single-column CSV series), ``benchmark`` (replicated simulation study) and
``version``.  All outputs are plot-ready CSV matrices or key-value text;
nothing is read from the environment.

Spectrogram CSV layout: the first row is the frequency grid; each later
row holds the time index followed by one cell per frequency, the natural
log of the spectral density (posterior_sd.csv cells are the standard
deviation of the log density, unlogged).  All numeric cells carry 17
significant digits and round-trip exactly.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bench import run_benchmark, summarize
from .dlm import DiscountPair, NIGPrior, default_prior
from .io import (
    fmt,
    read_series_csv,
    write_fit_csv,
    write_report,
    write_scree_csv,
    write_series_csv,
    write_spectrogram_csv,
    write_truth_csv,
)
from .selection import SearchGrid, fit_blfdyn, fit_blffix, fit_fixed
from .simulate import gen_piecewise, gen_tvar2, gen_tvar6, gen_tvvar, true_spectrum
from .spectrum import default_freq_grid, spectrum_posterior, tvar_spectrum
from .tvar import path_sampler

PROCESSES = ("tvar2", "tvar6", "piecewise", "tvvar")


def _grid_from_args(args) -> SearchGrid:
    lo, hi, step = args.grid_min, args.grid_max, args.grid_step
    if not (0 < lo <= hi <= 1 and step > 0):
        raise ValueError("grid bounds must satisfy 0 < min <= max <= 1 with step > 0")
    vals = tuple(np.round(np.arange(lo, hi + step / 2, step), 10))
    return SearchGrid(gammas=vals, deltas=vals, p_max=args.p_max)


def _prior_from_args(args, x) -> NIGPrior:
    base = default_prior(x)
    kappa0 = base.kappa0 if args.prior_kappa0 is None else args.prior_kappa0
    return NIGPrior(mu0=args.prior_mu0, c0=args.prior_c0, v0=args.prior_v0,
                    kappa0=kappa0)


def _add_grid_args(p) -> None:
    p.add_argument("--grid-min", type=float, default=0.80,
                   help="smallest discount value in the search grid")
    p.add_argument("--grid-max", type=float, default=1.00,
                   help="largest discount value in the search grid")
    p.add_argument("--grid-step", type=float, default=0.02,
                   help="spacing of the discount grid")
    p.add_argument("--p-max", type=int, default=15,
                   help="maximum lattice order considered")
    p.add_argument("--tau", type=float, default=0.5,
                   help="percent-change threshold for the order rule")


def _add_prior_args(p) -> None:
    p.add_argument("--prior-mu0", type=float, default=0.0,
                   help="prior coefficient mean")
    p.add_argument("--prior-c0", type=float, default=1.0,
                   help="prior coefficient scale")
    p.add_argument("--prior-v0", type=float, default=1.0,
                   help="prior degrees of freedom")
    p.add_argument("--prior-kappa0", type=float, default=None,
                   help="prior precision scale (default: sample variance of "
                        "the initial signal segment)")


def cmd_simulate(args) -> int:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if args.process == "tvar2":
        proc = gen_tvar2(args.T, seed=args.seed)
    elif args.process == "tvar6":
        proc = gen_tvar6(args.T, seed=args.seed)
    elif args.process == "piecewise":
        proc = gen_piecewise(args.T, seed=args.seed)
    else:
        t = np.arange(1, args.T + 1)
        variance = np.exp(np.sin(2.0 * np.pi * t / args.T))
        coeffs = np.full((args.T, 1), 0.9)
        proc = gen_tvvar(args.T, args.seed, variance, coeffs)

    write_series_csv(out / "series.csv", proc.x)
    write_truth_csv(out / "truth.csv", proc.true_coeffs, proc.true_sigma2)
    freqs = default_freq_grid(args.freq_step)
    write_spectrogram_csv(out / "truth_spectrogram.csv", true_spectrum(proc, freqs))
    print(f"wrote series.csv, truth.csv, truth_spectrogram.csv to {out}")
    return 0


def cmd_fit(args) -> int:
    x = read_series_csv(args.input)
    if len(x) < args.p_max + 2:
        raise ValueError(
            f"series of length {len(x)} is too short for p_max={args.p_max}"
        )
    grid = _grid_from_args(args)
    prior = _prior_from_args(args, x)

    if args.method == "blfdyn":
        report = fit_blfdyn(x, grid=grid, prior=prior, tau=args.tau)
    elif args.method == "blffix":
        report = fit_blffix(x, grid=grid, prior=prior, tau=args.tau)
    else:
        if args.order is None:
            raise ValueError("--method fixed requires --order")
        report = fit_fixed(x, DiscountPair(args.gamma, args.delta), args.order,
                           prior=prior)

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_report(out / "report.txt", report, args.tau)
    write_fit_csv(out / "coefficients.csv", out / "variance.csv", report.fit)
    write_scree_csv(out / "scree.csv", report)
    freqs = default_freq_grid(args.freq_step)
    write_spectrogram_csv(out / "spectrogram.csv", tvar_spectrum(report.fit, freqs))

    if args.draws > 0:
        rng = np.random.default_rng(args.seed)
        draw = path_sampler(report.run, report.chosen_order)
        mean, sd = spectrum_posterior(draw, args.draws, freqs, rng)
        write_spectrogram_csv(out / "posterior_mean.csv", mean)
        write_spectrogram_csv(out / "posterior_sd.csv", sd, log_cells=False)

    print(f"method={report.method} chosen_order={report.chosen_order} "
          f"saturated={report.saturated}")
    print(f"wrote fit outputs to {out}")
    return 0


def cmd_benchmark(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    grid = _grid_from_args(args)
    prior = None
    if args.prior_kappa0 is not None:
        prior = NIGPrior(mu0=args.prior_mu0, c0=args.prior_c0,
                         v0=args.prior_v0, kappa0=args.prior_kappa0)
    records = run_benchmark(
        args.process, args.n, methods, T=args.T, base_seed=args.seed,
        grid=grid, prior=prior, tau=args.tau, freq_step=args.freq_step,
        workers=args.workers,
    )

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "replicates.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["replicate", "seed", "method", "chosen_order", "ase", "status"])
        for r in records:
            w.writerow([
                r.replicate, r.seed, r.method,
                "" if r.chosen_order is None else r.chosen_order,
                "" if r.ase is None else fmt(r.ase),
                "ok" if r.ok else f"failed: {r.error}",
            ])
    summary = summarize(records)
    lines = []
    for method, stats in summary.items():
        lines.append(f"method: {method}")
        lines.append(f"  n_ok: {stats['n_ok']}")
        lines.append(f"  n_failed: {stats['n_failed']}")
        mean = stats["mean_ase"]
        sd = stats["sd_ase"]
        lines.append(f"  mean_ase: {'' if mean is None else fmt(mean)}")
        lines.append(f"  sd_ase: {'' if sd is None else fmt(sd)}")
        lines.append("  orders: " + ",".join(f"{k}:{v}" for k, v in stats["orders"].items()))
    (out / "summary.txt").write_text("\n".join(lines) + "\n")
    print("\n".join(lines))

    if records and all(not r.ok for r in records):
        print("all replicates failed", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blf",
        description="Bayesian lattice filter for time-varying autoregression "
                    "and time-frequency analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="generate a reference process")
    p_sim.add_argument("process", choices=PROCESSES)
    p_sim.add_argument("--T", type=int, default=1024, help="series length")
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--freq-step", type=float, default=0.005)
    p_sim.add_argument("--out-dir", default=".")
    p_sim.set_defaults(func=cmd_simulate)

    p_fit = sub.add_parser("fit", help="fit a time-varying AR model to a CSV series")
    p_fit.add_argument("input", help="single-column CSV (optional header)")
    p_fit.add_argument("--method", choices=("blfdyn", "blffix", "fixed"),
                       default="blfdyn")
    p_fit.add_argument("--gamma", type=float, default=1.0,
                       help="coefficient discount (fixed method)")
    p_fit.add_argument("--delta", type=float, default=1.0,
                       help="variance discount (fixed method)")
    p_fit.add_argument("--order", type=int, default=None,
                       help="model order (fixed method)")
    _add_grid_args(p_fit)
    _add_prior_args(p_fit)
    p_fit.add_argument("--freq-step", type=float, default=0.005)
    p_fit.add_argument("--draws", type=int, default=0,
                       help="posterior draws for mean/sd spectral surfaces")
    p_fit.add_argument("--seed", type=int, default=0)
    p_fit.add_argument("--out-dir", default=".")
    p_fit.set_defaults(func=cmd_fit)

    p_bench = sub.add_parser("benchmark", help="replicated simulation study")
    p_bench.add_argument("process", choices=("tvar2", "tvar6", "piecewise"))
    p_bench.add_argument("--n", type=int, default=20, help="replicate count")
    p_bench.add_argument("--methods", default="blfdyn,blffix",
                         help="comma-separated: blfdyn, blffix")
    p_bench.add_argument("--T", type=int, default=1024)
    p_bench.add_argument("--seed", type=int, default=0,
                         help="base seed; replicate r uses seed+r")
    _add_grid_args(p_bench)
    _add_prior_args(p_bench)
    p_bench.add_argument("--freq-step", type=float, default=0.005)
    p_bench.add_argument("--workers", type=int, default=1,
                         help="process pool size for replicates")
    p_bench.add_argument("--out-dir", default=".")
    p_bench.set_defaults(func=cmd_benchmark)

    p_ver = sub.add_parser("version", help="print version")
    p_ver.set_defaults(func=lambda args: print(__version__) or 0)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args) or 0
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
