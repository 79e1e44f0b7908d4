"""Command-line interface.

Subcommands: run, spectrum, slope, compare-resolution, vortex.
Exit codes: 0 success, 2 configuration error, 3 numerical abort.
"""

import argparse
import os
import sys

import numpy as np

from . import plots
from .checkpoint import CheckpointError
from .config import ConfigError, RunConfig, config_text, load_config, with_overrides
from .diagnostics import FitError, fit_slope, time_averaged_spectrum
from .resolution import band_deviation, compare_resolution, write_deviation_csv
from .simulation import (
    NumericalAbortError,
    load_spectra,
    read_spectrum,
    run_simulation,
    write_spectrum,
)
from .stepper import StepController
from .vortex import VortexSystem, blob_hamiltonian, evolve, invariants

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _load_cfg(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    return with_overrides(cfg, out_dir=args.out, seed=args.seed)


def cmd_run(args):
    cfg = _load_cfg(args)
    result = run_simulation(cfg, resume_path=args.resume)
    with open(os.path.join(cfg.out_dir, "config.txt"), "w") as fh:
        fh.write(config_text(cfg))
    last = result.records[-1]
    print(f"run complete: t = {last.t:g}, E = {last.E:.6g}, Z = {last.Z:.6g}")
    print(f"series: {os.path.join(cfg.out_dir, 'series.csv')}")
    print(f"final checkpoint: {result.final_checkpoint}")
    return EXIT_OK


def cmd_spectrum(args):
    snapshots = load_spectra(args.run_dir)
    avg = time_averaged_spectrum(snapshots, args.t_lo, args.t_hi)
    csv_path = os.path.join(args.run_dir, "spectrum_avg.csv")
    write_spectrum(csv_path, avg)
    png_path = os.path.join(args.run_dir, "spectrum_avg.png")
    plots.plot_spectrum(avg, png_path)
    print(f"averaged {sum(1 for s in snapshots if args.t_lo <= (s.t or 0) <= args.t_hi)} "
          f"snapshots over [{args.t_lo:g}, {args.t_hi:g}]")
    print(f"spectrum: {csv_path}")
    print(f"figure: {png_path}")
    return EXIT_OK


def cmd_slope(args):
    spec = read_spectrum(args.spectrum_file)
    slope, intercept, resid, shells = fit_slope(spec, args.k_lo, args.k_hi)
    print(f"slope b = {slope:.6g}")
    print(f"intercept = {intercept:.6g}")
    print(f"rms residual = {resid:.6g}")
    print(f"shells used: {', '.join(str(int(k)) for k in shells)}")
    return EXIT_OK


def cmd_compare_resolution(args):
    cfg = _load_cfg(args)
    fractions = [float(f) for f in args.fractions.split(",") if f]
    report = compare_resolution(cfg, fractions, t_lo=args.t_lo, t_hi=args.t_hi,
                                out_dir=cfg.out_dir)
    csv_path = os.path.join(cfg.out_dir, "deviation.csv")
    write_deviation_csv(csv_path, report)
    png_path = os.path.join(cfg.out_dir, "resolution.png")
    plots.plot_resolution_comparison(
        {"": {f"{f:g}": report.spectra[f] for f in sorted(report.spectra, reverse=True)}},
        png_path,
    )
    k_hi = min(report.k_max_by_fraction[f] for f in fractions) // 2
    k_lo = 14 if k_hi > 14 else 1  # small-scale band, whole range on tiny grids
    for f in fractions:
        print(f"fraction {f:g}: n = {report.n_by_fraction[f]}, "
              f"k_max = {report.k_max_by_fraction[f]}, "
              f"mean deviation (shells {k_lo}..{k_hi}) = "
              f"{band_deviation(report, f, k_lo, k_hi):.4g}")
    print(f"deviation table: {csv_path}")
    print(f"figure: {png_path}")
    return EXIT_OK


def _parse_vortex_args(args):
    try:
        positions = np.array(
            [[float(v) for v in pt.split(",")] for pt in args.positions.split(";")]
        )
        circulations = np.array([float(v) for v in args.circulations.split(",")])
    except ValueError as exc:
        raise ConfigError(f"bad vortex geometry: {exc}") from exc
    if positions.ndim != 2 or positions.shape[1] != 2:
        raise ConfigError("positions must be 'x1,y1;x2,y2;...'")
    if circulations.size != positions.shape[0]:
        raise ConfigError("one circulation per position required")
    if args.alpha < 0:
        raise ConfigError("alpha must be nonnegative")
    return VortexSystem(positions, circulations, args.alpha)


def cmd_vortex(args):
    system = _parse_vortex_args(args)
    controller = StepController(rtol=args.rtol, atol=args.atol, dt=1e-3)
    c0, l0, a0 = invariants(system)
    h0 = blob_hamiltonian(system)
    final, trajectory = evolve(system, args.t_end, controller)
    c1, l1, a1 = invariants(final)
    h1 = blob_hamiltonian(final)

    os.makedirs(args.out, exist_ok=True)
    traj_path = os.path.join(args.out, "trajectory.csv")
    n = system.circulations.size
    with open(traj_path, "w") as fh:
        fh.write("t," + ",".join(f"x{i+1},y{i+1}" for i in range(n)) + "\n")
        for t, pos in trajectory:
            fh.write(repr(float(t)) + "," + ",".join(repr(float(v)) for v in pos.ravel()) + "\n")
    png_path = os.path.join(args.out, "trajectory.png")
    plots.plot_trajectory(trajectory, png_path)

    def drift(a, b):
        scale = max(abs(a), abs(b), 1e-300)
        return abs(b - a) / scale

    report_path = os.path.join(args.out, "invariants.csv")
    rows = [
        ("total_circulation", c0, c1, drift(c0, c1)),
        ("linear_impulse_x", l0[0], l1[0], drift(l0[0], l1[0])),
        ("linear_impulse_y", l0[1], l1[1], drift(l0[1], l1[1])),
        ("angular_impulse", a0, a1, drift(a0, a1)),
        ("hamiltonian", h0, h1, drift(h0, h1)),
    ]
    with open(report_path, "w") as fh:
        fh.write("invariant,initial,final,relative_drift\n")
        for name, v0, v1, d in rows:
            fh.write(f"{name},{repr(float(v0))},{repr(float(v1))},{repr(float(d))}\n")
    for name, v0, v1, d in rows:
        print(f"{name}: {v0:.8g} -> {v1:.8g} (drift {d:.3g})")
    print(f"trajectory: {traj_path}")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(
        prog="avgeuler2d",
        description="2D averaged-Euler (Euler-alpha) turbulence simulator",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--config", metavar="PATH", help="flat key-value config file")
        sp.add_argument("--out", metavar="DIR", help="override output.dir")
        sp.add_argument("--seed", type=int, metavar="N", help="override run.seed")

    sp = sub.add_parser("run", help="forced-dissipative simulation")
    add_common(sp)
    sp.add_argument("--resume", metavar="PATH", help="checkpoint to resume from")
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("spectrum", help="time-averaged spectrum of a finished run")
    sp.add_argument("run_dir")
    sp.add_argument("--t-lo", type=float, default=5.0)
    sp.add_argument("--t-hi", type=float, default=20.0)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("slope", help="log-log slope fit of a spectrum file")
    sp.add_argument("spectrum_file")
    sp.add_argument("--k-lo", type=float, required=True)
    sp.add_argument("--k-hi", type=float, required=True)
    sp.set_defaults(func=cmd_slope)

    sp = sub.add_parser("compare-resolution", help="same physics at reduced resolutions")
    add_common(sp)
    sp.add_argument("--fractions", default="0.75,0.5", help="comma-separated fractions of n")
    sp.add_argument("--t-lo", type=float, default=5.0)
    sp.add_argument("--t-hi", type=float, default=None)
    sp.set_defaults(func=cmd_compare_resolution)

    sp = sub.add_parser("vortex", help="Lagrangian vortex-blob integration")
    sp.add_argument("--positions", default="2.6,3.14;3.6,3.14",
                    help="semicolon-separated x,y pairs")
    sp.add_argument("--circulations", default="1.0,1.0")
    sp.add_argument("--alpha", type=float, default=0.0, help="blob scale, 0 = point vortices")
    sp.add_argument("--t-end", type=float, default=10.0)
    sp.add_argument("--rtol", type=float, default=1e-8)
    sp.add_argument("--atol", type=float, default=1e-10)
    sp.add_argument("--out", default="vortex_out")
    sp.set_defaults(func=cmd_vortex)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, CheckpointError, FitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalAbortError as exc:
        print(f"numerical abort: {exc}; state flushed to {exc.checkpoint_path}",
              file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
