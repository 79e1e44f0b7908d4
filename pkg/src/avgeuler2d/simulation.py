"""Run orchestration: schedule, persistence, and the forced-dissipative loop.

A run integrates the vorticity equation between scheduled output times,
applying the forcing projection after every accepted step, and writes

    series.csv                     t, E, Z, E_H1, Z_H2, dt
    spectra/spectrum_t*.csv        shell spectrum snapshots
    checkpoints/checkpoint_t*.bin  resumable binary state
    series.png                     energy/enstrophy report figure

Runs are deterministic: the same config and seed give byte-identical
output, and resuming from a checkpoint reproduces the remainder of the
straight run bit for bit (the controller step is checkpointed).
"""

import os
from dataclasses import dataclass

import numpy as np

from . import plots
from .checkpoint import Checkpoint, CheckpointError, read_checkpoint, write_checkpoint
from .config import RunConfig
from .diagnostics import DiagnosticsRecord, Spectrum, energies, shell_spectrum
from .dynamics import band_forcing, apply_forcing_coeffs, initial_condition, rhs_coeffs
from .spectral import GridSpec, SpectralField, wavenumbers
from .stepper import DivergenceError, StepController, StiffnessError, advance


class NumericalAbortError(RuntimeError):
    """Integration failed; the last state was flushed to abort.bin."""

    def __init__(self, message, checkpoint_path):
        super().__init__(message)
        self.checkpoint_path = checkpoint_path


@dataclass
class RunResult:
    out_dir: str
    records: list
    spectra: list
    final_checkpoint: str


def _schedule(t_start, t_end, intervals):
    """Sorted output times in (t_start, t_end]; multiples of each interval
    computed from t = 0 so resumed and straight runs share the schedule."""
    times = {}
    for kind, iv in intervals.items():
        count = int(np.floor(t_end / iv + 1e-9))
        for i in range(1, count + 1):
            t = i * iv
            key = round(t, 9)
            if t <= t_start + 1e-12 or t > t_end + 1e-12:
                continue
            times.setdefault(key, (t, set()))[1].add(kind)
    if not any(abs(round(t_end, 9) - k) < 1e-12 for k in times) and t_end > t_start:
        times[round(t_end, 9)] = (t_end, set())
    return [times[k] for k in sorted(times)]


def format_float(x):
    return repr(float(x))


def write_series(path, records, mode="w"):
    with open(path, mode) as fh:
        if mode == "w":
            fh.write("t,E,Z,E_H1,Z_H2,dt\n")
        for r in records:
            fh.write(
                ",".join(format_float(v) for v in (r.t, r.E, r.Z, r.E_H1, r.Z_H2, r.dt)) + "\n"
            )


def read_series(path):
    records = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "t,E,Z,E_H1,Z_H2,dt":
            raise ValueError(f"unexpected series header {header!r}")
        for line in fh:
            t, E, Z, E_H1, Z_H2, dt = (float(v) for v in line.split(","))
            records.append(DiagnosticsRecord(t, E, Z, E_H1, Z_H2, dt))
    return records


def spectrum_filename(t):
    return f"spectrum_t{t:012.6f}.csv"


def write_spectrum(path, spectrum: Spectrum):
    with open(path, "w") as fh:
        if spectrum.t is not None:
            fh.write(f"# t = {format_float(spectrum.t)}\n")
        fh.write("k,E_k\n")
        for k, e in zip(spectrum.k, spectrum.e):
            fh.write(f"{int(k)},{format_float(e)}\n")


def read_spectrum(path) -> Spectrum:
    t = None
    ks, es = [], []
    with open(path) as fh:
        line = fh.readline()
        if line.startswith("# t ="):
            t = float(line.partition("=")[2])
            line = fh.readline()
        if line.strip() != "k,E_k":
            raise ValueError(f"unexpected spectrum header {line!r}")
        for row in fh:
            k, e = row.split(",")
            ks.append(int(k))
            es.append(float(e))
    return Spectrum(np.array(ks), np.array(es), t=t)


def load_spectra(run_dir):
    sdir = os.path.join(run_dir, "spectra")
    names = sorted(os.listdir(sdir)) if os.path.isdir(sdir) else []
    return [read_spectrum(os.path.join(sdir, n)) for n in names if n.endswith(".csv")]


def run_simulation(cfg: RunConfig, resume_path=None, figures=True) -> RunResult:
    """Integrate from the initial condition (or a checkpoint) to t_end."""
    cfg.validate()
    grid = GridSpec(n=cfg.n, domain_length=cfg.domain_length)
    wn = wavenumbers(grid)
    forcing = band_forcing(grid, cfg.k_lo, cfg.k_hi, cfg.amplitude, seed=cfg.seed)
    nu = cfg.resolved_nu()
    alpha = cfg.alpha

    if resume_path is not None:
        ck = read_checkpoint(resume_path)
        if ck.grid != grid:
            raise CheckpointError(f"checkpoint grid {ck.grid} does not match config grid {grid}")
        if (ck.alpha, ck.nu, ck.delta) != (alpha, nu, cfg.delta):
            raise CheckpointError("checkpoint physics parameters do not match config")
        t = ck.t
        w = ck.coeffs.copy()
        dt0 = ck.dt
    else:
        t = 0.0
        w = initial_condition(grid, forcing, seed=cfg.seed, noise=cfg.noise).omega.coeffs
        dt0 = cfg.dt_init

    out = cfg.out_dir
    os.makedirs(out, exist_ok=True)
    os.makedirs(os.path.join(out, "spectra"), exist_ok=True)
    os.makedirs(os.path.join(out, "checkpoints"), exist_ok=True)
    series_path = os.path.join(out, "series.csv")

    controller = StepController(rtol=cfg.rtol, atol=cfg.atol, dt=dt0)

    def rhs_fn(_t, y):
        return rhs_coeffs(wn, y, alpha, nu, cfg.delta)

    def post_accept(_t, y):
        return apply_forcing_coeffs(y, grid, forcing)

    def record(t, w, dt_last):
        e = energies(SpectralField(grid, w), alpha)
        return DiagnosticsRecord(t, e.E, e.Z, e.E_H1, e.Z_H2, dt_last)

    def flush_checkpoint(path, t, w, dt):
        write_checkpoint(
            path,
            Checkpoint(grid, alpha, nu, cfg.delta, cfg.k_lo, cfg.k_hi, cfg.amplitude, t, dt, w),
        )

    records = [record(t, w, 0.0)]
    write_series(series_path, records)
    spectra = [shell_spectrum(SpectralField(grid, w), t=t)]
    write_spectrum(os.path.join(out, "spectra", spectrum_filename(t)), spectra[0])

    final_ck = os.path.join(out, "checkpoints", "final.bin")
    events = _schedule(t, cfg.t_end, {
        "series": cfg.series_interval,
        "spectrum": cfg.spectrum_interval,
        "checkpoint": cfg.checkpoint_interval,
    })

    for t_next, kinds in events:
        try:
            w, log = advance(t, w, rhs_fn, controller, t_next, post_accept=post_accept)
        except (StiffnessError, DivergenceError) as exc:
            abort_path = os.path.join(out, "checkpoints", "abort.bin")
            t_last = exc.t if isinstance(exc, StiffnessError) else t
            w_last = exc.y if isinstance(exc, StiffnessError) else w
            flush_checkpoint(abort_path, t_last, w_last, controller.dt)
            raise NumericalAbortError(str(exc), abort_path) from exc
        t = t_next
        dt_last = next((o.dt_used for o in reversed(log) if o.accepted), 0.0)
        if "series" in kinds or not kinds:
            row = record(t, w, dt_last)
            records.append(row)
            write_series(series_path, [row], mode="a")
        if "spectrum" in kinds:
            spec = shell_spectrum(SpectralField(grid, w), t=t)
            spectra.append(spec)
            write_spectrum(os.path.join(out, "spectra", spectrum_filename(t)), spec)
        if "checkpoint" in kinds:
            flush_checkpoint(
                os.path.join(out, "checkpoints", f"checkpoint_t{t:012.6f}.bin"),
                t, w, controller.dt,
            )

    flush_checkpoint(final_ck, t, w, controller.dt)
    if figures:
        plots.plot_series(records, os.path.join(out, "series.png"))
    return RunResult(out, records, spectra, final_ck)
