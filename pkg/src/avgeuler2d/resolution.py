"""Resolution-sensitivity study: rerun the same physics on reduced grids.

The forcing, hyperviscosity and friction of the base run are held exactly
fixed (nu is resolved against the base grid before scaling), so the only
change is the dealias radius. The per-shell deviation of a reduced run's
time-averaged spectrum from the full-resolution one measures the degree of
non-resolution.
"""

import os
from dataclasses import dataclass, replace

import numpy as np

from .config import ConfigError, RunConfig
from .diagnostics import Spectrum, time_averaged_spectrum
from .simulation import load_spectra, run_simulation, write_spectrum


@dataclass
class ResolutionReport:
    fractions: list
    n_by_fraction: dict
    k_max_by_fraction: dict
    spectra: dict          # fraction -> time-averaged Spectrum
    deviation: dict        # fraction -> per-shell |log10 E_frac/E_full|


def _reduced_n(n, fraction):
    m = int(round(n * fraction))
    return m if m % 2 == 0 else m + 1


def compare_resolution(cfg: RunConfig, fractions, t_lo=5.0, t_hi=None, out_dir=None,
                       figures=True) -> ResolutionReport:
    """Run cfg at full resolution and at fraction*n for each fraction.

    Returns time-averaged spectra per resolution plus each reduced run's
    per-shell deviation from the full run (common shells only).
    """
    for f in fractions:
        if not (0.0 < f <= 1.0):
            raise ConfigError(f"resolution fraction {f} outside (0, 1]")
    if t_hi is None:
        t_hi = cfg.t_end
    out_dir = out_dir or cfg.out_dir
    nu = cfg.resolved_nu()  # pin dissipation to the base grid

    spectra = {}
    n_by, kmax_by = {}, {}
    for f in sorted(set([1.0] + list(fractions)), reverse=True):
        n_f = cfg.n if f == 1.0 else _reduced_n(cfg.n, f)
        sub = replace(cfg, n=n_f, nu=nu, out_dir=os.path.join(out_dir, f"fraction_{f:g}"))
        result = run_simulation(sub, figures=figures)
        spectra[f] = time_averaged_spectrum(result.spectra, t_lo, t_hi)
        n_by[f] = n_f
        kmax_by[f] = sub.k_max
        write_spectrum(os.path.join(sub.out_dir, "spectrum_avg.csv"), spectra[f])

    full = spectra[1.0]
    deviation = {}
    for f in fractions:
        spec = spectra[f]
        m = spec.k.size
        ratio = np.full(m, np.nan)
        ok = (spec.e > 0) & (full.e[:m] > 0)
        ratio[ok] = np.abs(np.log10(spec.e[ok] / full.e[:m][ok]))
        deviation[f] = Spectrum(spec.k.copy(), ratio)
    return ResolutionReport(list(fractions), n_by, kmax_by, spectra, deviation)


def band_deviation(report: ResolutionReport, fraction, k_lo, k_hi):
    """Mean per-shell deviation of one reduced run over [k_lo, k_hi]."""
    dev = report.deviation[fraction]
    sel = (dev.k >= k_lo) & (dev.k <= k_hi) & np.isfinite(dev.e)
    if not np.any(sel):
        raise ValueError(f"no usable shells in [{k_lo}, {k_hi}]")
    return float(np.mean(dev.e[sel]))


def write_deviation_csv(path, report: ResolutionReport):
    fracs = report.fractions
    with open(path, "w") as fh:
        fh.write("k," + ",".join(f"dev_{f:g}" for f in fracs) + "\n")
        kmin = min(report.deviation[f].k.size for f in fracs)
        for i in range(kmin):
            row = [str(int(report.deviation[fracs[0]].k[i]))]
            row += [repr(float(report.deviation[f].e[i])) for f in fracs]
            fh.write(",".join(row) + "\n")
