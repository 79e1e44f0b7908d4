"""Conserved quantities, shell spectra, slope fits, and the
dimensional-analysis slope predictor.

Energies are evaluated spectrally with the Parseval convention
int f^2 dx = A * sum_k |f_hat(k)|^2, A the domain area:

    E     = A/2 sum |u_hat|^2
    E_H1  = A/2 sum (1 + alpha^2 |k|^2)   |u_hat|^2
    Z     = A/2 sum |omega_hat|^2
    Z_H2  = A/2 sum (1 + alpha^2 |k|^2)^2 |omega_hat|^2

E_H1 and Z_H2 are the two invariants of the inviscid unforced system;
E and Z are the usual kinetic energy and enstrophy.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .spectral import SpectralField, wavenumbers

ENSTROPHY_CASCADE = "enstrophy-cascade"
ENERGY_CASCADE = "energy-cascade"
ALPHA_MUCH_SMALLER = "alpha_much_smaller"
ALPHA_MUCH_LARGER = "alpha_much_larger"
ALPHA_COMPARABLE = "alpha_comparable"

# Exponent a in E(k) ~ (dissipation rate)^a k^b, both subranges.
SCALING_EXPONENT_A = Fraction(2, 3)


class FitError(ValueError):
    """Not enough usable shells for a log-log slope fit."""


class Energies(NamedTuple):
    E: float
    Z: float
    E_H1: float
    Z_H2: float


@dataclass
class DiagnosticsRecord:
    """One time-stamped row of the series output."""

    t: float
    E: float
    Z: float
    E_H1: float
    Z_H2: float
    dt: float


@dataclass
class Spectrum:
    """Shell-averaged kinetic energy: shells k = 1..k_max, E(k) the sum of
    A/2 |u_hat|^2 over modes whose |k| rounds to the shell."""

    k: np.ndarray
    e: np.ndarray
    t: float | None = None


@dataclass(frozen=True)
class SlopePrediction:
    """Dimensional-analysis exponent b in E(k) ~ rate^a k^b.

    For the alpha-comparable regime the paper only brackets the slope, so
    exponent is an (upper, lower) pair of rationals instead of a point.
    """

    subrange: str
    regime: str
    exponent: Fraction | tuple


def energies(omega: SpectralField, alpha: float) -> Energies:
    wn = wavenumbers(omega.grid)
    area = omega.grid.domain_length**2
    w2 = np.abs(omega.coeffs) ** 2
    u2 = w2 * wn.inv_ksq  # |u_hat|^2 = |omega_hat|^2 / |k|^2, zero mean mode
    helm = 1.0 + alpha**2 * wn.ksq
    E = 0.5 * area * float(np.sum(u2))
    E_H1 = 0.5 * area * float(np.sum(helm * u2))
    Z = 0.5 * area * float(np.sum(w2))
    Z_H2 = 0.5 * area * float(np.sum(helm**2 * w2))
    return Energies(E, Z, E_H1, Z_H2)


def shell_spectrum(omega: SpectralField, t=None) -> Spectrum:
    """One-dimensional energy spectrum E(k), shells by round(|k|)."""
    wn = wavenumbers(omega.grid)
    area = omega.grid.domain_length**2
    u2 = 0.5 * area * np.abs(omega.coeffs) ** 2 * wn.inv_ksq
    kmax = omega.grid.k_max
    e = np.bincount(wn.shell.ravel(), weights=u2.ravel(), minlength=kmax + 1)[1 : kmax + 1]
    return Spectrum(np.arange(1, kmax + 1), e, t=t)


def time_averaged_spectrum(snapshots, t_lo: float, t_hi: float) -> Spectrum:
    """Arithmetic per-shell mean over snapshots with t in [t_lo, t_hi]."""
    window = [s for s in snapshots if s.t is not None and t_lo <= s.t <= t_hi]
    if not window:
        raise ValueError(f"no spectrum snapshots in window [{t_lo}, {t_hi}]")
    k = window[0].k
    for s in window[1:]:
        if not np.array_equal(s.k, k):
            raise ValueError("snapshots have mismatched shell grids")
    e = np.mean([s.e for s in window], axis=0)
    return Spectrum(k.copy(), e, t=0.5 * (t_lo + t_hi))


def fit_slope(spectrum: Spectrum, k_lo: float, k_hi: float):
    """Least-squares line through (log k, log E(k)) over shells in [k_lo, k_hi].

    Empty (nonpositive) shells are excluded. Returns
    (slope, intercept, rms residual, shells used).
    """
    if k_lo >= k_hi:
        raise ValueError("k_lo must be below k_hi")
    sel = (spectrum.k >= k_lo) & (spectrum.k <= k_hi) & (spectrum.e > 0)
    kk = spectrum.k[sel].astype(float)
    if kk.size < 3:
        raise FitError(f"only {kk.size} usable shells in [{k_lo}, {k_hi}]")
    x = np.log(kk)
    y = np.log(spectrum.e[sel])
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return float(slope), float(intercept), resid, spectrum.k[sel]


def dimensional_slope(subrange: str, regime: str) -> Fraction:
    """Solve the subrange's dimension equation for b with rational arithmetic.

    Matching L^3 T^-2 = T^(-3a) (1 + alpha^2 L^-2)^p L^q in the given limit:
    the T balance fixes a = 2/3; the Helmholtz factor contributes L^0 when
    alpha << L and L^(-2p) (alpha constant) when alpha >> L.
    """
    a = Fraction(2, 3)
    assert Fraction(-2) == -3 * a  # time balance
    if subrange == ENSTROPHY_CASCADE:
        p = 2 * a  # (1 + alpha^2 L^-2)^{2a} L^{-b}
        helm_L = Fraction(0) if regime == ALPHA_MUCH_SMALLER else -2 * p
        return helm_L - 3
    if subrange == ENERGY_CASCADE:
        p = a  # (1 + alpha^2 L^-2)^a L^{2a - b}
        helm_L = Fraction(0) if regime == ALPHA_MUCH_SMALLER else -2 * p
        return helm_L + 2 * a - 3
    raise ValueError(f"unknown subrange {subrange!r}")


def predicted_slope(subrange: str, regime: str) -> SlopePrediction:
    """The four dimensional-analysis exponents:

        (enstrophy, alpha << L) -> -3      (energy, alpha << L) -> -5/3
        (enstrophy, alpha >> L) -> -17/3   (energy, alpha >> L) -> -3

    For alpha comparable to L only the bracketing interval is returned.
    """
    if subrange not in (ENSTROPHY_CASCADE, ENERGY_CASCADE):
        raise ValueError(f"unknown subrange {subrange!r}")
    if regime == ALPHA_COMPARABLE:
        lo = dimensional_slope(subrange, ALPHA_MUCH_LARGER)
        hi = dimensional_slope(subrange, ALPHA_MUCH_SMALLER)
        return SlopePrediction(subrange, regime, (hi, lo))
    if regime not in (ALPHA_MUCH_SMALLER, ALPHA_MUCH_LARGER):
        raise ValueError(f"unknown regime {regime!r}")
    return SlopePrediction(subrange, regime, dimensional_slope(subrange, regime))
