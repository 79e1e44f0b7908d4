"""Right-hand side of the averaged Euler evolution in vorticity form.

The evolved state is the vorticity omega = curl(u); the advected quantity
is q = (1 - alpha^2 Lap) omega, so

    d omega / dt = -(1 - alpha^2 Lap)^{-1} J[psi, (1 - alpha^2 Lap) omega] + D(omega),

with psi the streamfunction (Lap psi = omega), D the dissipation
D = delta psi - (-nu Lap)^4 omega, and the band forcing applied as a
post-step amplitude projection rather than a smooth term. alpha = 0
recovers the Euler system.
"""

from dataclasses import dataclass, field

import numpy as np

from .spectral import (
    GridSpec,
    SpectralField,
    WavenumberSet,
    jacobian_coeffs,
    wavenumbers,
)


class ForcingConfigError(ValueError):
    """Forcing band inconsistent with the grid (outside dealias radius)."""


@dataclass
class ForcingSpec:
    """Band forcing: hold the moduli of a set of modes constant in time.

    targets maps an integer mode (m1, m2) to its nonnegative target modulus;
    the map covers +k and -k with equal values (Hermitian symmetry).
    fallback_phases supplies the phase used when a forced mode has zero
    modulus at projection time (antisymmetric under k -> -k); these default
    to the phases drawn for the initial condition.
    """

    k_lo: float = 10.0
    k_hi: float = 10.001
    targets: dict = field(default_factory=dict)
    fallback_phases: dict = field(default_factory=dict)

    def modes(self):
        return sorted(self.targets)


@dataclass(frozen=True)
class PhysicsParams:
    """alpha >= 0 smoothing length (0 = Euler), hyperviscosity nu >= 0,
    large-scale friction delta >= 0, and the forcing specification."""

    alpha: float
    nu: float
    delta: float
    forcing: ForcingSpec | None = None

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError("alpha must be nonnegative")
        if self.nu < 0 or self.delta < 0:
            raise ValueError("nu and delta must be nonnegative")

    @classmethod
    def from_k_alpha(cls, k_alpha, nu, delta, forcing=None):
        """k_alpha = 0 is the Euler sentinel (alpha = 0, i.e. k_alpha = inf)."""
        alpha = 0.0 if k_alpha == 0 else 1.0 / k_alpha
        return cls(alpha, nu, delta, forcing)


@dataclass
class EvolutionState:
    omega: SpectralField
    t: float = 0.0


def forced_modes(grid: GridSpec, k_lo: float, k_hi: float):
    """Integer modes with k_lo <= |k| < k_hi (physical wavenumber).

    On the 2*pi box with the default band [10, 10.001) this is exactly the
    12 modes with |m|^2 = 100.
    """
    s = grid.k_scale
    m_hi = int(np.ceil(k_hi / s)) + 1
    modes = []
    for m1 in range(-m_hi, m_hi + 1):
        for m2 in range(-m_hi, m_hi + 1):
            kk = s * np.hypot(m1, m2)
            if k_lo <= kk < k_hi and (m1, m2) != (0, 0):
                modes.append((m1, m2))
    return sorted(modes)


def band_forcing(grid: GridSpec, k_lo=10.0, k_hi=10.001, amplitude=1.0, seed=0) -> ForcingSpec:
    """ForcingSpec with a common target modulus and seeded fallback phases.

    Phases are drawn once per +/-k pair and stored antisymmetrically so that
    both the projection and the initial condition stay Hermitian.
    """
    modes = forced_modes(grid, k_lo, k_hi)
    if not modes:
        raise ForcingConfigError(f"no modes in forcing band [{k_lo}, {k_hi})")
    for m1, m2 in modes:
        if m1 * m1 + m2 * m2 > grid.k_max**2:
            raise ForcingConfigError(
                f"forced mode ({m1}, {m2}) outside dealias radius k_max = {grid.k_max}"
            )
    rng = np.random.default_rng(seed)
    targets = {}
    phases = {}
    for m in modes:
        targets[m] = float(amplitude)
        neg = (-m[0], -m[1])
        if neg in phases:
            phases[m] = -phases[neg]
        else:
            phases[m] = float(rng.uniform(0.0, 2.0 * np.pi))
    return ForcingSpec(k_lo=k_lo, k_hi=k_hi, targets=targets, fallback_phases=phases)


def _mode_index(grid: GridSpec, m):
    return (m[0] % grid.n, m[1] % grid.n)


def apply_forcing_coeffs(coeffs: np.ndarray, grid: GridSpec, spec: ForcingSpec) -> np.ndarray:
    out = coeffs.copy()
    for m, target in spec.targets.items():
        idx = _mode_index(grid, m)
        c = out[idx]
        mod = abs(c)
        if mod > 0.0:
            out[idx] = c * (target / mod)
        else:
            out[idx] = target * np.exp(1j * spec.fallback_phases[m])
    return out


def apply_forcing(omega: SpectralField, spec: ForcingSpec) -> SpectralField:
    """Reset each forced mode to its target modulus, preserving its phase.

    A forced mode with zero modulus gets the initial-condition phase stored
    in the spec. All other modes are untouched.
    """
    for m in spec.targets:
        if m[0] ** 2 + m[1] ** 2 > omega.grid.k_max**2:
            raise ForcingConfigError(
                f"forced mode {m} outside dealias radius k_max = {omega.grid.k_max}"
            )
    return SpectralField(omega.grid, apply_forcing_coeffs(omega.coeffs, omega.grid, spec))


def dissipation_coeffs(wn: WavenumberSet, w: np.ndarray, nu: float, delta: float) -> np.ndarray:
    """D_hat = delta psi_hat - (nu |k|^2)^4 omega_hat, zero on the mean mode.

    delta psi_hat = -delta omega_hat / |k|^2 damps the largest scales; the
    hyperviscous term damps the smallest. Both are strictly dissipative for
    nu, delta > 0.
    """
    return (-delta * wn.inv_ksq - (nu * wn.ksq) ** 4) * w


def apply_dissipation(omega: SpectralField, params: PhysicsParams) -> SpectralField:
    wn = wavenumbers(omega.grid)
    return SpectralField(omega.grid, dissipation_coeffs(wn, omega.coeffs, params.nu, params.delta))


def rhs_coeffs(wn: WavenumberSet, w: np.ndarray, alpha: float, nu: float, delta: float) -> np.ndarray:
    """Array-level right-hand side (the solver hot path)."""
    psi = -w * wn.inv_ksq
    helm = 1.0 + alpha**2 * wn.ksq
    jac = jacobian_coeffs(wn, psi, helm * w)
    return -jac / helm + dissipation_coeffs(wn, w, nu, delta)


def rhs(state: EvolutionState, params: PhysicsParams) -> SpectralField:
    """d omega/dt excluding the forcing projection; output dealiased."""
    wn = wavenumbers(state.omega.grid)
    return SpectralField(
        state.omega.grid,
        rhs_coeffs(wn, state.omega.coeffs, params.alpha, params.nu, params.delta),
    )


# Spectral envelope of the instability seed (shells out to ~3x the forcing
# scale carry most of it).
_NOISE_SHELL_WIDTH = 15.0


def initial_condition(grid: GridSpec, spec: ForcingSpec, seed=None, noise=0.0) -> EvolutionState:
    """Forced modes at their target moduli with the spec's stored phases
    (Hermitian-symmetric by construction), everything else zero up to an
    optional seeded broadband perturbation.

    The pure forced-shell state is an exact steady solution (psi is
    proportional to omega on a single shell, so the advection term
    vanishes identically): without a perturbation the forced-dissipative
    runs never destabilize. noise sets the perturbation's per-mode
    amplitude relative to the forcing target; the forced modes themselves
    are pinned to the target exactly.

    When seed is given, fresh phases are drawn (and written back into the
    spec as the fallback phases) so the same seed reproduces the same state.
    """
    rng = np.random.default_rng(seed)
    if seed is not None:
        fresh = band_forcing(grid, spec.k_lo, spec.k_hi, seed=seed)
        spec.fallback_phases = {m: fresh.fallback_phases[m] for m in spec.targets}
    coeffs = np.zeros((grid.n, grid.n), dtype=complex)
    if noise:
        wn = wavenumbers(grid)
        raw = np.fft.fft2(rng.standard_normal((grid.n, grid.n))) / grid.n**2
        envelope = np.exp(-wn.msq / (2.0 * _NOISE_SHELL_WIDTH**2))
        rms = float(np.sqrt(np.mean(np.abs(raw[wn.dealias_mask]) ** 2)))
        target_scale = max(spec.targets.values(), default=1.0)
        coeffs = np.where(wn.dealias_mask, raw, 0.0) * envelope * (
            noise * target_scale / rms
        )
        coeffs[0, 0] = 0.0
    for m, target in spec.targets.items():
        coeffs[_mode_index(grid, m)] = target * np.exp(1j * spec.fallback_phases[m])
    return EvolutionState(SpectralField(grid, coeffs), t=0.0)
