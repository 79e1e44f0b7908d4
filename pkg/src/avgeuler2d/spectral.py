"""Periodic-domain spectral kernel.

Fourier transforms on an N x N periodic grid, circular dealiasing,
differential operators, Poisson / inverse-Helmholtz solves, and the
dealiased pseudospectral Jacobian that all of the dynamics is built on.

Coefficients are stored as mode amplitudes: the forward transform divides
by n^2, so a field f(x) = sum_k c_k exp(i k.x) has coeffs[k] = c_k and the
k = 0 coefficient equals the spatial mean.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.fft as sfft

TWO_PI = 2.0 * np.pi

# Tolerance on the relative imaginary residual when a spectral field is
# brought back to physical space.
HERMITIAN_TOL = 1e-10


class GridMismatchError(ValueError):
    """Operands live on different grids or have the wrong shape."""


class SymmetryError(ValueError):
    """Spectral coefficients are not Hermitian-symmetric (field not real)."""


@dataclass(frozen=True)
class GridSpec:
    """Square periodic grid.

    n : grid points per direction (positive even integer)
    domain_length : physical side length (default 2*pi)
    k_max : circular dealiasing radius in integer lattice units;
            defaults to floor(n/3) (two-thirds rule), so n = 512 gives
            k_max = 170 and n = 256 gives k_max = 85.
    """

    n: int
    domain_length: float = TWO_PI
    k_max: int = field(default=0)

    def __post_init__(self):
        if self.n <= 0 or self.n % 2 != 0:
            raise ValueError(f"grid n must be a positive even integer, got {self.n}")
        if self.domain_length <= 0:
            raise ValueError("domain_length must be positive")
        if self.k_max == 0:
            object.__setattr__(self, "k_max", self.n // 3)
        if self.k_max <= 0 or self.k_max > self.n // 2:
            raise ValueError(f"k_max {self.k_max} outside (0, n/2]")

    @property
    def dx(self):
        return self.domain_length / self.n

    @property
    def k_scale(self):
        """Physical wavenumber per integer lattice unit (1 on the 2*pi box)."""
        return TWO_PI / self.domain_length


class WavenumberSet:
    """Precomputed wavenumber lattice for one grid.

    Attributes are full n x n arrays in FFT layout: integer lattice
    components m1, m2, physical k1, k2, |k|^2, its safe inverse (zero at
    k = 0), the circular dealias mask |m| <= k_max, and the spectrum shell
    index round(|m|).
    """

    def __init__(self, grid: GridSpec):
        self.grid = grid
        n = grid.n
        m = np.fft.fftfreq(n, d=1.0 / n).astype(np.int64)
        self.m1 = m[:, None] * np.ones(n, dtype=np.int64)[None, :]
        self.m2 = np.ones(n, dtype=np.int64)[:, None] * m[None, :]
        msq = self.m1**2 + self.m2**2
        self.msq = msq
        s = grid.k_scale
        self.k1 = s * self.m1.astype(float)
        self.k2 = s * self.m2.astype(float)
        self.ksq = s * s * msq.astype(float)
        inv = np.zeros_like(self.ksq)
        nz = self.ksq > 0
        inv[nz] = 1.0 / self.ksq[nz]
        self.inv_ksq = inv
        self.dealias_mask = msq <= grid.k_max**2
        self.shell = np.rint(np.sqrt(msq.astype(float))).astype(np.int64)


@lru_cache(maxsize=32)
def wavenumbers(grid: GridSpec) -> WavenumberSet:
    return WavenumberSet(grid)


@dataclass
class SpectralField:
    """Complex Fourier coefficients of a real scalar field on a GridSpec."""

    grid: GridSpec
    coeffs: np.ndarray

    def copy(self):
        return SpectralField(self.grid, self.coeffs.copy())


def _check_same_grid(a: SpectralField, b: SpectralField):
    if a.grid != b.grid:
        raise GridMismatchError(f"grid mismatch: {a.grid} vs {b.grid}")


def forward_transform(physical_values: np.ndarray, grid: GridSpec) -> SpectralField:
    """Real n x n samples -> normalized spectral coefficients."""
    phys = np.asarray(physical_values, dtype=float)
    if phys.shape != (grid.n, grid.n):
        raise GridMismatchError(
            f"physical array shape {phys.shape} does not match grid ({grid.n}, {grid.n})"
        )
    return SpectralField(grid, sfft.fft2(phys) / grid.n**2)


def inverse_transform(f: SpectralField) -> np.ndarray:
    """Spectral coefficients -> real physical samples.

    Raises SymmetryError if the coefficients are not Hermitian-symmetric
    beyond tolerance (the field would not be real).
    """
    phys = sfft.ifft2(f.coeffs) * f.grid.n**2
    scale = max(1.0, float(np.max(np.abs(phys.real))))
    if float(np.max(np.abs(phys.imag))) > HERMITIAN_TOL * scale:
        raise SymmetryError("coefficients break Hermitian symmetry; field is not real")
    return np.ascontiguousarray(phys.real)


def dealias(f: SpectralField) -> SpectralField:
    """Zero every mode with |k| > k_max (circular truncation)."""
    wn = wavenumbers(f.grid)
    return SpectralField(f.grid, np.where(wn.dealias_mask, f.coeffs, 0.0))


def laplacian(f: SpectralField) -> SpectralField:
    wn = wavenumbers(f.grid)
    return SpectralField(f.grid, -wn.ksq * f.coeffs)


def helmholtz_inverse(f: SpectralField, alpha: float) -> SpectralField:
    """Apply (1 - alpha^2 Laplacian)^{-1}; identity for alpha = 0."""
    if alpha < 0:
        raise ValueError(f"alpha must be nonnegative, got {alpha}")
    wn = wavenumbers(f.grid)
    return SpectralField(f.grid, f.coeffs / (1.0 + alpha**2 * wn.ksq))


def poisson_solve(omega: SpectralField) -> SpectralField:
    """Streamfunction psi with Laplacian(psi) = omega and zero-mean gauge.

    The k = 0 vorticity mode is ignored: mean vorticity is a decoupled
    constant and psi is pinned to zero mean.
    """
    wn = wavenumbers(omega.grid)
    return SpectralField(omega.grid, -omega.coeffs * wn.inv_ksq)


def velocity_from_streamfunction(psi: SpectralField):
    """u = (-d psi/dx2, +d psi/dx1), the divergence-free velocity with
    curl(u) = Laplacian(psi)."""
    wn = wavenumbers(psi.grid)
    u1 = SpectralField(psi.grid, -1j * wn.k2 * psi.coeffs)
    u2 = SpectralField(psi.grid, 1j * wn.k1 * psi.coeffs)
    return u1, u2


def jacobian(psi: SpectralField, q: SpectralField) -> SpectralField:
    """Dealiased pseudospectral Jacobian J[psi, q] = d1 psi d2 q - d2 psi d1 q.

    The four derivative fields are brought to physical space, multiplied
    pointwise, transformed back and circularly truncated; for inputs already
    truncated to |k| <= k_max = floor(n/3) this equals the Galerkin product.
    """
    _check_same_grid(psi, q)
    wn = wavenumbers(psi.grid)
    return SpectralField(psi.grid, jacobian_coeffs(wn, psi.coeffs, q.coeffs))


def jacobian_coeffs(wn: WavenumberSet, psi_c: np.ndarray, q_c: np.ndarray) -> np.ndarray:
    """Array-level Jacobian used by the solver hot path."""
    n2 = wn.grid.n**2
    p1 = sfft.ifft2(1j * wn.k1 * psi_c).real * n2
    p2 = sfft.ifft2(1j * wn.k2 * psi_c).real * n2
    q1 = sfft.ifft2(1j * wn.k1 * q_c).real * n2
    q2 = sfft.ifft2(1j * wn.k2 * q_c).real * n2
    jac = sfft.fft2(p1 * q2 - p2 * q1) / n2
    return np.where(wn.dealias_mask, jac, 0.0)
