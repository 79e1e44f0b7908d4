"""Lagrangian vortex integrator: point vortices and K0-smoothed blobs.

The blob velocity kernel is the perpendicular gradient of the free-space
Green's function G of -Lap (1 - alpha^2 Lap), whose azimuthal velocity for
a unit-circulation blob is

    u_theta(r) = 1/(2 pi r) * (1 - (r/alpha) K1(r/alpha)),

finite at r = 0. With alpha = 0 this reduces to the point-vortex kernel
1/(2 pi r). The PDE limit of the blob system is the averaged Euler system
solved by the spectral modules, which the test suite cross-validates.
"""

from dataclasses import dataclass

import numpy as np

from . import stepper
from .bessel import k0 as bessel_k0_fn
from .bessel import k1 as bessel_k1_fn
from .spectral import GridSpec

POINT = "point"
BESSEL_K0 = "bessel_k0"

# (r/alpha) K1(r/alpha) deviates from 0/1 by < 1e-16 outside this range.
_FAR_CUTOFF = 40.0

TWO_PI = 2.0 * np.pi


class SingularityError(ValueError):
    """Point-vortex kernel evaluated at zero separation."""


@dataclass(frozen=True)
class BlobKernel:
    """kernel_kind 'point' (singular) or 'bessel_k0' (K0 blob of scale alpha)."""

    kernel_kind: str
    alpha: float = 0.0

    def __post_init__(self):
        if self.kernel_kind not in (POINT, BESSEL_K0):
            raise ValueError(f"unknown kernel kind {self.kernel_kind!r}")
        if self.kernel_kind == BESSEL_K0 and self.alpha <= 0:
            raise ValueError("bessel_k0 kernel requires alpha > 0")


@dataclass
class VortexSystem:
    """N blob positions (N, 2), constant circulations (N,), smoothing alpha
    (0 means point vortices)."""

    positions: np.ndarray
    circulations: np.ndarray
    alpha: float = 0.0

    def __post_init__(self):
        self.positions = np.atleast_2d(np.asarray(self.positions, dtype=float))
        self.circulations = np.asarray(self.circulations, dtype=float)
        if self.positions.shape != (self.circulations.size, 2):
            raise ValueError("positions must be (N, 2) matching N circulations")

    @property
    def kernel(self):
        if self.alpha > 0:
            return BlobKernel(BESSEL_K0, self.alpha)
        return BlobKernel(POINT)


def _blob_core_factor(z):
    """g(z) = 1 - z K1(z), the smoothing of the azimuthal speed; g ~ z^2/2
    (-log z) near 0 and -> 1 for z >> 1."""
    z = np.asarray(z, dtype=float)
    g = np.ones_like(z)
    near = z < _FAR_CUTOFF
    nz = near & (z > 0)
    g[nz] = 1.0 - z[nz] * bessel_k1_fn(z[nz])
    g[z == 0] = 0.0
    return g


def tangential_speed(kernel: BlobKernel, r, gamma):
    """Azimuthal speed at distance r from a single vortex of circulation gamma."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("r must be nonnegative")
    if kernel.kernel_kind == POINT:
        if np.any(r == 0):
            raise SingularityError("point-vortex speed diverges at r = 0")
        return gamma / (TWO_PI * r)
    out = np.zeros_like(r)
    pos = r > 0
    out[pos] = gamma / (TWO_PI * r[pos]) * _blob_core_factor(r[pos] / kernel.alpha)
    return out if out.ndim else float(out)


def stream_green(kernel: BlobKernel, r):
    """Stream Green's function G(r) with u_theta = -dG/dr.

    point:      G = -log(r) / 2 pi
    bessel_k0:  G = -(log(r) + K0(r/alpha)) / 2 pi    (finite at r = 0)
    """
    r = np.asarray(r, dtype=float)
    if kernel.kernel_kind == POINT:
        if np.any(r == 0):
            raise SingularityError("point-vortex Green's function diverges at r = 0")
        return -np.log(r) / TWO_PI
    g = np.empty_like(r)
    zero = r == 0
    # log r + K0(r/alpha) -> log(2 alpha) - gamma_E as r -> 0
    g[zero] = -(np.log(2.0 * kernel.alpha) - 0.5772156649015328606) / TWO_PI
    near = ~zero & (r / kernel.alpha < _FAR_CUTOFF)
    g[near] = -(np.log(r[near]) + bessel_k0_fn(r[near] / kernel.alpha)) / TWO_PI
    far = ~zero & ~near
    g[far] = -np.log(r[far]) / TWO_PI
    return g if g.ndim else float(g)


def _induced_velocity(positions, circulations, alpha, query, exclude, chunk=512):
    """Direct kernel summation; exclude[i] masks out source i for query row i."""
    m = query.shape[0]
    out = np.zeros((m, 2))
    point = alpha <= 0
    for lo in range(0, m, chunk):
        hi = min(lo + chunk, m)
        dx = query[lo:hi, 0:1] - positions[None, :, 0]
        dy = query[lo:hi, 1:2] - positions[None, :, 1]
        r2 = dx * dx + dy * dy
        if exclude:
            idx = np.arange(lo, hi)
            r2[np.arange(hi - lo), idx] = np.inf
        if point:
            if np.any(r2 == 0):
                raise SingularityError("point-vortex velocity evaluated at a vortex center")
            f = circulations / (TWO_PI * r2)
        else:
            zero = r2 == 0
            r2safe = np.where(zero, 1.0, r2)
            g = _blob_core_factor(np.sqrt(r2safe) / alpha)
            f = np.where(zero, 0.0, circulations * g / (TWO_PI * r2safe))
        out[lo:hi, 0] = -(f * dy).sum(axis=1)
        out[lo:hi, 1] = (f * dx).sum(axis=1)
    return out


def velocity_field(system: VortexSystem, query_points, chunk=512):
    """Velocity induced by all blobs at the query points, O(N*M) summation."""
    query = np.atleast_2d(np.asarray(query_points, dtype=float))
    return _induced_velocity(
        system.positions, system.circulations, system.alpha, query, exclude=False, chunk=chunk
    )


def self_velocities(system: VortexSystem):
    """Velocity of each blob under all the others (self-induction excluded)."""
    return _induced_velocity(
        system.positions, system.circulations, system.alpha,
        system.positions, exclude=True,
    )


def evolve(system: VortexSystem, t_end, controller: stepper.StepController):
    """Advance blob positions to t_end with the Cash-Karp integrator.

    Circulations never change. Returns the trajectory as a list of
    (t, positions) pairs, one per accepted step, starting at t = 0.
    """
    gam = system.circulations

    def rhs_fn(t, y):
        pos = y.reshape(-1, 2)
        return _induced_velocity(pos, gam, system.alpha, pos, exclude=True).ravel()

    trajectory = [(0.0, system.positions.copy())]

    def on_accept(t, y, outcome):
        trajectory.append((t, y.reshape(-1, 2).copy()))

    y, _ = stepper.advance(
        0.0, system.positions.ravel().copy(), rhs_fn, controller, t_end, on_accept=on_accept
    )
    final = VortexSystem(y.reshape(-1, 2), gam.copy(), system.alpha)
    return final, trajectory


def blob_hamiltonian(system: VortexSystem):
    """Pairwise interaction energy H = -sum_{i<j} Gamma_i Gamma_j G(|x_i - x_j|),
    conserved by evolve (no boundaries)."""
    pos = system.positions
    gam = system.circulations
    n = gam.size
    if n < 2:
        return 0.0
    iu, ju = np.triu_indices(n, k=1)
    r = np.hypot(pos[iu, 0] - pos[ju, 0], pos[iu, 1] - pos[ju, 1])
    kern = system.kernel
    if kern.kernel_kind == POINT and np.any(r == 0):
        raise SingularityError("coincident point vortices have infinite energy")
    return -float(np.sum(gam[iu] * gam[ju] * stream_green(kern, r)))


def invariants(system: VortexSystem):
    """Total circulation, linear impulse (2-vector), angular impulse."""
    gam = system.circulations
    pos = system.positions
    total = float(gam.sum())
    linear = (gam[:, None] * pos).sum(axis=0)
    angular = float((gam * (pos**2).sum(axis=1)).sum())
    return total, linear, angular


def sample_field_to_blobs(q_physical, grid: GridSpec, alpha) -> VortexSystem:
    """One blob per grid cell: position at the cell node, circulation
    q(x_i) times the cell area; total circulation equals the field integral."""
    q = np.asarray(q_physical, dtype=float)
    if q.shape != (grid.n, grid.n):
        raise ValueError(f"field shape {q.shape} does not match grid n = {grid.n}")
    h = grid.dx
    x = h * np.arange(grid.n)
    x1, x2 = np.meshgrid(x, x, indexing="ij")
    positions = np.column_stack([x1.ravel(), x2.ravel()])
    return VortexSystem(positions, q.ravel() * h * h, alpha)
