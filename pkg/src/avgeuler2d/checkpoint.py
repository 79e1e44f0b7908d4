"""Binary checkpoints with a bit-exact round-trip contract.

Layout (little-endian):

    magic   4 bytes  b"AEU2"
    version u32      1
    n       u32      grid points per direction
    k_max   u32      dealias radius
    params  9 f64    domain_length, alpha, nu, delta,
                     k_lo, k_hi, amplitude, t, dt
    coeffs  2*n*n f64  interleaved (re, im), row-major wavenumber order

The stored dt is the step controller's current step so a resumed run
reproduces the original trajectory bit for bit.
"""

import struct
from dataclasses import dataclass

import numpy as np

from .spectral import GridSpec, SpectralField

MAGIC = b"AEU2"
VERSION = 1

_HEAD = struct.Struct("<4sIII")
_PARAMS = struct.Struct("<9d")


class CheckpointError(ValueError):
    """Malformed or incompatible checkpoint file."""


@dataclass
class Checkpoint:
    grid: GridSpec
    alpha: float
    nu: float
    delta: float
    k_lo: float
    k_hi: float
    amplitude: float
    t: float
    dt: float
    coeffs: np.ndarray


def write_checkpoint(path, ck: Checkpoint):
    n = ck.grid.n
    if ck.coeffs.shape != (n, n):
        raise CheckpointError(f"coefficient shape {ck.coeffs.shape} does not match n = {n}")
    inter = np.empty((n, n, 2))
    inter[:, :, 0] = ck.coeffs.real
    inter[:, :, 1] = ck.coeffs.imag
    with open(path, "wb") as fh:
        fh.write(_HEAD.pack(MAGIC, VERSION, n, ck.grid.k_max))
        fh.write(
            _PARAMS.pack(
                ck.grid.domain_length, ck.alpha, ck.nu, ck.delta,
                ck.k_lo, ck.k_hi, ck.amplitude, ck.t, ck.dt,
            )
        )
        fh.write(np.ascontiguousarray(inter, dtype="<f8").tobytes())


def read_checkpoint(path) -> Checkpoint:
    with open(path, "rb") as fh:
        head = fh.read(_HEAD.size)
        if len(head) < _HEAD.size:
            raise CheckpointError("truncated checkpoint header")
        magic, version, n, k_max = _HEAD.unpack(head)
        if magic != MAGIC:
            raise CheckpointError(f"bad magic {magic!r}")
        if version != VERSION:
            raise CheckpointError(f"unsupported checkpoint version {version}")
        params = _PARAMS.unpack(fh.read(_PARAMS.size))
        body = fh.read(2 * n * n * 8)
        if len(body) != 2 * n * n * 8:
            raise CheckpointError("truncated checkpoint body")
    (domain_length, alpha, nu, delta, k_lo, k_hi, amplitude, t, dt) = params
    inter = np.frombuffer(body, dtype="<f8").reshape(n, n, 2)
    coeffs = inter[:, :, 0] + 1j * inter[:, :, 1]
    grid = GridSpec(n=n, domain_length=domain_length, k_max=k_max)
    return Checkpoint(grid, alpha, nu, delta, k_lo, k_hi, amplitude, t, dt, coeffs)


def state_field(ck: Checkpoint) -> SpectralField:
    return SpectralField(ck.grid, ck.coeffs.copy())
