import numpy as np
import pytest

from avgeuler2d import checkpoint as cp
from avgeuler2d.spectral import GridSpec

from oracles import random_dealiased


def make_checkpoint(rng, n=32):
    grid = GridSpec(n)
    coeffs = random_dealiased(grid, rng)
    return cp.Checkpoint(grid, 1 / 21, 1e-4, 0.1, 10.0, 10.001, 1.0,
                         t=3.5, dt=2.25e-3, coeffs=coeffs)


def test_round_trip_bit_exact(tmp_path, rng):
    ck = make_checkpoint(rng)
    path = tmp_path / "state.bin"
    cp.write_checkpoint(path, ck)
    back = cp.read_checkpoint(path)
    assert back.grid == ck.grid
    for name in ("alpha", "nu", "delta", "k_lo", "k_hi", "amplitude", "t", "dt"):
        assert getattr(back, name) == getattr(ck, name)
    assert np.array_equal(back.coeffs, ck.coeffs)  # exact, not approx


def test_write_rejects_shape_mismatch(tmp_path, rng):
    ck = make_checkpoint(rng)
    bad = cp.Checkpoint(ck.grid, ck.alpha, ck.nu, ck.delta, ck.k_lo, ck.k_hi,
                        ck.amplitude, ck.t, ck.dt, ck.coeffs[:16, :16])
    with pytest.raises(cp.CheckpointError):
        cp.write_checkpoint(tmp_path / "bad.bin", bad)


def test_read_rejects_corruption(tmp_path, rng):
    path = tmp_path / "state.bin"
    cp.write_checkpoint(path, make_checkpoint(rng))
    raw = path.read_bytes()

    (tmp_path / "magic.bin").write_bytes(b"XXXX" + raw[4:])
    with pytest.raises(cp.CheckpointError):
        cp.read_checkpoint(tmp_path / "magic.bin")

    (tmp_path / "version.bin").write_bytes(raw[:4] + b"\x63\x00\x00\x00" + raw[8:])
    with pytest.raises(cp.CheckpointError):
        cp.read_checkpoint(tmp_path / "version.bin")

    (tmp_path / "trunc.bin").write_bytes(raw[: len(raw) // 2])
    with pytest.raises(cp.CheckpointError):
        cp.read_checkpoint(tmp_path / "trunc.bin")

    (tmp_path / "header.bin").write_bytes(raw[:6])
    with pytest.raises(cp.CheckpointError):
        cp.read_checkpoint(tmp_path / "header.bin")


def test_state_field_copies(tmp_path, rng):
    ck = make_checkpoint(rng)
    f = cp.state_field(ck)
    f.coeffs[0, 0] = 99.0
    assert ck.coeffs[0, 0] != 99.0
