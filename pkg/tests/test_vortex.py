import numpy as np
import pytest

from avgeuler2d import spectral as sp
from avgeuler2d import vortex as vx
from avgeuler2d.stepper import StepController


def test_kernel_validation():
    with pytest.raises(ValueError):
        vx.BlobKernel("gaussian")
    with pytest.raises(ValueError):
        vx.BlobKernel(vx.BESSEL_K0, alpha=0.0)
    assert vx.VortexSystem([[0.0, 0.0]], [1.0], alpha=0.3).kernel.kernel_kind == vx.BESSEL_K0
    assert vx.VortexSystem([[0.0, 0.0]], [1.0]).kernel.kernel_kind == vx.POINT


def test_system_shape_validation():
    with pytest.raises(ValueError):
        vx.VortexSystem([[0.0, 0.0], [1.0, 0.0]], [1.0])


def test_point_tangential_speed():
    kern = vx.BlobKernel(vx.POINT)
    r = np.array([0.5, 2.0])
    assert np.allclose(vx.tangential_speed(kern, r, 3.0), 3.0 / (2 * np.pi * r))
    with pytest.raises(vx.SingularityError):
        vx.tangential_speed(kern, np.array([0.0]), 1.0)


def test_blob_speed_regular_at_origin_and_matches_point_far():
    kern = vx.BlobKernel(vx.BESSEL_K0, alpha=0.1)
    assert vx.tangential_speed(kern, np.array([0.0]), 1.0)[0] == 0.0
    # small-r behavior u ~ Gamma r/(4 pi alpha^2) * (-2 log(r/2alpha) - ...) -> 0
    small = vx.tangential_speed(kern, np.array([1e-6]), 1.0)[0]
    assert 0 < small < 1e-3
    # far field reverts to the point kernel
    r = np.array([5.0])
    blob = vx.tangential_speed(kern, r, 1.0)[0]
    point = 1.0 / (2 * np.pi * r[0])
    assert blob == pytest.approx(point, rel=1e-12)
    # always slower than the point vortex at equal r
    r = np.linspace(0.01, 1.0, 50)
    assert np.all(vx.tangential_speed(kern, r, 1.0) < 1.0 / (2 * np.pi * r))


@pytest.mark.parametrize("alpha", [0.0, 0.25])
def test_speed_is_minus_green_derivative(alpha):
    """u_theta = -dG/dr ties the velocity kernel to the Hamiltonian."""
    kern = vx.BlobKernel(vx.BESSEL_K0, alpha) if alpha else vx.BlobKernel(vx.POINT)
    r = np.linspace(0.2, 3.0, 15)
    h = 1e-5
    d = (vx.stream_green(kern, r + h) - vx.stream_green(kern, r - h)) / (2 * h)
    assert np.allclose(-d, vx.tangential_speed(kern, r, 1.0), rtol=1e-8)


def test_stream_green_blob_center_value():
    alpha = 0.3
    kern = vx.BlobKernel(vx.BESSEL_K0, alpha)
    want = -(np.log(2 * alpha) - 0.5772156649015328606) / (2 * np.pi)
    assert vx.stream_green(kern, np.array([0.0]))[0] == pytest.approx(want)
    # continuous limit
    assert vx.stream_green(kern, np.array([1e-9]))[0] == pytest.approx(want, rel=1e-8)


def test_velocity_field_single_vortex_geometry():
    system = vx.VortexSystem([[0.0, 0.0]], [2.0])
    u = vx.velocity_field(system, [[1.0, 0.0], [0.0, 1.0]])
    s = 2.0 / (2 * np.pi)
    assert np.allclose(u, [[0.0, s], [-s, 0.0]])


def test_self_velocities_exclude_self_induction():
    system = vx.VortexSystem([[0.0, 0.0], [1.0, 0.0]], [1.0, 1.0])
    u = vx.self_velocities(system)
    s = 1.0 / (2 * np.pi)
    assert np.allclose(u, [[0.0, -s], [0.0, s]])


def test_point_velocity_field_singularity():
    system = vx.VortexSystem([[0.0, 0.0]], [1.0])
    with pytest.raises(vx.SingularityError):
        vx.velocity_field(system, [[0.0, 0.0]])


def test_blob_velocity_field_finite_at_center():
    system = vx.VortexSystem([[0.0, 0.0]], [1.0], alpha=0.2)
    u = vx.velocity_field(system, [[0.0, 0.0]])
    assert np.allclose(u, 0.0)


def test_two_point_vortex_period():
    """Equal pair, separation d: rigid rotation with T = 2 pi^2 d^2 / Gamma."""
    d, gamma = 1.0, 1.0
    period = 2 * np.pi**2 * d**2 / gamma
    system = vx.VortexSystem([[-d / 2, 0.0], [d / 2, 0.0]], [gamma, gamma])
    controller = StepController(rtol=1e-10, atol=1e-12, dt=1e-3)
    final, _ = vx.evolve(system, period, controller)
    assert np.max(np.abs(final.positions - system.positions)) < 1e-6


def test_blob_pair_rotates_slower():
    """Smoothing weakens the induced velocity, so the blob pair lags."""
    d = 0.5
    alpha = 0.25
    quarter = 0.25 * 2 * np.pi**2 * d**2  # quarter period of the point pair
    controller = StepController(rtol=1e-10, atol=1e-12, dt=1e-3)
    pts = [[-d / 2, 0.0], [d / 2, 0.0]]
    fin_pt, _ = vx.evolve(vx.VortexSystem(pts, [1.0, 1.0]), quarter, controller)
    fin_blob, _ = vx.evolve(vx.VortexSystem(pts, [1.0, 1.0], alpha), quarter, controller)
    ang = lambda pos: np.arctan2(pos[1, 1], pos[1, 0])
    assert ang(fin_pt.positions) == pytest.approx(np.pi / 2, abs=1e-8)
    assert 0 < ang(fin_blob.positions) < ang(fin_pt.positions)
    # the lag matches the kernel ratio g(d/alpha)
    expected = np.pi / 2 * vx._blob_core_factor(np.array([d / alpha]))[0]
    assert ang(fin_blob.positions) == pytest.approx(expected, rel=1e-6)


@pytest.mark.parametrize("alpha", [0.0, 0.2])
def test_invariants_and_hamiltonian_conserved(alpha, rng):
    pos = rng.uniform(-1.0, 1.0, size=(5, 2))
    gam = rng.uniform(0.5, 1.5, size=5) * np.array([1, -1, 1, -1, 1])
    system = vx.VortexSystem(pos, gam, alpha)
    c0, l0, a0 = vx.invariants(system)
    h0 = vx.blob_hamiltonian(system)
    controller = StepController(rtol=1e-11, atol=1e-13, dt=1e-3)
    final, traj = vx.evolve(system, 2.0, controller)
    c1, l1, a1 = vx.invariants(final)
    h1 = vx.blob_hamiltonian(final)
    assert c1 == c0
    assert np.max(np.abs(l1 - l0)) < 1e-9
    assert abs(a1 - a0) < 1e-9
    assert abs(h1 - h0) < 1e-9 * max(1.0, abs(h0))
    assert traj[0][0] == 0.0 and traj[-1][0] == pytest.approx(2.0)


def test_hamiltonian_edge_cases():
    assert vx.blob_hamiltonian(vx.VortexSystem([[0.0, 0.0]], [1.0])) == 0.0
    coincident = vx.VortexSystem([[0.0, 0.0], [0.0, 0.0]], [1.0, 1.0])
    with pytest.raises(vx.SingularityError):
        vx.blob_hamiltonian(coincident)
    # blobs tolerate coincidence
    vx.blob_hamiltonian(vx.VortexSystem([[0.0, 0.0], [0.0, 0.0]], [1.0, 1.0], alpha=0.1))


def test_sample_field_to_blobs():
    grid = sp.GridSpec(16)
    x = grid.dx * np.arange(grid.n)
    x1, x2 = np.meshgrid(x, x, indexing="ij")
    q = np.sin(x1) * np.cos(2 * x2) + 0.5
    system = vx.sample_field_to_blobs(q, grid, alpha=0.1)
    assert system.positions.shape == (256, 2)
    total, _, _ = vx.invariants(system)
    assert total == pytest.approx(0.5 * grid.domain_length**2, rel=1e-12)
    # blob at flat index i sits at the node whose value it carries
    i = 3 * grid.n + 7
    assert system.circulations[i] == pytest.approx(q[3, 7] * grid.dx**2)
    assert np.allclose(system.positions[i], [x[3], x[7]])
    with pytest.raises(ValueError):
        vx.sample_field_to_blobs(np.zeros((8, 8)), grid, 0.1)
