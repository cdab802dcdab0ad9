"""Tests for the shared types, branch-tracked sqrt and quadrature."""
import cmath
import math

import numpy as np
import pytest

from packetlab.core import (
    ConfigurationError,
    Grid,
    GridTruncationError,
    PacketParams,
    PhysicalConstants,
    Space,
    SystemKind,
    SystemSpec,
    Wavefunction,
    continuous_sqrt,
    derived_scales,
    norm_squared,
    quadrature,
)


def gaussian_state(grid, beta=1.0, x0=0.0, p0=0.0, hbar=1.0):
    """Normalized Gaussian samples: (sqrt(pi)*beta)^-1/2 exp(ip0(x-x0)/hbar) exp(-(x-x0)^2/2beta^2)."""
    x = grid.points
    env = np.exp(-((x - x0) ** 2) / (2.0 * beta**2))
    phase = np.exp(1j * p0 * (x - x0) / hbar)
    return Wavefunction(grid, env * phase / math.sqrt(math.sqrt(math.pi) * beta))


# ---------------------------------------------------------------- continuous_sqrt


def test_principal_root_examples():
    assert continuous_sqrt(4.0) == 2.0
    assert continuous_sqrt(-1.0) == 1j
    # argument of the principal root lies in (-pi/2, pi/2]
    for theta in np.linspace(-np.pi + 1e-9, np.pi, 37):
        root = continuous_sqrt(cmath.exp(1j * theta))
        assert -np.pi / 2 < cmath.phase(root) <= np.pi / 2 + 1e-15


def test_branch_tracking_full_sweep():
    """Chained roots along z = e^{i theta}, theta 0 -> 3pi, land on -i."""
    thetas = np.linspace(0.0, 3.0 * np.pi, 2001)
    root = None
    roots = []
    for theta in thetas:
        root = continuous_sqrt(cmath.exp(1j * theta), root)
        roots.append(root)
    assert abs(roots[-1] - (-1j)) < 1e-12
    # independent oracle: half the unwrapped argument
    oracle = np.exp(0.5j * np.unwrap(thetas))
    assert np.max(np.abs(np.array(roots) - oracle)) < 1e-12
    # continuity: no step exceeds the path increment scale
    steps = np.abs(np.diff(np.array(roots)))
    assert steps.max() < 2.0 * (thetas[1] - thetas[0])


def test_branch_tracking_random_paths():
    """root^2 == z and continuity along random smooth nonvanishing paths."""
    rng = np.random.default_rng(7)
    for _ in range(10):
        radius = rng.uniform(0.2, 3.0)
        drift = rng.uniform(-1.0, 1.0) + 1j * rng.uniform(-1.0, 1.0)
        center = drift * 1.5 * radius  # keeps the path away from the origin
        thetas = np.linspace(0.0, rng.uniform(2.0, 20.0), 4000)
        path = center + radius * np.exp(1j * thetas)
        root = None
        prev = None
        for z in path:
            root = continuous_sqrt(z, root)
            assert abs(root * root - z) < 1e-12 * abs(z)
            if prev is not None:
                assert abs(root - prev) < 0.1
            prev = root


def test_sqrt_rejects_zero():
    with pytest.raises(ConfigurationError):
        continuous_sqrt(0.0)


# ---------------------------------------------------------------- quadrature


def test_simpson_exact_on_cubic():
    grid = Grid(0.0, 1.0, 5)
    x = grid.points
    assert abs(quadrature(grid, x**3) - 0.25) < 1e-15


def test_trapezoid_fallback_even_points():
    grid = Grid(0.0, 1.0, 4)
    x = grid.points
    assert abs(quadrature(grid, x) - 0.5) < 1e-15


def test_periodic_rectangle_rule():
    grid = Grid(0.0, 2.0 * np.pi, 64, periodic=True)
    x = grid.points
    assert abs(quadrature(grid, np.sin(x) ** 2) - np.pi) < 1e-13


# ---------------------------------------------------------------- norm_squared


def test_gaussian_norm_is_one():
    """Gaussian-integral oracle on closed (odd and even) and periodic grids."""
    for grid in (
        Grid(-20.0, 20.0, 2048),
        Grid(-20.0, 20.0, 2049),
        Grid(-20.0, 20.0, 2048, periodic=True),
    ):
        psi = gaussian_state(grid, beta=1.0)
        assert abs(norm_squared(psi) - 1.0) < 1e-10


def test_norm_scaling_is_quadratic():
    grid = Grid(-20.0, 20.0, 1025)
    psi = gaussian_state(grid, beta=0.7, p0=2.0)
    doubled = Wavefunction(grid, 2.0 * psi.samples)
    assert abs(norm_squared(doubled) - 4.0 * norm_squared(psi)) < 1e-10


def test_norm_zero_state():
    grid = Grid(-5.0, 5.0, 101)
    assert norm_squared(Wavefunction(grid, np.zeros(101))) == 0.0


def test_norm_refinement_stable():
    """Doubling the sampling changes the value below 1e-10."""
    coarse = gaussian_state(Grid(-20.0, 20.0, 1025), beta=1.3, p0=1.0)
    fine = gaussian_state(Grid(-20.0, 20.0, 2049), beta=1.3, p0=1.0)
    assert abs(norm_squared(coarse) - norm_squared(fine)) < 1e-10


def test_norm_flags_truncated_grid():
    grid = Grid(-2.0, 2.0, 129)
    psi = gaussian_state(grid, beta=1.0)
    with pytest.raises(GridTruncationError) as err:
        norm_squared(psi)
    assert err.value.edge_fraction > 1e-12
    # a looser boundary tolerance accepts the same state (edge is e^-2 of peak)
    truncated = norm_squared(psi, boundary_tol=0.2)
    assert truncated == pytest.approx(math.erf(2.0), abs=1e-5)


# ---------------------------------------------------------------- parameter types


def test_packet_scales():
    params = PacketParams(alpha=0.5, constants=PhysicalConstants(hbar=2.0, mass=3.0))
    assert params.beta == 1.0
    assert params.t0 == 3.0 * 2.0 * 0.25
    assert params.spread_x0 == pytest.approx(1.0 / math.sqrt(2.0))
    assert params.spread_p0 == pytest.approx(1.0 / (0.5 * math.sqrt(2.0)))
    # uncertainty product at t=0 is hbar/2
    assert params.spread_x0 * params.spread_p0 == pytest.approx(2.0 / 2.0)


def test_derived_scales_with_omega():
    params = PacketParams(alpha=2.0)
    scales = derived_scales(params, omega=1.0)
    assert scales.beta0 == pytest.approx(1.0)
    assert scales.r == pytest.approx(0.25)
    assert derived_scales(params).beta0 is None


def test_parameter_validation():
    with pytest.raises(ConfigurationError):
        PacketParams(alpha=0.0)
    with pytest.raises(ConfigurationError):
        PhysicalConstants(hbar=-1.0)
    with pytest.raises(ConfigurationError):
        derived_scales(PacketParams(alpha=1.0), omega=-2.0)


def test_system_spec_validation():
    with pytest.raises(ConfigurationError):
        SystemSpec(SystemKind.FREE, force=1.0)
    with pytest.raises(ConfigurationError):
        SystemSpec(SystemKind.UNIFORM_ACCELERATION)
    with pytest.raises(ConfigurationError):
        SystemSpec(SystemKind.HARMONIC, omega=-1.0)
    with pytest.raises(ConfigurationError):
        SystemSpec(SystemKind.INVERTED, omega=1.0, force=1.0)
    # F = 0 is a valid acceleration coupling (reduces to free motion)
    assert SystemSpec.uniform_acceleration(0.0).force == 0.0


def test_potentials():
    x = np.array([-1.0, 0.0, 2.0])
    consts = PhysicalConstants(mass=2.0)
    assert np.all(SystemSpec.free().potential(x, consts) == 0.0)
    assert np.allclose(
        SystemSpec.uniform_acceleration(3.0).potential(x, consts), [3.0, 0.0, -6.0]
    )
    assert np.allclose(SystemSpec.harmonic(2.0).potential(x, consts), [4.0, 0.0, 16.0])
    assert np.allclose(SystemSpec.inverted(2.0).potential(x, consts), [-4.0, 0.0, -16.0])


# ---------------------------------------------------------------- grid and state


def test_grid_conventions():
    closed = Grid(-1.0, 1.0, 5)
    assert closed.dx == 0.5
    assert np.allclose(closed.points, [-1.0, -0.5, 0.0, 0.5, 1.0])
    periodic = Grid(-1.0, 1.0, 4, periodic=True)
    assert periodic.dx == 0.5
    assert np.allclose(periodic.points, [-1.0, -0.5, 0.0, 0.5])
    with pytest.raises(ConfigurationError):
        Grid(1.0, -1.0, 16)
    with pytest.raises(ConfigurationError):
        Grid(-1.0, 1.0, 1)


def test_wavefunction_samples_read_only():
    grid = Grid(-1.0, 1.0, 9)
    psi = Wavefunction(grid, np.ones(9))
    with pytest.raises(ValueError):
        psi.samples[0] = 0.0
    with pytest.raises(ConfigurationError):
        Wavefunction(grid, np.ones(8))
    assert psi.grid.space is Space.POSITION
    assert np.allclose(psi.density(), 1.0)
