"""Shared value types and small numerical utilities.

Everything downstream (closed forms, grid numerics, analysis, CLI) builds on
the frozen dataclasses defined here.  Natural units hbar = m = 1 are the
default; both constants can be overridden through PhysicalConstants.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

__all__ = [
    "BOUNDARY_TOL",
    "PacketLabError",
    "ConfigurationError",
    "GridTruncationError",
    "NoClosedFormError",
    "UnsupportedObservableError",
    "NoSaturationLawError",
    "BasisTruncationError",
    "InsufficientStencilError",
    "PhysicalConstants",
    "PacketParams",
    "DerivedScales",
    "derived_scales",
    "SystemKind",
    "SystemSpec",
    "Space",
    "Grid",
    "Wavefunction",
    "continuous_sqrt",
    "quadrature",
    "norm_squared",
]

# Relative magnitude allowed at the outermost grid samples before an integral
# is considered truncated.
BOUNDARY_TOL = 1e-12


class PacketLabError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(PacketLabError):
    """Inconsistent grids, parameters or scenario configuration."""


class GridTruncationError(PacketLabError):
    """The state carries non-negligible amplitude at the grid edge."""

    def __init__(self, message, edge_fraction=None):
        super().__init__(message)
        self.edge_fraction = edge_fraction


class NoClosedFormError(PacketLabError):
    """No closed form covers this case; use the grid-numerics route."""


class UnsupportedObservableError(PacketLabError):
    """The requested observable has no implemented expression for this system."""


class NoSaturationLawError(PacketLabError):
    """The system has no long-time saturation law."""


class BasisTruncationError(PacketLabError):
    """Basis expansion left too much tail mass outside the kept levels."""

    def __init__(self, message, tail_mass=None, suggested_n_max=None):
        super().__init__(message)
        self.tail_mass = tail_mass
        self.suggested_n_max = suggested_n_max


class InsufficientStencilError(PacketLabError):
    """Finite-difference stencil does not fit around the requested index."""


@dataclass(frozen=True)
class PhysicalConstants:
    """Dimensional constants; defaults give natural units."""

    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if not (self.hbar > 0.0) or not (self.mass > 0.0):
            raise ConfigurationError("hbar and mass must be positive")


@dataclass(frozen=True)
class PacketParams:
    """Initial Gaussian packet: width parameter alpha, center x0, mean momentum p0.

    The momentum-space profile is exp(-alpha^2 (p - p0)^2 / 2) up to phases and
    normalization, so alpha has dimensions of inverse momentum.
    """

    alpha: float
    x0: float = 0.0
    p0: float = 0.0
    constants: PhysicalConstants = PhysicalConstants()

    def __post_init__(self):
        if not (self.alpha > 0.0):
            raise ConfigurationError("alpha must be positive")

    @property
    def beta(self):
        """Position-space width parameter alpha * hbar."""
        return self.alpha * self.constants.hbar

    @property
    def t0(self):
        """Spreading timescale m * hbar * alpha^2."""
        return self.constants.mass * self.constants.hbar * self.alpha**2

    @property
    def spread_x0(self):
        """Initial position spread alpha * hbar / sqrt(2)."""
        return self.beta / math.sqrt(2.0)

    @property
    def spread_p0(self):
        """Initial momentum spread 1 / (alpha * sqrt(2))."""
        return 1.0 / (self.alpha * math.sqrt(2.0))


@dataclass(frozen=True)
class DerivedScales:
    """Characteristic scales of a packet, optionally relative to an oscillator."""

    beta: float
    t0: float
    spread_x0: float
    spread_p0: float
    beta0: float | None = None
    r: float | None = None


def derived_scales(params, omega=None):
    """Collect the derived scales of ``params``; oscillator fields need ``omega``."""
    beta0 = None
    r = None
    if omega is not None:
        if not (omega > 0.0):
            raise ConfigurationError("omega must be positive")
        beta0 = math.sqrt(params.constants.hbar / (params.constants.mass * omega))
        r = beta0**2 / params.beta**2
    return DerivedScales(
        beta=params.beta,
        t0=params.t0,
        spread_x0=params.spread_x0,
        spread_p0=params.spread_p0,
        beta0=beta0,
        r=r,
    )


class SystemKind(enum.Enum):
    FREE = "free"
    UNIFORM_ACCELERATION = "uniform_acceleration"
    HARMONIC = "harmonic"
    INVERTED = "inverted"


@dataclass(frozen=True)
class SystemSpec:
    """One of the four model systems plus its coupling constant.

    ``omega`` doubles as the inverted-oscillator rate (the omega-tilde in
    V = -m omega^2 x^2 / 2); it must be positive for both oscillator kinds.
    """

    kind: SystemKind
    force: float | None = None
    omega: float | None = None

    def __post_init__(self):
        if self.kind is SystemKind.FREE:
            if self.force is not None or self.omega is not None:
                raise ConfigurationError("free system takes no coupling")
        elif self.kind is SystemKind.UNIFORM_ACCELERATION:
            if self.force is None or self.omega is not None:
                raise ConfigurationError("uniform acceleration needs exactly a force")
        elif self.kind in (SystemKind.HARMONIC, SystemKind.INVERTED):
            if self.force is not None or self.omega is None:
                raise ConfigurationError("oscillator systems need exactly an omega")
            if not (self.omega > 0.0):
                raise ConfigurationError("omega must be positive")

    @classmethod
    def free(cls):
        return cls(SystemKind.FREE)

    @classmethod
    def uniform_acceleration(cls, force):
        return cls(SystemKind.UNIFORM_ACCELERATION, force=float(force))

    @classmethod
    def harmonic(cls, omega):
        return cls(SystemKind.HARMONIC, omega=float(omega))

    @classmethod
    def inverted(cls, omega):
        return cls(SystemKind.INVERTED, omega=float(omega))

    def potential(self, x, constants):
        """Potential energy V(x) on an array of positions."""
        x = np.asarray(x, dtype=float)
        if self.kind is SystemKind.FREE:
            return np.zeros_like(x)
        if self.kind is SystemKind.UNIFORM_ACCELERATION:
            return -self.force * x
        if self.kind is SystemKind.HARMONIC:
            return 0.5 * constants.mass * self.omega**2 * x**2
        return -0.5 * constants.mass * self.omega**2 * x**2


class Space(enum.Enum):
    POSITION = "position"
    MOMENTUM = "momentum"


@dataclass(frozen=True)
class Grid:
    """Uniform 1-d grid, either closed ([min, max] inclusive, for quadrature)
    or periodic (max excluded, for the FFT transform pair)."""

    min: float
    max: float
    n_points: int
    space: Space = Space.POSITION
    periodic: bool = False

    def __post_init__(self):
        if not (self.max > self.min):
            raise ConfigurationError("grid needs max > min")
        if self.n_points < 2:
            raise ConfigurationError("grid needs at least 2 points")

    @property
    def dx(self):
        span = self.max - self.min
        return span / self.n_points if self.periodic else span / (self.n_points - 1)

    @property
    def points(self):
        if self.periodic:
            return self.min + self.dx * np.arange(self.n_points)
        return np.linspace(self.min, self.max, self.n_points)


@dataclass(frozen=True)
class Wavefunction:
    """Sampled state on a grid at one instant.  Samples are read-only."""

    grid: Grid
    samples: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=complex)
        if samples.shape != (self.grid.n_points,):
            raise ConfigurationError("samples must match the grid length")
        samples = samples.copy()
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    def density(self):
        """Probability density |psi|^2 on the grid."""
        return np.abs(self.samples) ** 2


def continuous_sqrt(z, previous_root=None):
    """Square root with branch tracking for phase-continuous prefactors.

    Parameters
    ----------
    z : complex
        Radicand; must be nonzero (the branch is undefined at 0).
    previous_root : complex, optional
        Root chosen at the previous point of a continuous path.  When given,
        the returned root is whichever of +/-sqrt(z) lies closer to it.
        When omitted the principal root (argument in (-pi/2, pi/2]) is
        returned.

    Returns
    -------
    complex
    """
    z = complex(z)
    if z == 0:
        raise ConfigurationError("continuous_sqrt is undefined at z = 0")
    if z.imag == 0.0:
        # kill a negative zero so the cut side is deterministic
        z = complex(z.real, 0.0)
    root = cmath.sqrt(z)
    if previous_root is not None:
        previous_root = complex(previous_root)
        if abs(root - previous_root) > abs(root + previous_root):
            root = -root
    return root


def quadrature(grid, values):
    """Integrate sampled values over the grid.

    Closed grids use composite Simpson when n_points is odd and the
    trapezoid rule otherwise; periodic grids use the rectangle rule, which
    is spectrally accurate for smooth periodic (or fully decayed) data.
    """
    values = np.asarray(values)
    if len(values) != grid.n_points:
        raise ConfigurationError("values must match the grid length")
    if grid.periodic:
        return values.sum() * grid.dx
    if grid.n_points % 2 == 1:
        return simpson(values, dx=grid.dx)
    return np.trapezoid(values, dx=grid.dx)


def _check_edges(samples, boundary_tol):
    peak = float(np.max(np.abs(samples)))
    if peak == 0.0:
        return
    edge = max(abs(samples[0]), abs(samples[-1])) / peak
    if edge > boundary_tol:
        raise GridTruncationError(
            f"edge amplitude {edge:.3e} of peak exceeds boundary tolerance "
            f"{boundary_tol:.1e}; widen the grid",
            edge_fraction=edge,
        )


def norm_squared(psi, boundary_tol=BOUNDARY_TOL):
    """Squared norm of a sampled state by quadrature of |psi|^2.

    Raises GridTruncationError when either outermost sample exceeds
    ``boundary_tol`` relative to the peak magnitude.
    """
    _check_edges(psi.samples, boundary_tol)
    return float(np.real(quadrature(psi.grid, psi.density())))
