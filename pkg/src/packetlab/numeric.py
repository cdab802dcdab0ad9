"""Grid numerics: overlaps, the FFT transform pair, split-operator propagation
and oscillator-eigenbasis expansions.

These routes are deliberately independent of the closed forms in ``analytic``
so the two can cross-validate each other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    BOUNDARY_TOL,
    BasisTruncationError,
    ConfigurationError,
    Grid,
    GridTruncationError,
    PhysicalConstants,
    Space,
    SystemKind,
    Wavefunction,
    quadrature,
)

__all__ = [
    "PropagatorConfig",
    "SpectralExpansion",
    "overlap",
    "reflect",
    "conjugate_grid",
    "to_momentum",
    "to_position",
    "propagate",
    "expand_in_oscillator_basis",
    "autocorr_from_spectrum",
    "anticorr_from_spectrum",
]

# width of the edge zone watched by the runaway guard, in grid spacings
_EDGE_ZONE = 10


def _grids_match(a, b):
    if (a.n_points, a.space, a.periodic) != (b.n_points, b.space, b.periodic):
        return False
    # allow the last-ulp drift a conjugate-grid round trip can introduce
    scale = max(a.max - a.min, b.max - b.min)
    return abs(a.min - b.min) <= 1e-12 * scale and abs(a.max - b.max) <= 1e-12 * scale


def overlap(bra, ket, boundary_tol=BOUNDARY_TOL):
    """Inner product <bra|ket> = integral of conj(bra) * ket over the grid.

    Both states must live on the same grid and respect the boundary
    tolerance at the outermost samples.
    """
    if not _grids_match(bra.grid, ket.grid):
        raise ConfigurationError("overlap needs both states on the same grid")
    for psi in (bra, ket):
        peak = float(np.max(np.abs(psi.samples)))
        if peak == 0.0:
            continue
        edge = max(abs(psi.samples[0]), abs(psi.samples[-1])) / peak
        if edge > boundary_tol:
            raise GridTruncationError(
                f"edge amplitude {edge:.3e} of peak exceeds boundary tolerance "
                f"{boundary_tol:.1e}; widen the grid",
                edge_fraction=edge,
            )
    return complex(quadrature(bra.grid, np.conj(bra.samples) * ket.samples))


def _require_symmetric(grid):
    if abs(grid.min + grid.max) > 1e-12 * (grid.max - grid.min):
        raise ConfigurationError("this operation needs a grid symmetric about 0")


def reflect(psi):
    """Mirror a state through x -> -x (or p -> -p) on a symmetric grid."""
    _require_symmetric(psi.grid)
    if psi.grid.periodic:
        # sample 0 sits at -L, its mirror +L wraps back onto itself
        mirrored = np.roll(psi.samples[::-1], 1)
    else:
        mirrored = psi.samples[::-1]
    return Wavefunction(psi.grid, mirrored, time=psi.time)


def _require_transformable(grid, space):
    if grid.space is not space:
        raise ConfigurationError(f"expected a {space.value}-space grid")
    if not grid.periodic:
        raise ConfigurationError("the transform pair needs periodic-convention grids")
    n = grid.n_points
    if n & (n - 1):
        raise ConfigurationError("the transform pair needs a power-of-two grid")
    _require_symmetric(grid)


def conjugate_grid(grid, constants=PhysicalConstants()):
    """Conjugate momentum grid of a symmetric periodic position grid (and back).

    The pair satisfies dp * dx = 2 pi hbar / n and both grids are symmetric,
    so the mapping is an involution.
    """
    space = Space.POSITION if grid.space is Space.POSITION else Space.MOMENTUM
    _require_transformable(grid, space)
    half_span = math.pi * constants.hbar / grid.dx
    other = Space.MOMENTUM if grid.space is Space.POSITION else Space.POSITION
    return Grid(-half_span, half_span, grid.n_points, space=other, periodic=True)


def _alternating_signs(n):
    signs = np.ones(n)
    signs[1::2] = -1.0
    return signs


def to_momentum(psi, constants=PhysicalConstants()):
    """Momentum-space profile phi(p) = (2 pi hbar)^(-1/2) integral e^{-ipx/hbar} psi(x) dx.

    On a symmetric periodic power-of-two grid every grid-offset phase reduces
    to an exact alternating sign, so the discrete map is
    phi_j = dx / sqrt(2 pi hbar) * s (-1)^j FFT[(-1)^k psi_k]_j with
    s = (-1)^(n/2); its inverse is ``to_position``.
    """
    grid = psi.grid
    _require_transformable(grid, Space.POSITION)
    hbar = constants.hbar
    n = grid.n_points
    signs = _alternating_signs(n)
    spectrum = np.fft.fft(signs * psi.samples)
    corner = -1.0 if (n // 2) % 2 else 1.0
    samples = grid.dx / math.sqrt(2.0 * math.pi * hbar) * corner * signs * spectrum
    return Wavefunction(conjugate_grid(grid, constants), samples, time=psi.time)


def to_position(phi, constants=PhysicalConstants()):
    """Position-space profile psi(x) = (2 pi hbar)^(-1/2) integral e^{+ipx/hbar} phi(p) dp."""
    grid = phi.grid
    _require_transformable(grid, Space.MOMENTUM)
    hbar = constants.hbar
    n = grid.n_points
    signs = _alternating_signs(n)
    spectrum = np.fft.ifft(signs * phi.samples)
    corner = -1.0 if (n // 2) % 2 else 1.0
    samples = grid.dx * n / math.sqrt(2.0 * math.pi * hbar) * corner * signs * spectrum
    return Wavefunction(conjugate_grid(grid, constants), samples, time=phi.time)


@dataclass(frozen=True)
class PropagatorConfig:
    """Strang-splitting step size and count; the horizon is dt * n_steps."""

    dt: float
    n_steps: int

    def __post_init__(self):
        if not (self.dt > 0.0):
            raise ConfigurationError("dt must be positive")
        if self.n_steps < 1:
            raise ConfigurationError("n_steps must be at least 1")

    @property
    def horizon(self):
        return self.dt * self.n_steps

    @classmethod
    def for_horizon(cls, horizon, n_steps):
        return cls(dt=horizon / n_steps, n_steps=n_steps)


def propagate(psi0, system, config, constants=PhysicalConstants(), callback=None):
    """Propagate a state with the symmetric split-operator scheme.

    Each step applies exp(-iV dt/2 hbar) exp(-iT dt/hbar) exp(-iV dt/2 hbar),
    the kinetic factor acting diagonally in FFT space; the scheme is unitary
    and second-order accurate in dt.

    Parameters
    ----------
    psi0 : Wavefunction
        Initial state on a periodic-convention position grid.
    system : SystemSpec
    config : PropagatorConfig
    constants : PhysicalConstants
    callback : callable, optional
        Invoked as ``callback(t, samples)`` with a read-only view of the
        current samples, once at t = 0 and after every step.  The view is
        only valid during the call.

    Returns
    -------
    Wavefunction
        The state at t = psi0.time + dt * n_steps.

    Raises
    ------
    GridTruncationError
        On inverted-oscillator runs whose packet reaches within 10 grid
        spacings of the edge; enlarge the grid or shorten the horizon.
    """
    grid = psi0.grid
    if grid.space is not Space.POSITION or not grid.periodic:
        raise ConfigurationError("propagation needs a periodic position-space grid")
    hbar, m = constants.hbar, constants.mass
    dt = config.dt
    x = grid.points
    v = system.potential(x, constants)
    half_kick = np.exp(-0.5j * v * dt / hbar)
    p = 2.0 * math.pi * hbar * np.fft.fftfreq(grid.n_points, d=grid.dx)
    drift = np.exp(-1j * p**2 * dt / (2.0 * m * hbar))
    guard = system.kind is SystemKind.INVERTED

    psi = psi0.samples.astype(complex)
    view = psi.view()
    view.setflags(write=False)
    if callback is not None:
        callback(psi0.time, view)
    for step in range(1, config.n_steps + 1):
        psi *= half_kick
        psi = np.fft.ifft(drift * np.fft.fft(psi))
        psi *= half_kick
        t = psi0.time + step * dt
        if guard:
            magnitude = np.abs(psi)
            peak = magnitude.max()
            edge = max(magnitude[:_EDGE_ZONE].max(), magnitude[-_EDGE_ZONE:].max())
            if edge > BOUNDARY_TOL * peak:
                raise GridTruncationError(
                    f"runaway packet reached the edge zone at t = {t:.6g} "
                    f"(edge fraction {edge / peak:.3e}); enlarge the grid or "
                    "shorten the horizon",
                    edge_fraction=edge / peak,
                )
        view = psi.view()
        view.setflags(write=False)
        if callback is not None:
            callback(t, view)
    return Wavefunction(grid, psi, time=psi0.time + config.n_steps * dt)


@dataclass(frozen=True)
class SpectralExpansion:
    """Oscillator-eigenbasis coefficients of a state and the matching ladder."""

    coefficients: np.ndarray
    energies: np.ndarray
    n0: int
    Omega0: float
    hbar: float
    tail_mass: float

    def __post_init__(self):
        for name in ("coefficients", "energies"):
            arr = np.asarray(getattr(self, name))
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def weights(self):
        """Occupation probabilities |a_n|^2."""
        return np.abs(self.coefficients) ** 2


def _eigenfunctions(xi, n_max):
    """Normalized oscillator eigenfunctions of the scaled coordinate, rows 0..n_max.

    Uses the stable three-term recurrence on the normalized functions;
    coefficient-form polynomials overflow near n ~ 100 while these stay O(1).
    """
    table = np.empty((n_max + 1, xi.size))
    table[0] = math.pi**-0.25 * np.exp(-0.5 * xi**2)
    if n_max >= 1:
        table[1] = math.sqrt(2.0) * xi * table[0]
    for n in range(1, n_max):
        table[n + 1] = math.sqrt(2.0 / (n + 1)) * xi * table[n] - math.sqrt(
            n / (n + 1.0)
        ) * table[n - 1]
    return table


def expand_in_oscillator_basis(
    psi, omega, n_max, constants=PhysicalConstants(), tail_tol=1e-8
):
    """Expand a position-space state over oscillator eigenstates 0..n_max.

    Parameters
    ----------
    psi : Wavefunction
    omega : float
        Oscillator frequency defining the basis.
    n_max : int
        Highest kept level.
    constants : PhysicalConstants
    tail_tol : float
        Maximum probability allowed outside the kept levels.

    Returns
    -------
    SpectralExpansion

    Raises
    ------
    BasisTruncationError
        When the tail mass exceeds ``tail_tol``; carries a suggested n_max
        extrapolated from the observed coefficient decay.
    """
    if psi.grid.space is not Space.POSITION:
        raise ConfigurationError("expansion needs a position-space state")
    if not (omega > 0.0):
        raise ConfigurationError("omega must be positive")
    if n_max < 0:
        raise ConfigurationError("n_max must be non-negative")
    hbar, m = constants.hbar, constants.mass
    beta0 = math.sqrt(hbar / (m * omega))
    xi = psi.grid.points / beta0
    basis = _eigenfunctions(xi, n_max) / math.sqrt(beta0)
    coeffs = np.array([quadrature(psi.grid, row * psi.samples) for row in basis])
    weights = np.abs(coeffs) ** 2
    total = float(weights.sum())
    norm = float(np.real(quadrature(psi.grid, psi.density())))
    tail = norm - total
    if tail > tail_tol:
        suggestion = _suggest_n_max(weights, tail, tail_tol, n_max)
        raise BasisTruncationError(
            f"tail mass {tail:.3e} above tolerance {tail_tol:.1e}; "
            f"raise n_max to about {suggestion}",
            tail_mass=tail,
            suggested_n_max=suggestion,
        )
    n0 = int(round(float(np.arange(n_max + 1) @ weights) / total))
    energies = hbar * omega * (np.arange(n_max + 1) + 0.5)
    return SpectralExpansion(
        coefficients=coeffs,
        energies=energies,
        n0=n0,
        Omega0=float(energies[n0]) / hbar,
        hbar=hbar,
        tail_mass=max(tail, 0.0),
    )


def _suggest_n_max(weights, tail, tail_tol, n_max):
    # extrapolate the geometric decay of the last kept occupations
    nonzero = np.flatnonzero(weights > 0.0)
    if nonzero.size >= 6:
        lo, hi = nonzero[-6], nonzero[-1]
        ratio = (weights[hi] / weights[lo]) ** (1.0 / (hi - lo))
        if 0.0 < ratio < 1.0:
            extra = math.ceil(math.log(tail_tol / tail) / math.log(ratio))
            return n_max + max(extra, 1) + 4
    return 2 * n_max if n_max else 16


def autocorr_from_spectrum(expansion, t):
    """A(t) = sum_n |a_n|^2 exp(+i E_n t / hbar) from an eigenbasis expansion."""
    phases = np.exp(1j * expansion.energies * t / expansion.hbar)
    return complex(expansion.weights @ phases)


def anticorr_from_spectrum(expansion, t):
    """Mirrored overlap from an eigenbasis expansion.

    Eigenstate n has parity (-1)^n, so reflecting the evolved state flips
    the sign of every odd-level weight in the spectral sum.
    """
    weights = expansion.weights.copy()
    weights[1::2] *= -1.0
    phases = np.exp(1j * expansion.energies * t / expansion.hbar)
    return complex(weights @ phases)
