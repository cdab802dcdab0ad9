"""Derived analyses: spectral timescales, the energy-time bound on overlap
decay, long-time saturation laws and autocorrelation series assembly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    ConfigurationError,
    InsufficientStencilError,
    NoSaturationLawError,
    SystemKind,
)
from .analytic import closed_form_autocorr, moments

__all__ = [
    "TimescaleReport",
    "BoundReport",
    "AutocorrSeries",
    "timescales",
    "mandelstam_check",
    "saturation_asymptote",
    "assemble_series",
]

# slopes or curvatures below this fraction of the local energy scale are
# treated as exactly flat and map to an infinite timescale
_FLAT_TOL = 1e-12


@dataclass(frozen=True)
class TimescaleReport:
    """Classical period and revival time read off a discrete spectrum."""

    T_cl: float
    T_rev: float
    n0: int
    Omega0: float


def timescales(energies, n0, hbar=1.0):
    """Classical and revival timescales from the spectrum near level n0.

    Central differences around n0 estimate the slope and curvature of
    E(n); T_cl = 2 pi hbar / |E'|, T_rev = 4 pi hbar / |E''|.  Flat
    derivatives (relative to the local energy scale and slope) yield
    infinite timescales rather than overflow.

    Raises
    ------
    InsufficientStencilError
        When n0 has no neighbour on each side.
    """
    energies = np.asarray(energies, dtype=float)
    if energies.ndim != 1:
        raise ConfigurationError("energies must be a one-dimensional sequence")
    if not (0 < n0 < energies.size - 1):
        raise InsufficientStencilError(
            f"central differences need a level on each side of n0 = {n0} "
            f"(spectrum has {energies.size} levels)"
        )
    if not (hbar > 0.0):
        raise ConfigurationError("hbar must be positive")
    below, at, above = energies[n0 - 1 : n0 + 2]
    slope = 0.5 * (above - below)
    curvature = above - 2.0 * at + below
    scale = max(abs(below), abs(at), abs(above), 1.0)
    if abs(slope) <= _FLAT_TOL * scale:
        t_cl = math.inf
    else:
        t_cl = 2.0 * math.pi * hbar / abs(slope)
    if abs(curvature) <= _FLAT_TOL * max(abs(slope), _FLAT_TOL * scale):
        t_rev = math.inf
    else:
        t_rev = 4.0 * math.pi * hbar / abs(curvature)
    return TimescaleReport(T_cl=t_cl, T_rev=t_rev, n0=int(n0), Omega0=at / hbar)


@dataclass(frozen=True)
class BoundReport:
    """Overlap decay against the energy-spread bound cos^2(dH t / hbar).

    The bound holds for t in [0, pi hbar / 2 dH]; ``min_margin`` is the
    smallest value of |A|^2 - cos^2 on the sampled window, ``curvature_ratio``
    compares the fitted short-time quadratic coefficients of both sides
    (analytically equal, so the ratio tends to 1), and
    ``quartic_coefficient`` is the fitted leading coefficient of the margin.
    """

    t_grid: np.ndarray
    modulus_sq: np.ndarray
    bound: np.ndarray
    valid_horizon: float
    delta_H: float
    min_margin: float
    curvature_ratio: float
    quartic_coefficient: float

    def __post_init__(self):
        for name in ("t_grid", "modulus_sq", "bound"):
            arr = np.asarray(getattr(self, name), dtype=float).copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def mandelstam_check(system, params, n_t=400):
    """Check |A(t)|^2 >= cos^2(dH t / hbar) over the bound's validity window.

    Needs closed-form energy moments, so the system must support them
    (currently the free particle).
    """
    if n_t < 8:
        raise ConfigurationError("n_t must be at least 8")
    obs = moments(system, params, 0.0, energy=True)
    delta_h = obs.delta_H
    hbar = params.constants.hbar
    horizon = 0.5 * math.pi * hbar / delta_h
    t_grid = np.linspace(0.0, horizon, n_t)
    modulus_sq = np.array(
        [closed_form_autocorr(system, params, float(t)).modulus_sq for t in t_grid]
    )
    bound = np.cos(delta_h * t_grid / hbar) ** 2
    min_margin = float(np.min(modulus_sq - bound))

    # short-time fits: expand both sides as 1 - c t^2 + O(t^4) on a window
    # small enough for the quartic term to act as a controlled correction
    ts = horizon * np.linspace(1e-3, 1e-2, 24)
    lhs = np.array(
        [closed_form_autocorr(system, params, float(t)).modulus_sq for t in ts]
    )
    rhs = np.cos(delta_h * ts / hbar) ** 2
    t_sq = ts**2
    c_lhs = np.polynomial.polynomial.polyfit(t_sq, (1.0 - lhs) / t_sq, 1)[0]
    c_rhs = np.polynomial.polynomial.polyfit(t_sq, (1.0 - rhs) / t_sq, 1)[0]
    quartic = np.polynomial.polynomial.polyfit(t_sq, (lhs - rhs) / t_sq**2, 1)[0]
    return BoundReport(
        t_grid=t_grid,
        modulus_sq=modulus_sq,
        bound=bound,
        valid_horizon=horizon,
        delta_H=delta_h,
        min_margin=min_margin,
        curvature_ratio=float(c_lhs / c_rhs),
        quartic_coefficient=float(quartic),
    )


def saturation_asymptote(system, params):
    """Constant approached by the scaled long-time overlap decay.

    Free particle: |A(t)|^2 sqrt(1 + (t/2t0)^2) tends to exp(-2 alpha^2 p0^2).
    Inverted oscillator at natural width: |A(t)|^2 e^{omega t} tends to
    2 exp(-p0^2 / (m omega hbar)) exp(-x0^2 / beta0^2).

    Other systems have no single-constant law: the uniformly accelerated
    packet decays like a Gaussian in t and the oscillator is periodic.
    """
    kind = system.kind
    consts = params.constants
    if kind is SystemKind.FREE:
        return math.exp(-2.0 * (params.alpha * params.p0) ** 2)
    if kind is SystemKind.INVERTED:
        beta0_sq = consts.hbar / (consts.mass * system.omega)
        if not math.isclose(params.beta**2, beta0_sq, rel_tol=1e-12):
            raise NoSaturationLawError(
                "the runaway decay law is derived for a natural-width packet"
            )
        return 2.0 * math.exp(
            -params.p0**2 / (consts.mass * system.omega * consts.hbar)
            - params.x0**2 / beta0_sq
        )
    raise NoSaturationLawError(
        f"no single-constant saturation law for {kind.value}: "
        "accelerated packets decay like a Gaussian in t, oscillators are periodic"
    )


@dataclass(frozen=True)
class AutocorrSeries:
    """Autocorrelation samples on a time grid with derived columns.

    ``anticorr`` optionally carries the mirrored overlap on the same grid.
    """

    t: np.ndarray
    values: np.ndarray
    anticorr: np.ndarray | None = None

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float).copy()
        values = np.asarray(self.values, dtype=complex).copy()
        if t.ndim != 1 or values.shape != t.shape:
            raise ConfigurationError("t and values must be matching 1-d arrays")
        t.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "values", values)
        if self.anticorr is not None:
            anti = np.asarray(self.anticorr, dtype=complex).copy()
            if anti.shape != t.shape:
                raise ConfigurationError("anticorr must match the time grid")
            anti.setflags(write=False)
            object.__setattr__(self, "anticorr", anti)

    @property
    def modulus_sq(self):
        return np.abs(self.values) ** 2

    @property
    def hilbert_distance_sq(self):
        """||psi_t - psi_0||^2 = 2 (1 - Re A) for normalized states."""
        return 2.0 * (1.0 - self.values.real)


def assemble_series(sampler, t_grid, anticorr_sampler=None):
    """Evaluate a scalar autocorrelation sampler over a strictly increasing grid."""
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size < 1:
        raise ConfigurationError("t_grid must be a non-empty 1-d array")
    if t.size > 1 and not np.all(np.diff(t) > 0.0):
        raise ConfigurationError("t_grid must be strictly increasing")
    values = np.array([complex(sampler(float(ti))) for ti in t])
    anticorr = None
    if anticorr_sampler is not None:
        anticorr = np.array([complex(anticorr_sampler(float(ti))) for ti in t])
    return AutocorrSeries(t=t, values=values, anticorr=anticorr)
