"""Closed-form wave packets, autocorrelations and moments.

Four systems share the same initial Gaussian: free motion, uniform
acceleration (V = -Fx), the harmonic oscillator and the inverted oscillator
(V = -+ m omega^2 x^2 / 2).  The oscillator autocorrelation is available in
closed form for two parameter families:

* natural width, beta = beta0 = sqrt(hbar/(m omega)), any center/boost
  (a displaced coherent state);
* centered packets, x0 = p0 = 0, any width (a squeezed vacuum).

Everything else goes through the grid-numerics routes in ``numeric``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    ConfigurationError,
    Grid,
    NoClosedFormError,
    PacketParams,
    Space,
    SystemKind,
    SystemSpec,
    UnsupportedObservableError,
    Wavefunction,
    continuous_sqrt,
)

__all__ = [
    "OscillatorKernel",
    "Observables",
    "AutocorrSample",
    "eval_wavefunction",
    "closed_form_autocorr",
    "closed_form_anticorr",
    "moments",
    "free_modulus_sq",
    "acceleration_modulus_sq",
]

_CASE_RTOL = 1e-12


class OscillatorKernel:
    """Time-dependent pieces of the oscillator packet at one instant.

    For the harmonic well the width kernel is
    L(t) = beta cos(wt) + i (hbar / m w beta) sin(wt); the inverted barrier
    replaces the circular functions by hyperbolic ones,
    B(t) = beta cosh(wt) + i (hbar / m w beta) sinh(wt).  ``s_of_xt`` returns
    the quadratic exponent bracket S[x, t]; the packet is
    exp(S / (2 beta L)) / sqrt(sqrt(pi) L).
    """

    def __init__(self, params: PacketParams, system: SystemSpec, t: float):
        if system.kind not in (SystemKind.HARMONIC, SystemKind.INVERTED):
            raise ConfigurationError("oscillator kernel needs an oscillator system")
        self.params = params
        self.system = system
        self.t = t
        hbar = params.constants.hbar
        m = params.constants.mass
        beta = params.beta
        w = system.omega
        if system.kind is SystemKind.HARMONIC:
            self._c = math.cos(w * t)
            self._s = math.sin(w * t)
            # sign of the i*sin x^2 term flips between the two kinds
            self._x2_sign = 1.0
            self.L_of_t = beta * self._c + 1j * (hbar / (m * w * beta)) * self._s
            self.B_of_t = None
            self.width_kernel = self.L_of_t
        else:
            self._c = math.cosh(w * t)
            self._s = math.sinh(w * t)
            self._x2_sign = -1.0
            self.B_of_t = beta * self._c + 1j * (hbar / (m * w * beta)) * self._s
            self.L_of_t = None
            self.width_kernel = self.B_of_t

    def s_of_xt(self, x):
        """Quadratic exponent bracket S[x, t] on an array of positions."""
        p = self.params
        hbar = p.constants.hbar
        m = p.constants.mass
        w = self.system.omega
        beta2 = p.beta**2
        c, s = self._c, self._s
        x = np.asarray(x, dtype=float)
        return (
            -p.x0**2 * c
            + 2.0 * x * p.x0
            - x**2 * (c + self._x2_sign * 1j * m * w * beta2 * s / hbar)
            - 2.0 * p.x0 * p.p0 * s / (m * w)
            + 2j * beta2 * p.p0 * x / hbar
            - 1j * beta2 * p.p0**2 * s / (m * w * hbar)
        )

    def sqrt_width_kernel(self):
        """Phase-continuous sqrt of the width kernel, seeded +sqrt(beta) at t=0.

        The harmonic kernel winds around the origin once per period, so its
        continuous root is exp(i w t / 2) times the principal root of the
        non-winding factor; the inverted kernel stays in the right half-plane
        and the principal root is already continuous.
        """
        p = self.params
        hbar = p.constants.hbar
        m = p.constants.mass
        w = self.system.omega
        beta = p.beta
        if self.system.kind is SystemKind.INVERTED:
            return continuous_sqrt(self.B_of_t)
        conjugate_width = hbar / (m * w * beta)
        fwd = 0.5 * (beta + conjugate_width)
        back = 0.5 * (beta - conjugate_width)
        theta = w * self.t
        return cmath.exp(0.5j * theta) * continuous_sqrt(
            fwd + back * cmath.exp(-2j * theta)
        )


@dataclass(frozen=True)
class Observables:
    """Moments of a packet at one instant; energy entries only when available."""

    mean_x: float
    spread_x: float
    mean_H: float | None = None
    mean_H2: float | None = None
    delta_H: float | None = None


@dataclass(frozen=True)
class AutocorrSample:
    """A(t) = <psi_t | psi_0> at one instant, plus the mirrored overlap if any."""

    t: float
    A: complex
    A_bar: complex | None = None

    @property
    def modulus_sq(self):
        return abs(self.A) ** 2

    @property
    def hilbert_distance(self):
        """Squared Hilbert-space distance ||psi_t - psi_0||^2 = 2 (1 - Re A)."""
        return 2.0 * (1.0 - self.A.real)


def _natural_width(params, omega):
    hbar = params.constants.hbar
    beta0 = math.sqrt(hbar / (params.constants.mass * omega))
    return math.isclose(params.beta, beta0, rel_tol=_CASE_RTOL), beta0


def _centered(params, beta0):
    hbar = params.constants.hbar
    return (
        abs(params.x0) <= _CASE_RTOL * beta0
        and abs(params.p0) <= _CASE_RTOL * hbar / beta0
    )


def eval_wavefunction(system, params, space, grid, t):
    """Closed-form packet for ``system`` sampled on ``grid`` at time ``t``.

    Parameters
    ----------
    system : SystemSpec
    params : PacketParams
    space : Space
        Must match ``grid.space``.  Momentum-space forms exist for free and
        uniformly accelerated motion only; oscillator momentum profiles are
        obtained by transforming the position-space state.
    grid : Grid
    t : float

    Returns
    -------
    Wavefunction
    """
    if grid.space is not space:
        raise ConfigurationError("grid.space does not match the requested space")
    consts = params.constants
    hbar, m = consts.hbar, consts.mass
    if space is Space.MOMENTUM:
        if system.kind is SystemKind.FREE:
            return _free_momentum(params, grid, t)
        if system.kind is SystemKind.UNIFORM_ACCELERATION:
            return _accelerated_momentum(params, system.force, grid, t)
        raise NoClosedFormError(
            "no closed momentum-space form for oscillator packets; evaluate in "
            "position space and apply numeric.to_momentum"
        )
    if system.kind is SystemKind.FREE:
        return _accelerated_position(params, 0.0, grid, t)
    if system.kind is SystemKind.UNIFORM_ACCELERATION:
        return _accelerated_position(params, system.force, grid, t)
    kernel = OscillatorKernel(params, system, t)
    root = kernel.sqrt_width_kernel()
    samples = np.exp(kernel.s_of_xt(grid.points) / (2.0 * params.beta * kernel.width_kernel))
    samples = samples / (math.pi**0.25 * root)
    return Wavefunction(grid, samples, time=t)


def _free_momentum(params, grid, t):
    hbar = params.constants.hbar
    m = params.constants.mass
    p = grid.points
    profile = math.sqrt(params.alpha / math.sqrt(math.pi)) * np.exp(
        -(params.alpha**2) * (p - params.p0) ** 2 / 2.0
    )
    phases = np.exp(-1j * p * params.x0 / hbar) * np.exp(-1j * p**2 * t / (2.0 * m * hbar))
    return Wavefunction(grid, profile * phases, time=t)


def _accelerated_momentum(params, force, grid, t):
    # cubic phase written in its F-cancelled form so F = 0 is regular
    hbar = params.constants.hbar
    m = params.constants.mass
    p = grid.points
    shifted = p - force * t
    profile = math.sqrt(params.alpha / math.sqrt(math.pi)) * np.exp(
        -(params.alpha**2) * (shifted - params.p0) ** 2 / 2.0
    )
    cubic = (-3.0 * p**2 * t + 3.0 * p * force * t**2 - force**2 * t**3) / (
        6.0 * m * hbar
    )
    phases = np.exp(-1j * shifted * params.x0 / hbar) * np.exp(1j * cubic)
    return Wavefunction(grid, profile * phases, time=t)


def _accelerated_position(params, force, grid, t):
    # F = 0 reduces exactly to the free packet
    hbar = params.constants.hbar
    m = params.constants.mass
    beta = params.beta
    x = grid.points
    z = 1.0 + 1j * t / params.t0
    center = params.x0 + params.p0 * t / m + force * t**2 / (2.0 * m)
    pref = 1.0 / continuous_sqrt(math.sqrt(math.pi) * beta * z)
    carried = np.exp(
        1j * (params.p0 + force * t) * (x - params.x0 - params.p0 * t / (2.0 * m)) / hbar
    )
    kick_phase = cmath.exp(1j * force * t * (params.x0 - force * t**2 / (6.0 * m)) / hbar)
    envelope = np.exp(-((x - center) ** 2) / (2.0 * beta**2 * z))
    return Wavefunction(grid, pref * kick_phase * carried * envelope, time=t)


def closed_form_autocorr(system, params, t):
    """Closed-form autocorrelation sample A(t) for the supported cases.

    Free and uniformly accelerated packets are covered for all parameters.
    Harmonic packets need natural width or a centered packet; the inverted
    barrier needs both (natural width and x0 = 0).  A(0) = 1 and both the
    modulus and phase are continuous in t.
    """
    consts = params.constants
    hbar, m = consts.hbar, consts.mass
    if system.kind is SystemKind.FREE:
        return AutocorrSample(t, _free_autocorr(params, t))
    if system.kind is SystemKind.UNIFORM_ACCELERATION:
        F = system.force
        z = 1.0 - 1j * t / (2.0 * params.t0)
        tau = t / (2.0 * params.t0)
        top = 2j * params.p0**2 * t / (m * hbar) - (params.alpha * F * t) ** 2 * (
            1.0 + tau**2
        )
        kick = cmath.exp(-1j * F * t * (params.x0 - F * t**2 / (6.0 * m)) / hbar)
        A = cmath.exp(top / (4.0 * z)) / continuous_sqrt(z) * kick
        return AutocorrSample(t, A)
    if system.kind is SystemKind.HARMONIC:
        w = system.omega
        natural, beta0 = _natural_width(params, w)
        theta = w * t
        if natural:
            weight = params.x0**2 / (2.0 * beta0**2) + beta0**2 * params.p0**2 / (
                2.0 * hbar**2
            )
            A = cmath.exp(0.5j * theta) * cmath.exp(
                -weight * ((1.0 - math.cos(theta)) - 1j * math.sin(theta))
            )
            return AutocorrSample(t, A)
        if _centered(params, beta0):
            r = beta0**2 / params.beta**2
            u = 0.5 * (r + 1.0 / r)
            A = (
                math.sqrt(2.0)
                * cmath.exp(0.5j * theta)
                / continuous_sqrt((1.0 + u) + (1.0 - u) * cmath.exp(2j * theta))
            )
            return AutocorrSample(t, A)
        raise NoClosedFormError(
            "harmonic autocorrelation in closed form needs natural width "
            "(beta = sqrt(hbar/m omega)) or a centered packet (x0 = p0 = 0); "
            "use the propagation or eigenbasis routes otherwise"
        )
    # inverted barrier
    w = system.omega
    natural, beta0 = _natural_width(params, w)
    if not natural or abs(params.x0) > _CASE_RTOL * beta0:
        raise NoClosedFormError(
            "inverted-oscillator autocorrelation in closed form needs natural "
            "width and x0 = 0; use the propagation route otherwise"
        )
    c = math.cosh(w * t)
    s = math.sinh(w * t)
    braces = (c - 1.0 + 1j * s * (2.0 * c - 1.0)) / (c * (c - 1j * s))
    A = cmath.exp(params.p0**2 / (2.0 * m * w * hbar) * braces) / math.sqrt(c)
    return AutocorrSample(t, A)


def _free_autocorr(params, t):
    z = 1.0 - 1j * t / (2.0 * params.t0)
    return cmath.exp(
        1j * params.alpha**2 * params.p0**2 * t / (2.0 * params.t0 * z)
    ) / continuous_sqrt(z)


def free_modulus_sq(params, t, p0_squared=None):
    """|A(t)|^2 for the free packet.

    ``p0_squared`` overrides p0^2; passing
    p0^2 + (F t0)^2 (1 + (t/2 t0)^2) maps this onto the accelerated result.
    """
    if p0_squared is None:
        p0_squared = params.p0**2
    tau = t / (2.0 * params.t0)
    return math.exp(
        -2.0 * params.alpha**2 * p0_squared * tau**2 / (1.0 + tau**2)
    ) / math.sqrt(1.0 + tau**2)


def acceleration_modulus_sq(params, force, t):
    """|A(t)|^2 for the uniformly accelerated packet."""
    tau = t / (2.0 * params.t0)
    boosted = params.p0**2 + (force * params.t0) ** 2 * (1.0 + tau**2)
    return free_modulus_sq(params, t, p0_squared=boosted)


def closed_form_anticorr(system, params, t):
    """Mirrored-overlap sample Abar(t) = <Pi psi_t | psi_0> for the
    natural-width harmonic packet.

    The packet repeats on the opposite side of the well half a period early,
    so Abar(t) = i A(t - T_cl/2); the modulus peaks at odd half-periods.
    """
    if system.kind is not SystemKind.HARMONIC:
        raise NoClosedFormError("mirrored overlap is only derived for the harmonic well")
    natural, _ = _natural_width(params, system.omega)
    if not natural:
        raise NoClosedFormError("mirrored overlap in closed form needs natural width")
    half_period = math.pi / system.omega
    return 1j * closed_form_autocorr(system, params, t - half_period).A


def moments(system, params, t, energy=False):
    """Position moments (and free-particle energy moments) at time ``t``.

    With ``energy=True`` the free-particle <H>, <H^2> and dH are filled in;
    requesting energy moments for any other system raises
    UnsupportedObservableError.
    """
    consts = params.constants
    hbar, m = consts.hbar, consts.mass
    if system.kind in (SystemKind.FREE, SystemKind.UNIFORM_ACCELERATION):
        force = system.force if system.kind is SystemKind.UNIFORM_ACCELERATION else 0.0
        mean_x = params.x0 + params.p0 * t / m + force * t**2 / (2.0 * m)
        spread_x = params.spread_x0 * math.sqrt(1.0 + (t / params.t0) ** 2)
    else:
        w = system.omega
        kernel = OscillatorKernel(params, system, t)
        if system.kind is SystemKind.HARMONIC:
            mean_x = params.x0 * math.cos(w * t) + params.p0 * math.sin(w * t) / (m * w)
        else:
            mean_x = params.x0 * math.cosh(w * t) + params.p0 * math.sinh(w * t) / (m * w)
        spread_x = abs(kernel.width_kernel) / math.sqrt(2.0)
    if not energy:
        return Observables(mean_x=mean_x, spread_x=spread_x)
    if system.kind is not SystemKind.FREE:
        raise UnsupportedObservableError(
            "energy moments are only available for the free packet"
        )
    a2 = params.alpha**2
    mean_H = (params.p0**2 + 1.0 / (2.0 * a2)) / (2.0 * m)
    mean_H2 = (params.p0**4 + 3.0 * params.p0**2 / a2 + 0.75 / a2**2) / (2.0 * m) ** 2
    delta_H = math.sqrt(mean_H2 - mean_H**2)
    return Observables(
        mean_x=mean_x, spread_x=spread_x, mean_H=mean_H, mean_H2=mean_H2, delta_H=delta_H
    )
