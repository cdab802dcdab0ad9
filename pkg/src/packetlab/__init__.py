"""Gaussian wave-packet dynamics and autocorrelation functions.

Closed-form packets and autocorrelations A(t) = <psi_t|psi_0> for four
one-dimensional systems (free, uniform acceleration, harmonic and inverted
oscillator), cross-checked by grid numerics: quadrature overlaps, FFT
split-operator propagation and oscillator-eigenbasis expansions.
"""

from .core import (
    BOUNDARY_TOL,
    BasisTruncationError,
    ConfigurationError,
    Grid,
    GridTruncationError,
    InsufficientStencilError,
    NoClosedFormError,
    NoSaturationLawError,
    PacketLabError,
    PacketParams,
    PhysicalConstants,
    Space,
    SystemKind,
    SystemSpec,
    UnsupportedObservableError,
    Wavefunction,
    continuous_sqrt,
    derived_scales,
    norm_squared,
    quadrature,
)
from .analytic import (
    AutocorrSample,
    Observables,
    OscillatorKernel,
    acceleration_modulus_sq,
    closed_form_anticorr,
    closed_form_autocorr,
    eval_wavefunction,
    free_modulus_sq,
    moments,
)
from .numeric import (
    PropagatorConfig,
    SpectralExpansion,
    anticorr_from_spectrum,
    autocorr_from_spectrum,
    conjugate_grid,
    expand_in_oscillator_basis,
    overlap,
    propagate,
    reflect,
    to_momentum,
    to_position,
)
from .analysis import (
    AutocorrSeries,
    BoundReport,
    TimescaleReport,
    assemble_series,
    mandelstam_check,
    saturation_asymptote,
    timescales,
)

__version__ = "0.1.0"
