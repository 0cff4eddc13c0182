"""Two-qubit XY Heisenberg model with DM coupling and two thermal baths."""

from ._version import __version__
from .entanglement import (
    ConcurrenceResult,
    asymptotic_concurrence,
    concurrence_general,
    concurrence_x,
    eof,
)
from .errors import (
    ConfigError,
    DegenerateSpectrum,
    DmxyError,
    NearDegenerateWarning,
    NoUniqueSteadyState,
    NotAnXState,
    StepSizeTooLarge,
    ZeroFrequency,
)
from .model import DensityMatrix, Spectrum, SystemParams, critical_D, gibbs_state, hamiltonian_matrix, spectrum
from .propagator import asymptotic_state, evolve, evolve_series, population_propagator
from .rates import BathParams, RateSet, build_rates, spectral_rate

__all__ = [
    "__version__",
    "BathParams",
    "ConcurrenceResult",
    "ConfigError",
    "DegenerateSpectrum",
    "DensityMatrix",
    "DmxyError",
    "NearDegenerateWarning",
    "NoUniqueSteadyState",
    "NotAnXState",
    "RateSet",
    "Spectrum",
    "StepSizeTooLarge",
    "SystemParams",
    "ZeroFrequency",
    "asymptotic_concurrence",
    "asymptotic_state",
    "build_rates",
    "concurrence_general",
    "concurrence_x",
    "critical_D",
    "eof",
    "evolve",
    "evolve_series",
    "gibbs_state",
    "hamiltonian_matrix",
    "population_propagator",
    "spectral_rate",
    "spectrum",
]
