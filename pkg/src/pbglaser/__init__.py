"""Driven two-level emitter + cavity in a band-gap-filtered reservoir.

Simulator for steady-state field moments, quadrature squeezing, and
cavity-field spectra of a strongly driven single-emitter laser whose
spontaneous emission is shaped by a frequency-dependent (photonic band gap)
reservoir, with and without the non-secular emitter-cavity coupling terms,
cross-validated against a brute-force density-matrix solver.
"""

from .model import (
    DressedParams,
    ReservoirProfile,
    SystemParams,
    band_edge_profile,
    derive_dressed,
    dressed_from_rates,
)
from .moments import (
    MOMENT_NAMES,
    MomentSystem,
    MomentVector,
    assemble,
    closed_form_steady,
    evolve,
    resonant_field_moments,
    steady_state,
)

__version__ = "0.1.0"

__all__ = [
    "SystemParams",
    "ReservoirProfile",
    "DressedParams",
    "band_edge_profile",
    "derive_dressed",
    "dressed_from_rates",
    "MOMENT_NAMES",
    "MomentVector",
    "MomentSystem",
    "assemble",
    "steady_state",
    "evolve",
    "closed_form_steady",
    "resonant_field_moments",
    "__version__",
]
