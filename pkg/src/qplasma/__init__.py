"""Hydrogen-like atom in a screened quantum plasma under AB flux, magnetic and electric fields."""

from .errors import (
    DegenerateIndexError,
    PhysicsDomainError,
    QuadratureError,
    RadiusDomainError,
    UnboundedPotentialError,
    WavefunctionUndefinedError,
)
from .model import (
    PlasmaFieldConfig,
    QuantumNumbers,
    SeriesCoefficients,
    SigmaIndex,
    constant_shift,
    effective_potential,
    series_coefficients,
    series_potential,
    sigma_index,
)
from .susy import (
    EnergyBreakdown,
    SuperpotentialCoeffs,
    WavefunctionSample,
    first_order_energy,
    first_order_energy_quadrature,
    full_wavefunction,
    laguerre,
    normalization,
    second_order_energy,
    second_order_energy_quadrature,
    superpotential_coeffs,
    third_order_energy_quadrature,
    total_energy,
    unperturbed_energy,
    unperturbed_wavefunction,
)

__version__ = "0.1.0"
