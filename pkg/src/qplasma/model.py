"""Plasma/field configuration, state labels and the effective radial potential.

All quantities are in atomic units unless the constants on
:class:`PlasmaFieldConfig` are changed.  The angular quantum number only
ever enters through ``nu = m + xi``, so shifting ``(m, xi) -> (m + k, xi - k)``
leaves every result unchanged.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateIndexError, PhysicsDomainError, RadiusDomainError


@dataclass(frozen=True)
class PlasmaFieldConfig:
    """Physical environment of the atom.

    ``g = 0`` selects the Debye-Hueckel (weakly coupled) screening and
    ``g = 1`` the exponential-cosine (dense quantum plasma) screening.
    ``xi`` is the Aharonov-Bohm flux in units of the flux quantum.
    """

    A: float = 1.0
    lambda_D: float = 20.0
    g: int = 1
    F: float = 0.0
    B: float = 0.0
    xi: float = 0
    mu: float = 1.0
    hbar: float = 1.0
    e: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        if not self.lambda_D > 0:
            raise ValueError(f"lambda_D must be > 0, got {self.lambda_D}")
        if not self.A >= 0:
            raise ValueError(f"A must be >= 0, got {self.A}")
        for name in ("mu", "hbar", "e", "c"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")
        if self.g not in (0, 1):
            raise ValueError(f"g must be 0 or 1, got {self.g}")
        if self.F < 0 or self.B < 0:
            raise ValueError("field strengths F and B must be >= 0")
        if float(self.xi) != round(float(self.xi)):
            warnings.warn(
                f"non-integer AB flux xi={self.xi}; results are exploratory",
                stacklevel=3,
            )

    @property
    def omega_c(self) -> float:
        """Cyclotron frequency e B / (mu c)."""
        return self.e * self.B / (self.mu * self.c)

    @property
    def field_bracket(self) -> float:
        """F/A + (1/lambda_D**2)(1/2 - g**2/2), shared by every first-order term."""
        if self.A == 0:
            raise PhysicsDomainError("perturbative corrections need a Coulomb coupling A > 0")
        return self.F / self.A + (0.5 - self.g**2 / 2) / self.lambda_D**2

    @property
    def quadratic_bracket(self) -> float:
        """Coefficient of r**2 in the expanded potential."""
        return (
            self.A / self.lambda_D**3 * (1 / 6 - self.g**2 / 2)
            + self.mu * self.omega_c**2 / 8
        )


@dataclass(frozen=True)
class QuantumNumbers:
    n: int
    m: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"radial quantum number must be >= 0, got {self.n}")


@dataclass(frozen=True)
class SigmaIndex:
    sigma_0: float
    sigma_n: float
    centrifugal_sq: float
    rho: float


@dataclass(frozen=True)
class SeriesCoefficients:
    """Coefficients of the small-r/lambda_D expansion of the effective potential.

    ``U ~ c_inv/r + c_cent/r**2 + c0 + c1 r + c2 r**2 + c3 r**3``.
    """

    c_inv: float
    c_cent: float
    c0: float
    c1: float
    c2: float
    c3: float


def _nu(qn: QuantumNumbers, cfg: PlasmaFieldConfig):
    return qn.m + cfg.xi


def sigma_index(qn: QuantumNumbers, cfg: PlasmaFieldConfig) -> SigmaIndex:
    """Signed shape-invariance indices for state ``qn``.

    sigma_0 = m + xi + 1/2 and sigma_n = sigma_0 + n.  No absolute value is
    taken; the negative branch is what the m = -1 rows of the reference
    tables require.
    """
    nu = _nu(qn, cfg)
    sigma_0 = nu + 0.5
    sigma_n = qn.n + nu + 0.5
    if sigma_n == 0:
        raise DegenerateIndexError(f"sigma_nm = 0 for n={qn.n}, m+xi={nu}")
    rho = cfg.A * cfg.mu / (cfg.hbar**2 * sigma_n)
    return SigmaIndex(sigma_0, sigma_n, nu * nu, rho)


def _check_radius(r):
    if np.any(np.asarray(r) <= 0):
        raise RadiusDomainError("radius must be > 0")


def effective_potential(r, qn: QuantumNumbers, cfg: PlasmaFieldConfig):
    """Exact effective radial potential (hartree); ``r`` may be an array."""
    _check_radius(r)
    r = np.asarray(r, dtype=float)
    nu = _nu(qn, cfg)
    x = r / cfg.lambda_D
    w = cfg.omega_c
    value = (
        -(cfg.A / r) * np.exp(-x) * np.cos(cfg.g * x)
        - cfg.F * r
        + w * cfg.hbar / 2 * nu
        + cfg.mu * w**2 / 8 * r**2
        + cfg.hbar**2 / (2 * cfg.mu) * (nu * nu - 0.25) / r**2
    )
    return value[()] if value.ndim == 0 else value


def series_coefficients(qn: QuantumNumbers, cfg: PlasmaFieldConfig) -> SeriesCoefficients:
    nu = _nu(qn, cfg)
    A, lam, g = cfg.A, cfg.lambda_D, cfg.g
    return SeriesCoefficients(
        c_inv=-A,
        c_cent=cfg.hbar**2 / (2 * cfg.mu) * (nu * nu - 0.25),
        c0=A / lam + cfg.omega_c * cfg.hbar / 2 * nu,
        c1=-(cfg.F + A / lam**2 * (0.5 - g**2 / 2)),
        c2=A / lam**3 * (1 / 6 - g**2 / 2) + cfg.mu * cfg.omega_c**2 / 8,
        c3=-(A / lam**4 * (1 / 24 - g**2 / 4 + g**4 / 24)),
    )


def series_potential(r, qn: QuantumNumbers, cfg: PlasmaFieldConfig):
    """Effective potential truncated after the r**3 term."""
    _check_radius(r)
    r = np.asarray(r, dtype=float)
    c = series_coefficients(qn, cfg)
    value = c.c_inv / r + c.c_cent / r**2 + c.c0 + r * (c.c1 + r * (c.c2 + r * c.c3))
    return value[()] if value.ndim == 0 else value


def constant_shift(qn: QuantumNumbers, cfg: PlasmaFieldConfig) -> float:
    """Constant part of the potential: A/lambda_D + (omega_c hbar / 2)(m + xi)."""
    return cfg.A / cfg.lambda_D + cfg.omega_c * cfg.hbar / 2 * _nu(qn, cfg)

