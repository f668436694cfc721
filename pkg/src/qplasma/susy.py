"""Perturbative spectrum built on the exactly solvable 2D Coulomb problem.

The Coulomb + centrifugal part of the expanded potential is the unperturbed,
shape-invariant problem.  The linear, quadratic and cubic terms are handled
order by order through corrections to the superpotential.  Energies come
from closed forms.  The ``*_quadrature`` functions recompute the same
corrections by integrating against the unperturbed density and serve as
an independent check.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import QuadratureError, WavefunctionUndefinedError
from .model import (
    PlasmaFieldConfig,
    QuantumNumbers,
    constant_shift,
    series_coefficients,
    sigma_index,
)

QUAD_EPSABS = 1e-12
QUAD_EPSREL = 1e-12
ENVELOPE_CUTOFF = 1e-18


@dataclass(frozen=True)
class EnergyBreakdown:
    e0: float
    shift: float
    e1: float
    e2: float
    total: float


@dataclass(frozen=True)
class SuperpotentialCoeffs:
    """Polynomial pieces of the superpotential hierarchy.

    W0(r) = w0_inv / r + w0_const, W1(r) = w1_lin r,
    W2(r) = w2_lin r + w2_quad r**2 and the moderating function is
    Q(r) = exp(q2 r**2 + q3 r**3).
    """

    w0_inv: float
    w0_const: float
    w1_lin: float
    w2_lin: float
    w2_quad: float
    q2: float
    q3: float


@dataclass(frozen=True)
class WavefunctionSample:
    r: float
    unperturbed: float
    moderated: float
    renormalized: float
    phase_m: int
    prefactor_rule: str = "psi = exp(i m phi) / sqrt(2 pi r) * H(r)"


def unperturbed_energy(qn: QuantumNumbers, cfg: PlasmaFieldConfig) -> float:
    sig = sigma_index(qn, cfg)
    return -cfg.mu * cfg.A**2 / (2 * cfg.hbar**2 * sig.sigma_n**2)


def laguerre(n: int, alpha, x):
    """Generalised Laguerre polynomial L_n^alpha(x) by upward recurrence."""
    if n < 0:
        raise ValueError("Laguerre degree must be >= 0")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev[()] if prev.ndim == 0 else prev
    cur = 1.0 + alpha - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur[()] if cur.ndim == 0 else cur


def _require_wavefunction(qn, cfg):
    sig = sigma_index(qn, cfg)
    if cfg.A == 0:
        raise WavefunctionUndefinedError("A = 0: no bound Coulomb state to build on")
    if sig.sigma_0 <= 0:
        raise WavefunctionUndefinedError(
            f"sigma_0m = {sig.sigma_0} <= 0 for m={qn.m}, xi={cfg.xi}; "
            "energies are defined but the radial function is not"
        )
    return sig


def normalization(qn: QuantumNumbers, cfg: PlasmaFieldConfig) -> float:
    """Normalisation constant with the factorial continued through Gamma."""
    return math.exp(_log_normalization(_require_wavefunction(qn, cfg), qn, cfg))


def _log_normalization(sig, qn, cfg) -> float:
    log_inner = (
        2 * math.log(cfg.hbar)
        + special.gammaln(2 * sig.sigma_n - qn.n)
        - math.log(cfg.mu)
        - special.gammaln(qn.n + 1)
        - math.log(cfg.A)
    )
    return sig.sigma_0 * math.log(2 * sig.rho) - math.log(sig.sigma_n) - 0.5 * log_inner


def unperturbed_wavefunction(r, qn: QuantumNumbers, cfg: PlasmaFieldConfig):
    """Normalised radial function P(r) (r >= 0, array friendly)."""
    sig = _require_wavefunction(qn, cfg)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("radius must be >= 0")
    # N r**sigma_0 e**(-rho r) in log space: N underflows and r**sigma_0 overflows for large sigma
    with np.errstate(divide="ignore"):
        log_env = _log_normalization(sig, qn, cfg) + sig.sigma_0 * np.log(r) - sig.rho * r
    value = np.exp(log_env) * laguerre(qn.n, 2 * sig.sigma_0 - 1, 2 * sig.rho * r)
    return value[()] if value.ndim == 0 else value


def first_order_energy(qn: QuantumNumbers, cfg: PlasmaFieldConfig) -> float:
    sig = sigma_index(qn, cfg)
    s2 = sig.sigma_n**2
    return -(cfg.hbar**2 / (2 * cfg.mu)) * (3 * s2 - sig.centrifugal_sq + 0.25) * cfg.field_bracket


def second_order_energy(qn: QuantumNumbers, cfg: PlasmaFieldConfig) -> float:
    sig = sigma_index(qn, cfg)
    s2 = sig.sigma_n**2
    hb, mu, A = cfg.hbar, cfg.mu, cfg.A
    bracket = cfg.quadratic_bracket - hb**2 * s2 / (2 * mu) * cfg.field_bracket**2
    r2_moment = hb**4 * s2 / (2 * mu**2 * A**2) * (5 * s2 - 3 * sig.centrifugal_sq + 1.75)
    return bracket * r2_moment


def superpotential_coeffs(qn: QuantumNumbers, cfg: PlasmaFieldConfig) -> SuperpotentialCoeffs:
    sig = sigma_index(qn, cfg)
    if sig.sigma_0 == 0:
        raise WavefunctionUndefinedError("sigma_0m = 0: ground superpotential undefined")
    hb, mu, A = cfg.hbar, cfg.mu, cfg.A
    s, s_next = sig.sigma_n, sig.sigma_n + 1
    root = math.sqrt(2 * mu)
    k = cfg.field_bracket

    w0_inv = -(hb / root) * sig.sigma_0
    w0_const = math.sqrt(mu / 2) * A / (hb * sig.sigma_0)
    w1_lin = -(hb / root) * k * s
    stiffness = hb**2 * s**2 / (2 * mu) * k**2 - cfg.quadratic_bracket
    prefactor = -stiffness * hb * s / (mu * A**2 * root)
    w2_lin = prefactor * s * s_next * hb**2
    w2_quad = prefactor * mu * A
    q2 = -(root / hb) * (w1_lin + w2_lin) / 2
    q3 = -(root / hb) * w2_quad / 3
    return SuperpotentialCoeffs(w0_inv, w0_const, w1_lin, w2_lin, w2_quad, q2, q3)


def moderating_function(r, qn: QuantumNumbers, cfg: PlasmaFieldConfig):
    w = superpotential_coeffs(qn, cfg)
    r = np.asarray(r, dtype=float)
    value = np.exp(r * r * (w.q2 + w.q3 * r))
    return value[()] if value.ndim == 0 else value


def total_energy(qn: QuantumNumbers, cfg: PlasmaFieldConfig) -> EnergyBreakdown:
    """Unperturbed energy + constant shift + first- and second-order corrections."""
    e0 = unperturbed_energy(qn, cfg)
    shift = constant_shift(qn, cfg)
    e1 = first_order_energy(qn, cfg)
    e2 = second_order_energy(qn, cfg)
    return EnergyBreakdown(e0, shift, e1, e2, e0 + shift + e1 + e2)


# -- quadrature cross-checks -------------------------------------------------


def integration_cutoff(qn: QuantumNumbers, cfg: PlasmaFieldConfig, power: int = 0) -> float:
    """Radius beyond which P(r)**2 r**power is below the envelope cutoff."""
    sig = _require_wavefunction(qn, cfg)
    rho = sig.rho
    log_norm = _log_normalization(sig, qn, cfg)
    degree = 2 * sig.sigma_0 + power + 2 * qn.n

    def log_envelope(radius):
        x = 2 * rho * radius
        lag = abs(float(laguerre(qn.n, 2 * sig.sigma_0 - 1, x)))
        return 2 * log_norm + (2 * sig.sigma_0 + power + 1) * math.log(radius) - x + 2 * math.log(max(lag, 1.0))

    radius = max(degree / (2 * rho), 1.0 / rho)
    while log_envelope(radius) >= math.log(ENVELOPE_CUTOFF):
        radius *= 1.25
    return radius


def _expectation(qn, cfg, weight, power):
    """Integral of P(r)**2 * weight(r) over [0, cutoff] with adaptive quadrature."""
    upper = integration_cutoff(qn, cfg, power)
    sig = sigma_index(qn, cfg)
    peak = (2 * sig.sigma_0 + power) / (2 * sig.rho)

    def integrand(r):
        p = unperturbed_wavefunction(r, qn, cfg)
        return p * p * weight(r)

    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, abserr = integrate.quad(
                integrand,
                0.0,
                upper,
                epsabs=QUAD_EPSABS,
                epsrel=QUAD_EPSREL,
                limit=400,
                points=[min(peak, upper / 2)],
            )
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"quadrature did not converge: {exc}") from exc
    if abserr > 1e3 * max(QUAD_EPSABS, QUAD_EPSREL * abs(value)):
        raise QuadratureError(f"quadrature residual {abserr:.3g} too large", abserr)
    return value


def norm_quadrature(qn: QuantumNumbers, cfg: PlasmaFieldConfig) -> float:
    return _expectation(qn, cfg, lambda r: 1.0, 0)


def first_order_energy_quadrature(qn: QuantumNumbers, cfg: PlasmaFieldConfig) -> float:
    c1 = series_coefficients(qn, cfg).c1
    return _expectation(qn, cfg, lambda r: c1 * r, 1)


def second_order_energy_quadrature(qn: QuantumNumbers, cfg: PlasmaFieldConfig) -> float:
    c2 = series_coefficients(qn, cfg).c2
    w1 = superpotential_coeffs(qn, cfg).w1_lin
    return _expectation(qn, cfg, lambda r: c2 * r * r - (w1 * r) ** 2, 2)


def _third_order_weight(qn, cfg):
    c3 = series_coefficients(qn, cfg).c3
    w = superpotential_coeffs(qn, cfg)

    def weight(r):
        return c3 * r**3 + (w.w1_lin * r) * (w.w2_lin * r + w.w2_quad * r * r)

    return weight


def third_order_energy_quadrature(qn: QuantumNumbers, cfg: PlasmaFieldConfig) -> float:
    """Third-order correction; diagnostic only, never part of the total."""
    return _expectation(qn, cfg, _third_order_weight(qn, cfg), 3)


def third_order_energy_gauss_laguerre(
    qn: QuantumNumbers, cfg: PlasmaFieldConfig, nodes: int = 64
) -> float:
    """Same integral as :func:`third_order_energy_quadrature` on generalised
    Gauss-Laguerre nodes in x = 2 rho r (weight x**(2 sigma_0) e**-x)."""
    sig = _require_wavefunction(qn, cfg)
    alpha = 2 * sig.sigma_0
    x, wts = special.roots_genlaguerre(nodes, alpha)
    scale = 2 * sig.rho
    r = x / scale
    lag = laguerre(qn.n, 2 * sig.sigma_0 - 1, x)
    norm = normalization(qn, cfg)
    weight = _third_order_weight(qn, cfg)
    pref = norm**2 / scale ** (alpha + 1)
    return float(pref * np.sum(wts * lag * lag * weight(r)))


# -- wavefunction assembly ---------------------------------------------------


def full_wavefunction(r, phi, qn: QuantumNumbers, cfg: PlasmaFieldConfig):
    """psi(r, phi) = exp(i m phi) / sqrt(2 pi r) * P(r) * Q(r)."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("radius must be > 0")
    radial = unperturbed_wavefunction(r, qn, cfg) * moderating_function(r, qn, cfg)
    return np.exp(1j * qn.m * np.asarray(phi)) / np.sqrt(2 * np.pi * r) * radial


def moderated_norm(qn: QuantumNumbers, cfg: PlasmaFieldConfig) -> float:
    """Integral of (P Q)**2 over [0, cutoff] of the unperturbed envelope.

    Q may grow without bound at large r (q3 > 0), so the window is that of
    the unperturbed state rather than the half line.
    """
    upper = integration_cutoff(qn, cfg, 0)
    w = superpotential_coeffs(qn, cfg)

    def integrand(r):
        p = unperturbed_wavefunction(r, qn, cfg)
        return p * p * np.exp(2 * r * r * (w.q2 + w.q3 * r))

    with np.errstate(over="ignore"), warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, _ = integrate.quad(integrand, 0.0, upper, epsabs=QUAD_EPSABS, limit=400)
    return value


def wavefunction_samples(radii, qn: QuantumNumbers, cfg: PlasmaFieldConfig) -> list[WavefunctionSample]:
    radii = np.asarray(radii, dtype=float)
    p = unperturbed_wavefunction(radii, qn, cfg)
    with np.errstate(over="ignore"):
        q = moderating_function(radii, qn, cfg)
    norm = moderated_norm(qn, cfg)
    # Q can overflow the window for strong linear fields; no renormalised value then
    scale = 1.0 / math.sqrt(norm) if math.isfinite(norm) and norm > 0 else math.nan
    return [
        WavefunctionSample(float(r), float(pi), float(pi * qi), float(pi * qi * scale), qn.m)
        for r, pi, qi in zip(radii, np.atleast_1d(p), np.atleast_1d(q))
    ]
