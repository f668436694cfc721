"""Finite-difference eigensolver for the exact radial equation.

Used to check the perturbative energies against the unexpanded
screened potential.  The radial operator
``-(hbar^2/2mu) d^2/dr^2 + U_eff(r)`` is discretised on a uniform grid as a
symmetric tridiagonal matrix.  Its lowest eigenvalues come from Sturm-sequence
bisection, and Richardson extrapolation over successive grid doublings
supplies the converged value and an error estimate.

Two discretisations are available:

``"cylindrical"`` (default)
    Cell-centred nodes r_i = (i + 1/2) h with the flux-conservative 2D
    Laplacian, symmetrised by H = sqrt(r) u.  Second order for every m,
    including the critical -1/(4 r^2) case m + xi = 0.

``"plain"``
    Nodes r_i = i h (i >= 1), constant off-diagonal -hbar^2/(2 mu h^2) and
    diagonal hbar^2/(mu h^2) + U_eff(r_i).  For m + xi = 0 it converges
    only logarithmically, so it is kept for reference, not for validation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .errors import UnboundedPotentialError
from .model import PlasmaFieldConfig, QuantumNumbers, effective_potential, sigma_index
from .susy import total_energy

SCHEMES = ("cylindrical", "plain")


@dataclass(frozen=True)
class RadialGrid:
    r_min: float
    r_max: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 64:
            raise ValueError("n_points must be >= 64")
        if not 0 < self.r_min < self.r_max:
            raise ValueError("need 0 < r_min < r_max")

    @property
    def spacing(self) -> float:
        return (self.r_max - self.r_min) / (self.n_points - 1)

    @property
    def r(self) -> np.ndarray:
        return self.r_min + self.spacing * np.arange(self.n_points)

    @classmethod
    def vertex(cls, extent: float, n_points: int) -> "RadialGrid":
        """Nodes h, 2h, ..., n h with h = extent / n (ghost zeros at 0 and extent + h)."""
        h = extent / n_points
        return cls(h, n_points * h, n_points)

    @classmethod
    def cell_centred(cls, extent: float, n_points: int) -> "RadialGrid":
        """Nodes h/2, 3h/2, ..., extent - h/2 with h = extent / n."""
        h = extent / n_points
        return cls(h / 2, extent - h / 2, n_points)


@dataclass(frozen=True)
class TridiagonalOperator:
    diagonal: np.ndarray
    off_diagonal: np.ndarray
    scheme: str = "plain"

    @property
    def size(self) -> int:
        return len(self.diagonal)

    def dense(self) -> np.ndarray:
        return (
            np.diag(self.diagonal)
            + np.diag(self.off_diagonal, 1)
            + np.diag(self.off_diagonal, -1)
        )


@dataclass
class OracleSpectrum:
    eigenvalues: np.ndarray
    grid: RadialGrid
    m: int
    converged: np.ndarray
    tolerance: float = 1e-6
    raw: list = field(default_factory=list)

    @property
    def within_tolerance(self) -> np.ndarray:
        return self.converged <= self.tolerance


def build_hamiltonian(
    grid: RadialGrid,
    qn: QuantumNumbers,
    cfg: PlasmaFieldConfig,
    *,
    scheme: str = "plain",
    box_mode: bool = False,
) -> TridiagonalOperator:
    """Discretise the radial Hamiltonian on ``grid`` with the exact potential."""
    if cfg.F > 0 and not box_mode:
        raise UnboundedPotentialError(
            "F > 0 makes the potential unbounded below; pass box_mode=True "
            "to get box-regularised resonance estimates"
        )
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}; choose from {SCHEMES}")
    h = grid.spacing
    r = grid.r
    kin = cfg.hbar**2 / (2 * cfg.mu)
    potential = effective_potential(r, qn, cfg)
    if scheme == "plain":
        diagonal = 2 * kin / h**2 + potential
        off = np.full(grid.n_points - 1, -kin / h**2)
    else:
        r_out = r + h / 2
        r_in = r - h / 2
        # kinetic term of the 2D Laplacian equals H'' + H/(4r^2); add back the 1/(4r^2) piece
        diagonal = kin * (r_out + r_in) / (r * h**2) + potential + kin / (4 * r * r)
        off = -kin * r_out[:-1] / (h**2 * np.sqrt(r[:-1] * r[1:]))
    return TridiagonalOperator(np.ascontiguousarray(diagonal), np.ascontiguousarray(off), scheme)


@njit(cache=True)
def _sturm_count(diag, off_sq, x, pivmin):
    """Number of eigenvalues strictly below x."""
    count = 0
    q = diag[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0:
        count += 1
    for i in range(1, diag.shape[0]):
        q = diag[i] - x - off_sq[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0:
            count += 1
    return count


@njit(cache=True)
def _bisect(diag, off_sq, k, lower, upper, tol, pivmin):
    out = np.empty(k)
    lo_bound = lower
    for j in range(k):
        lo = lo_bound
        hi = upper
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            if _sturm_count(diag, off_sq, mid, pivmin) > j:
                hi = mid
            else:
                lo = mid
        out[j] = 0.5 * (lo + hi)
        lo_bound = lo
    return out


def sturm_count(op: TridiagonalOperator, x: float) -> int:
    """Number of eigenvalues of ``op`` strictly below ``x``."""
    off_sq = op.off_diagonal**2
    return int(_sturm_count(op.diagonal, off_sq, float(x), _pivmin(op)))


def _pivmin(op):
    scale = max(1.0, float(np.max(op.off_diagonal**2, initial=0.0)))
    return np.finfo(float).tiny * scale


def lowest_eigenvalues(op: TridiagonalOperator, k: int, tol: float = 1e-10) -> np.ndarray:
    """k smallest eigenvalues, ascending, by Sturm-sequence bisection."""
    if not 1 <= k <= op.size:
        raise ValueError(f"k must be in [1, {op.size}], got {k}")
    d = op.diagonal
    e = np.abs(op.off_diagonal)
    radius = np.zeros_like(d)
    radius[:-1] += e
    radius[1:] += e
    lower = float(np.min(d - radius))
    upper = float(np.max(d + radius))
    return _bisect(d, e * e, k, lower, upper, tol, _pivmin(op))


def default_extent(n_states: int, qn: QuantumNumbers, cfg: PlasmaFieldConfig) -> float:
    """Outer boundary 40 sigma^2 hbar^2/(mu A) for the highest requested state."""
    sigma = n_states - 1 + abs(qn.m + cfg.xi) + 0.5
    return max(40 * sigma**2 * cfg.hbar**2 / (cfg.mu * cfg.A), 10.0)


def oracle_spectrum(
    m: int,
    cfg: PlasmaFieldConfig,
    k: int = 3,
    *,
    n_points: int = 4096,
    extent: float | None = None,
    tolerance: float = 1e-6,
    max_points: int = 1 << 18,
    scheme: str = "cylindrical",
    box_mode: bool = False,
) -> OracleSpectrum:
    """k lowest radial eigenvalues for fixed m, Richardson-extrapolated.

    Index j of the result is the state with j radial nodes, i.e. n = j.
    The grid is doubled until the extrapolation error estimate drops below
    ``tolerance`` or ``max_points`` is reached; unconverged entries are
    reported through ``converged`` rather than raised.
    """
    qn = QuantumNumbers(0, m)
    if extent is None:
        extent = default_extent(k, qn, cfg)
    make_grid = RadialGrid.cell_centred if scheme == "cylindrical" else RadialGrid.vertex

    raw = []
    extrapolated = []
    points = n_points
    estimate = np.full(k, np.inf)
    while True:
        grid = make_grid(extent, points)
        op = build_hamiltonian(grid, qn, cfg, scheme=scheme, box_mode=box_mode)
        raw.append(lowest_eigenvalues(op, k))
        if len(raw) >= 2:
            extrapolated.append((4 * raw[-1] - raw[-2]) / 3)
            if len(extrapolated) >= 2:
                estimate = np.abs(extrapolated[-1] - extrapolated[-2])
            else:
                estimate = np.abs(raw[-1] - raw[-2]) / 3
            if np.all(estimate <= tolerance) or 2 * points > max_points:
                break
        elif 2 * points > max_points:
            extrapolated.append(raw[-1])
            break
        points *= 2
    return OracleSpectrum(extrapolated[-1], grid, m, estimate, tolerance, raw)


@dataclass(frozen=True)
class Comparison:
    n: int
    m: int
    perturbative: float
    oracle: float
    abs_gap: float
    rel_gap: float
    oracle_error: float
    outside_validity: bool
    notes: tuple = ()


def compare_with_perturbation(
    qn: QuantumNumbers, cfg: PlasmaFieldConfig, **grid_policy
) -> Comparison:
    """Perturbative total energy next to the exact-potential eigenvalue."""
    breakdown = total_energy(qn, cfg)
    spectrum = oracle_spectrum(qn.m, cfg, k=qn.n + 1, **grid_policy)
    oracle = float(spectrum.eigenvalues[qn.n])
    gap = abs(oracle - breakdown.total)
    notes = []
    if cfg.lambda_D < 2:
        notes.append("lambda_D < 2: series expansion not valid")
    if abs(breakdown.e2) > 0.5 * abs(breakdown.e0):
        notes.append("|e2| > |e0|/2: perturbation series not small")
    outside = bool(notes)
    if sigma_index(qn, cfg).sigma_0 <= 0:
        notes.append("sigma_0 <= 0: oracle node index n does not label the same state")
    return Comparison(
        qn.n,
        qn.m,
        breakdown.total,
        oracle,
        gap,
        gap / abs(breakdown.total) if breakdown.total else math.inf,
        float(spectrum.converged[qn.n]),
        outside,
        tuple(notes),
    )
