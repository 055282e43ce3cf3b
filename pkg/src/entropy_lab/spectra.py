"""Operator front-ends producing spectra and model parameters.

Covers three concrete families:

* the time-band-time projection composition (sinc-kernel integral operator
  on [-r, r]), discretized by Nystrom quadrature and diagonalized by a
  cyclic Jacobi sweep;
* Dirichlet Laplacian spectra of boxes, enumerated exactly on the lattice
  (eigenvalues sum_i (pi*n_i/L_i)**2 with n_i >= 1);
* the smoothing operator (Id + (-Laplacian)^k)^(-1/2), whose unit-ball image
  is the Sobolev ball, along with its Weyl-law counting models and
  entropy expansions.

Geometry helpers (unit-ball volume and the rescaled Hausdorff measure that
appears in the entropy constants) live here too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DiscretizationError,
    HypothesisError,
    NotSupportedError,
    NumericalConvergenceError,
    ResourceBudgetError,
)
from .asymptotics import LN2, EntropyExpansion
from .sequence_model import CountingModel, SpectrumSample, empirical_counting

# Nystrom eigenvalues are accepted within this distance outside [0, 1] and
# clamped; anything further out indicates an under-resolved discretization.
LPS_RANGE_TOL = 1e-8

JACOBI_OFF_TOL = 1e-12
JACOBI_MAX_SWEEPS = 30

# Lattice enumeration guards.
LATTICE_OUTER_BUDGET = 20_000_000
LATTICE_EIG_BUDGET = 4_000_000


def omega(d: int) -> float:
    """Volume of the unit ball in R^d: pi**(d/2) / Gamma(d/2 + 1)."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


def chi(r: int, measure: float) -> float:
    """Rescaled r-dimensional content: omega_r * measure / (r * (2*pi)**r * ln 2)."""
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if not measure > 0:
        raise ValueError(f"measure must be positive, got {measure}")
    return omega(r) * measure / (r * (2.0 * math.pi) ** r * LN2)


# ---------------------------------------------------------------------------
# Time-band-time projection spectrum (d = 1)
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class LPSConfig:
    """Configuration of the d=1 time/band-limiting composition on [-r, r].

    ``sigma`` is the band half-width (rad per unit time), ``r`` the time
    half-length.  ``nodes`` should resolve the plateau; >= 30*sigma*r/pi
    (about 2.5x the time-bandwidth product) works well.
    """

    sigma: float
    r: float
    nodes: int
    quadrature: str = "gauss-legendre"

    def __post_init__(self):
        if not (self.sigma > 0 and self.r > 0):
            raise ValueError(f"sigma and r must be positive, got {self.sigma}, {self.r}")
        if self.nodes < 16:
            raise ValueError(f"nodes must be >= 16, got {self.nodes}")
        if self.quadrature not in ("gauss-legendre", "trapezoid"):
            raise ValueError(f"unknown quadrature {self.quadrature!r}")


def recommended_nodes(sigma: float, r: float) -> int:
    """Quadrature size resolving the plateau: max(16, ceil(30*sigma*r/pi))."""
    return max(16, math.ceil(30.0 * sigma * r / math.pi))


def _quadrature(cfg: LPSConfig) -> tuple[np.ndarray, np.ndarray]:
    if cfg.quadrature == "gauss-legendre":
        x, w = np.polynomial.legendre.leggauss(cfg.nodes)
        return cfg.r * x, cfg.r * w
    x = np.linspace(-cfg.r, cfg.r, cfg.nodes)
    dx = 2.0 * cfg.r / (cfg.nodes - 1)
    w = np.full(cfg.nodes, dx)
    w[0] = w[-1] = dx / 2.0
    return x, w


def lps_kernel_matrix(cfg: LPSConfig) -> np.ndarray:
    """Symmetrized Nystrom matrix W^(1/2) K W^(1/2) of the sinc kernel.

    K(s,t) = sin(sigma*(s-t)) / (pi*(s-t)) with the removable singularity
    set to its limit sigma/pi on the diagonal (never computed by division).
    """
    x, w = _quadrature(cfg)
    diff = x[:, None] - x[None, :]
    kernel = np.empty_like(diff)
    off = diff != 0.0
    kernel[off] = np.sin(cfg.sigma * diff[off]) / (math.pi * diff[off])
    kernel[~off] = cfg.sigma / math.pi
    sqrt_w = np.sqrt(w)
    mat = sqrt_w[:, None] * kernel * sqrt_w[None, :]
    return 0.5 * (mat + mat.T)


def jacobi_eigenvalues(
    matrix: np.ndarray,
    off_tol: float = JACOBI_OFF_TOL,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
) -> tuple[np.ndarray, int]:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps run in a fixed (p, q) order; rotations with |a_pq| <= off_tol/n
    are skipped, which alone cannot leave the off-diagonal Frobenius norm
    above off_tol.  Unconditionally convergent for symmetric input and
    bitwise deterministic.  Returns eigenvalues sorted non-increasing and
    the number of sweeps used.
    """
    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    if a.ndim != 2 or a.shape != (n, n):
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    if max_sweeps < 1:
        raise ValueError("max_sweeps must be >= 1")
    if n == 1:
        return a.diagonal().copy(), 0
    skip_tol = off_tol / n
    off_norm = math.inf
    for sweep in range(1, max_sweeps + 1):
        rotations = 0
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= skip_tol:
                    continue
                rotations += 1
                app = a[p, p]
                aqq = a[q, q]
                theta = (aqq - app) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + math.sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + math.sqrt(1.0 + theta * theta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                a[p, :] = a[:, p]
                a[q, :] = a[:, q]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
        off = a.copy()
        np.fill_diagonal(off, 0.0)
        off_norm = float(np.linalg.norm(off))
        if off_norm <= off_tol or rotations == 0:
            return np.sort(a.diagonal())[::-1].copy(), sweep
    raise NumericalConvergenceError(
        f"Jacobi did not reach off-diagonal norm {off_tol} in {max_sweeps} sweeps "
        f"(n={n}, remaining off-norm {off_norm:.3e})"
    )


def lps_eigenvalues(cfg: LPSConfig) -> SpectrumSample:
    """Nystrom spectrum of the time-band-time composition, clamped to [0, 1].

    Eigenvalues outside [-LPS_RANGE_TOL, 1 + LPS_RANGE_TOL] signal an
    under-resolved quadrature and raise, with the advice to increase nodes.
    """
    mat = lps_kernel_matrix(cfg)
    vals, sweeps = jacobi_eigenvalues(mat)
    raw_min = float(vals.min())
    raw_max = float(vals.max())
    if raw_min < -LPS_RANGE_TOL or raw_max > 1.0 + LPS_RANGE_TOL:
        raise DiscretizationError(
            f"eigenvalues in [{raw_min:.3e}, {raw_max:.6f}] exceed [0,1] by more than "
            f"{LPS_RANGE_TOL}; increase nodes (currently {cfg.nodes})"
        )
    clamped = np.clip(vals, 0.0, 1.0)
    return SpectrumSample(
        values=clamped,
        source="nystrom",
        params={
            "sigma": cfg.sigma,
            "r": cfg.r,
            "nodes": cfg.nodes,
            "quadrature": cfg.quadrature,
            "raw_min": raw_min,
            "raw_max": raw_max,
            "jacobi_sweeps": sweeps,
        },
    )


def lps_counting_rate(
    cfg: LPSConfig, gamma: float, spectrum: SpectrumSample | None = None
) -> float:
    """Eigenvalue count above gamma per unit time half-length, M_r(gamma)/r.

    For the interval pair ([-1,1] scaled by r, [-sigma, sigma]) this tends
    to 2*sigma/pi for every gamma in (0,1).  A precomputed spectrum may be
    passed to avoid repeating the Nystrom run; its parameters must match.
    """
    if not (0.0 < gamma < 1.0):
        raise ValueError(f"gamma must be in (0,1), got {gamma}")
    if spectrum is None:
        spectrum = lps_eigenvalues(cfg)
    else:
        for key, want in (("sigma", cfg.sigma), ("r", cfg.r), ("nodes", cfg.nodes),
                          ("quadrature", cfg.quadrature)):
            if spectrum.params.get(key) != want:
                raise ValueError(
                    f"supplied spectrum has {key}={spectrum.params.get(key)!r}, "
                    f"config wants {want!r}"
                )
    return empirical_counting(spectrum, gamma) / cfg.r


def lps_entropy_rate(
    omega_measure: float, w_measure: float, d: int, epsilon: float
) -> float:
    """Limiting entropy per r^d: 2*H(Omega)*H(W)/(2*pi)**d * log2(1/eps)."""
    if not (0.0 < epsilon <= 1.0):
        raise ValueError(f"epsilon must be in (0,1], got {epsilon}")
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if omega_measure < 0 or w_measure < 0:
        raise ValueError("measures must be non-negative")
    return (
        2.0 * omega_measure * w_measure / (2.0 * math.pi) ** d * math.log2(1.0 / epsilon)
    )


# ---------------------------------------------------------------------------
# Box Laplacian lattice spectra and Sobolev mappings
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class BoxDomain:
    """Axis-aligned box with side lengths L_1..L_d."""

    sides: tuple[float, ...]

    def __post_init__(self):
        sides = tuple(float(s) for s in self.sides)
        if not sides:
            raise ValueError("box needs at least one side")
        if min(sides) <= 0:
            raise ValueError(f"all sides must be positive, got {sides}")
        object.__setattr__(self, "sides", sides)

    @property
    def dim(self) -> int:
        return len(self.sides)

    def geometry(self) -> "DomainGeometry":
        vol = math.prod(self.sides)
        # surface content: two opposite faces per coordinate direction
        area = 2.0 * sum(vol / s for s in self.sides) if self.dim > 1 else 2.0
        return DomainGeometry(dim=self.dim, volume=vol, boundary_area=area)


@dataclass(frozen=True)
class DomainGeometry:
    """Dimension, volume and boundary content of a test domain."""

    dim: int
    volume: float
    boundary_area: float

    def __post_init__(self):
        if not self.volume > 0:
            raise ValueError(f"volume must be positive, got {self.volume}")
        if self.boundary_area < 0:
            raise ValueError("boundary content must be non-negative")


@dataclass(frozen=True)
class SobolevConfig:
    """Smoothness order k on a box domain."""

    k: int
    box: BoxDomain

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")


def _lattice_outer_budget(sides: tuple[float, ...], gamma: float) -> None:
    outer = 1.0
    for length in sides[:-1]:
        outer *= max(1.0, length * math.sqrt(gamma) / math.pi)
    if outer > LATTICE_OUTER_BUDGET:
        raise ResourceBudgetError(
            f"lattice enumeration needs ~{outer:.3g} outer iterations "
            f"(budget {LATTICE_OUTER_BUDGET}); use a smaller gamma"
        )


def _count_last_two(l_prev: float, l_last: float, gamma: float, partial: float) -> int:
    """Count over the last two lattice indices, innermost in closed form."""
    rem0 = gamma - partial
    if rem0 <= 0:
        return 0
    n_prev_max = int(l_prev * math.sqrt(rem0) / math.pi)
    if n_prev_max < 1:
        return 0
    n_prev = np.arange(1, n_prev_max + 1, dtype=float)
    rem = gamma - (partial + (math.pi * n_prev / l_prev) ** 2)
    rem = np.clip(rem, 0.0, None)
    return int(np.sum(np.floor(l_last * np.sqrt(rem) / math.pi)))


def box_laplacian_counting(box: BoxDomain, gamma: float) -> int:
    """Number of Dirichlet Laplacian eigenvalues of the box that are <= gamma.

    Exact lattice count of {n in (N*)^d : sum (pi*n_i/L_i)^2 <= gamma},
    nested loops with the innermost index counted in closed form.  Limited
    to d <= 4 by the enumeration budget.
    """
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    d = box.dim
    if d > 4:
        raise NotSupportedError(f"lattice enumeration limited to d <= 4, got d={d}")
    sides = box.sides
    _lattice_outer_budget(sides, gamma)
    if d == 1:
        return int(sides[0] * math.sqrt(gamma) / math.pi)
    if d == 2:
        return _count_last_two(sides[0], sides[1], gamma, 0.0)

    def recurse(axis: int, partial: float) -> int:
        if axis == d - 2:
            return _count_last_two(sides[axis], sides[axis + 1], gamma, partial)
        length = sides[axis]
        rem = gamma - partial
        if rem <= 0:
            return 0
        n_max = int(length * math.sqrt(rem) / math.pi)
        total = 0
        for n in range(1, n_max + 1):
            total += recurse(axis + 1, partial + (math.pi * n / length) ** 2)
        return total

    return recurse(0, 0.0)


def box_laplacian_eigenvalues(box: BoxDomain, gamma_max: float) -> np.ndarray:
    """All box Laplacian eigenvalues <= gamma_max, ascending (with multiplicity)."""
    count = box_laplacian_counting(box, gamma_max)
    if count > LATTICE_EIG_BUDGET:
        raise ResourceBudgetError(
            f"{count} eigenvalues exceed the materialization budget "
            f"{LATTICE_EIG_BUDGET}; use a smaller gamma_max"
        )
    sides = box.sides
    d = box.dim
    chunks: list[np.ndarray] = []

    def recurse(axis: int, partial: float) -> None:
        length = sides[axis]
        rem = gamma_max - partial
        if rem <= 0:
            return
        n_max = int(length * math.sqrt(rem) / math.pi)
        if n_max < 1:
            return
        if axis == d - 1:
            n = np.arange(1, n_max + 1, dtype=float)
            chunks.append(partial + (math.pi * n / length) ** 2)
            return
        for n in range(1, n_max + 1):
            recurse(axis + 1, partial + (math.pi * n / length) ** 2)

    recurse(0, 0.0)
    if not chunks:
        return np.empty(0)
    return np.sort(np.concatenate(chunks))


def sobolev_T_eigenvalue(mu, k: int):
    """Eigenvalue map of (Id + (-Laplacian)^k)^(-1/2): mu -> (1 + mu**k)**(-1/2).

    Strictly decreasing in mu; accepts scalars or arrays.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    mu_arr = np.asarray(mu, dtype=float)
    if np.any(mu_arr <= 0):
        raise ValueError("mu must be positive")
    out = (1.0 + mu_arr**k) ** (-0.5)
    return float(out) if out.ndim == 0 else out


def sobolev_counting_model(cfg: SobolevConfig, order: str = "one-term") -> CountingModel:
    """Weyl-law counting model of the Sobolev smoothing operator on a box.

    One-term: kappa1 = omega_d * vol / (2*pi)**d, beta1 = beta2 = d/k.
    Two-term (requires d >= 3): additionally
    kappa2 = -omega_{d-1} * boundary / (4 * (2*pi)**(d-1)), beta2 = (d-1)/k,
    which automatically satisfies beta1/2 < beta2 < beta1.
    """
    if order not in ("one-term", "two-term"):
        raise ValueError(f"order must be 'one-term' or 'two-term', got {order!r}")
    geom = cfg.box.geometry()
    d, k = geom.dim, cfg.k
    kappa1 = omega(d) * geom.volume / (2.0 * math.pi) ** d
    beta1 = d / k
    if order == "one-term":
        return CountingModel(kappa1=kappa1, beta1=beta1, kappa2=0.0, beta2=beta1)
    if d < 3:
        raise HypothesisError(
            f"two-term counting model requires d >= 3, got d={d}"
        )
    kappa2 = -omega(d - 1) * geom.boundary_area / (4.0 * (2.0 * math.pi) ** (d - 1))
    beta2 = (d - 1) / k
    return CountingModel(kappa1=kappa1, beta1=beta1, kappa2=kappa2, beta2=beta2)


def sobolev_entropy(cfg: SobolevConfig, order: str = "one-term") -> EntropyExpansion:
    """Entropy expansion of the Sobolev unit ball on a box.

    A = k * chi_d(domain), a = d/k; with the boundary correction (d >= 3):
    B = -k * chi_{d-1}(boundary) / 4, b = (d-1)/k.  Computed directly from
    the geometric constants, independently of the counting-model route.
    """
    if order not in ("one-term", "two-term"):
        raise ValueError(f"order must be 'one-term' or 'two-term', got {order!r}")
    geom = cfg.box.geometry()
    d, k = geom.dim, cfg.k
    lead = k * chi(d, geom.volume)
    a = d / k
    if order == "one-term":
        return EntropyExpansion(A=lead, a=a, B=0.0, b=a)
    if d < 3:
        raise HypothesisError(f"two-term entropy requires d >= 3, got d={d}")
    second = -k * chi(d - 1, geom.boundary_area) / 4.0
    return EntropyExpansion(A=lead, a=a, B=second, b=(d - 1) / k)
