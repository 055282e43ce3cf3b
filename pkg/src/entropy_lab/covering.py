"""Finite-dimensional covering machinery for ellipsoids.

Three bound sources are combined here:

* a volume lower bound for complex ellipsoids,
* a ball-covering upper bound for the unit ball in C^d (with an explicit
  small-d branch and a Rogers-type constant for d >= 5),
* an explicit greedy covering constructor on a grid discretization, usable
  up to 3 real dimensions, which certifies empirical upper bounds.

Lower bounds come exclusively from the volume argument; the greedy oracle
never claims a lower bound because the grid discretization only inflates
the covering radius.
"""

from __future__ import annotations

import csv
import hashlib
import math
import os
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree

from .errors import NotSupportedError, PreconditionError, ResourceBudgetError

DEFAULT_ROGERS_C = 16.0
DEFAULT_TAU = 0.5

# Bounding-box cell cap for the greedy oracle grid, overridable via the
# environment.
CELL_BUDGET_ENV = "ENTROPY_LAB_CELL_BUDGET"
DEFAULT_CELL_BUDGET = 2_000_000


@dataclass(frozen=True, eq=False)
class Ellipsoid:
    """An ellipsoid given by positive semi-axes, over the real or complex field.

    Axes are sorted non-increasing at construction.  A complex dimension
    contributes two real dimensions wherever volumes or coverings are
    computed.
    """

    semi_axes: np.ndarray
    field: str = "real"

    def __post_init__(self):
        axes = np.asarray(self.semi_axes, dtype=float).ravel()
        if axes.size == 0:
            raise ValueError("ellipsoid needs at least one semi-axis")
        if axes.min() <= 0:
            raise ValueError(f"all semi-axes must be positive, got min {axes.min()}")
        axes = np.sort(axes)[::-1].copy()
        axes.setflags(write=False)
        object.__setattr__(self, "semi_axes", axes)
        if self.field not in ("real", "complex"):
            raise ValueError(f"field must be 'real' or 'complex', got {self.field!r}")

    @property
    def dim(self) -> int:
        return int(self.semi_axes.size)

    @property
    def real_dim(self) -> int:
        return self.dim * (2 if self.field == "complex" else 1)

    def real_axes(self) -> np.ndarray:
        """Semi-axes of the real-dimensional realization (complex axes paired)."""
        if self.field == "real":
            return np.asarray(self.semi_axes)
        return np.repeat(self.semi_axes, 2)


@dataclass(frozen=True)
class TruncationResult:
    """Outcome of dropping all semi-axes below tau*epsilon."""

    kept_dims: int
    dropped_max_axis: float
    inflated_epsilon: float


@dataclass(frozen=True)
class CoveringBounds:
    """Two-sided log2 covering-number bracket with method provenance tags."""

    lower_log2: float
    upper_log2: float
    epsilon: float
    methods: tuple[str, str]

    def __post_init__(self):
        if self.lower_log2 < 0 or self.upper_log2 < 0:
            raise ValueError("covering bounds must be non-negative")
        if self.lower_log2 > self.upper_log2:
            raise AssertionError(
                f"lower bound {self.lower_log2} exceeds upper bound {self.upper_log2}"
            )


def volume_lower_bound(e: Ellipsoid, epsilon: float) -> float:
    """Volume lower bound, in bits, for a complex ellipsoid.

    H(eps) >= 2*d*[log2(1/eps) + (1/d) * sum log2(mu_n)], clamped at 0.
    Stated over C; callers with real ellipsoids pair dimensions or use the
    greedy oracle instead.
    """
    if e.field != "complex":
        raise NotSupportedError("volume lower bound is stated for complex ellipsoids")
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    d = e.dim
    val = 2.0 * (d * math.log2(1.0 / epsilon) + float(np.sum(np.log2(e.semi_axes))))
    return max(0.0, val)


def covering_kappa(d_complex: int, epsilon: float, rogers_c: float = DEFAULT_ROGERS_C) -> float:
    """Normalized covering constant kappa(d) for the unit ball in C^d.

    For d <= 4 the explicit bound 2*(1 + eps/2) is used pointwise in eps;
    for d >= 5 a Rogers-type bound (rogers_c * d**(5/2))**(1/(2d)), which
    tends to 1 as d grows.  ``rogers_c`` is not pinned by theory; the
    default is calibrated so the bound dominates greedy-oracle counts in
    low dimensions.
    """
    if d_complex < 1:
        raise ValueError("dimension must be >= 1")
    if d_complex <= 4:
        return 2.0 * (1.0 + epsilon / 2.0)
    return (rogers_c * d_complex ** 2.5) ** (1.0 / (2.0 * d_complex))


def ball_covering_upper(
    d_complex: int, epsilon: float, rogers_c: float = DEFAULT_ROGERS_C
) -> float:
    """Upper bound, in bits, on covering the unit ball of C^d at radius eps.

    Returns 2*d*log2(kappa(d)/eps) for eps in (0,1).  For eps >= 1 a single
    ball suffices, so 0 bits are returned (with a warning, since the formula
    itself is only stated for eps < 1).
    """
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if epsilon >= 1.0:
        warnings.warn(
            f"epsilon={epsilon} >= 1 covers the unit ball with one ball; returning 0 bits",
            stacklevel=2,
        )
        return 0.0
    kappa = covering_kappa(d_complex, epsilon, rogers_c)
    return 2.0 * d_complex * math.log2(kappa / epsilon)


def truncate_ellipsoid(axes, epsilon: float, tau: float) -> TruncationResult:
    """Drop semi-axes below tau*epsilon; survivors are covered at (1-tau)*epsilon.

    Completing covering-ball centers of the kept dimensions by zeros turns a
    (1-tau)*eps-covering of the truncated ellipsoid into an eps-covering of
    the full one, because every dropped axis is shorter than tau*eps.
    """
    axes = np.asarray(axes, dtype=float).ravel()
    if axes.size and np.any(np.diff(axes) > 0):
        raise ValueError("axes must be sorted non-increasing")
    if not (0.0 < tau < 1.0):
        raise ValueError(f"tau must be in (0,1), got {tau}")
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    threshold = tau * epsilon
    kept = int(np.sum(axes >= threshold))
    dropped_max = float(axes[kept]) if kept < axes.size else 0.0
    return TruncationResult(
        kept_dims=kept,
        dropped_max_axis=dropped_max,
        inflated_epsilon=(1.0 - tau) * epsilon,
    )


def _cell_budget() -> int:
    raw = os.environ.get(CELL_BUDGET_ENV)
    if raw is None:
        return DEFAULT_CELL_BUDGET
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError(f"{CELL_BUDGET_ENV} must be an integer, got {raw!r}") from exc


def _grid_points(axes: np.ndarray, grid_step: float, inflation: float) -> np.ndarray:
    """Grid points inside the ellipsoid inflated by the given factor."""
    counts = [2 * int(np.ceil(inflation * a / grid_step)) + 1 for a in axes]
    cells = math.prod(counts)
    budget = _cell_budget()
    if cells > budget:
        raise ResourceBudgetError(
            f"grid of {cells} cells exceeds budget {budget}; coarsen grid_step or "
            f"raise {CELL_BUDGET_ENV}"
        )
    grids = [
        np.arange(-(c // 2), c // 2 + 1, dtype=float) * grid_step for c in counts
    ]
    pts = np.stack(np.meshgrid(*grids, indexing="ij"), axis=-1).reshape(-1, axes.size)
    inside = np.sum((pts / axes) ** 2, axis=1) <= inflation**2
    return pts[inside]


def _neighbor_lists(points: np.ndarray, radius: float) -> list[np.ndarray]:
    tree = cKDTree(points)
    lists = tree.query_ball_point(points, radius)
    total = sum(len(l) for l in lists)
    if total > 60_000_000:
        raise ResourceBudgetError(
            f"covering adjacency of {total} entries is too large; coarsen grid_step"
        )
    return [np.asarray(sorted(l), dtype=np.intp) for l in lists]


def _greedy_sweep(nb: list[np.ndarray], n: int) -> int:
    """Cover the first uncovered point (grid order) with the highest-gain ball."""
    uncovered = np.ones(n, dtype=bool)
    count = 0
    while uncovered.any():
        p = int(np.argmax(uncovered))
        best_c, best_gain = -1, -1
        for c in nb[p]:
            gain = int(uncovered[nb[c]].sum())
            if gain > best_gain:
                best_gain, best_c = gain, int(c)
        uncovered[nb[best_c]] = False
        count += 1
    return count


def _greedy_weighted(nb: list[np.ndarray], n: int) -> int:
    """Global greedy on coverage gain weighted by point scarcity (1/degree)."""
    weight = np.zeros(n)
    for c in range(n):
        weight[nb[c]] += 1.0
    weight = 1.0 / weight
    uncovered = np.ones(n, dtype=bool)
    count = 0
    while uncovered.any():
        best_c, best_score = -1, -1.0
        for c in range(n):
            covered = nb[c]
            score = float(weight[covered][uncovered[covered]].sum())
            if score > best_score:
                best_score, best_c = score, c
        uncovered[nb[best_c]] = False
        count += 1
    return count


def greedy_cover_count(e: Ellipsoid, epsilon: float, grid_step: float) -> int:
    """Certified empirical upper bound on the eps-covering number, <= 3 real dims.

    The ellipsoid (inflated by the grid diagonal h = grid_step*sqrt(dims)/2,
    so every point of the body rounds to a candidate) is discretized to grid
    points, which are then covered by balls of radius eps - h placed at grid
    points.  Any point of the continuous body is within h of a covered
    candidate, so the returned centers form a valid eps-covering.  Two
    deterministic selection passes are run (grid-order sweep and
    scarcity-weighted global greedy) and the smaller count is returned.
    """
    axes = e.real_axes()
    dims = axes.size
    if dims > 3:
        raise NotSupportedError(
            f"greedy oracle limited to 3 real dimensions, got {dims}"
        )
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if not grid_step > 0 or grid_step > epsilon / 4:
        raise PreconditionError(
            f"grid_step must satisfy 0 < grid_step <= epsilon/4, got {grid_step} "
            f"for epsilon={epsilon}"
        )
    if epsilon >= float(axes.max()):
        return 1  # a single ball at the origin contains the whole body
    h = grid_step * math.sqrt(dims) / 2.0
    shrunk = epsilon - h
    points = _grid_points(axes, grid_step, inflation=1.0 + h / float(axes.min()))
    n = len(points)
    if n == 0:
        return 1
    nb = _neighbor_lists(points, shrunk)
    return min(_greedy_sweep(nb, n), _greedy_weighted(nb, n))


def sandwich_entropy(
    axes,
    epsilon: float,
    tau: float = DEFAULT_TAU,
    rogers_c: float = DEFAULT_ROGERS_C,
) -> CoveringBounds:
    """Bracket the entropy of a complex ellipsoid between volume and ball bounds.

    Lower: volume bound over the dimensions whose semi-axes are >= epsilon
    (axes below epsilon would only weaken it).  Upper: truncate at
    tau*epsilon and cover the surviving dimensions at (1-tau)*epsilon via
    the unit-ball bound; axes above 1 are handled by rescaling with the
    largest axis, which is flagged in the method tag.
    """
    axes = np.asarray(axes, dtype=float).ravel()
    if axes.size == 0:
        raise ValueError("need at least one semi-axis")
    if np.any(np.diff(axes) > 0):
        raise ValueError("axes must be sorted non-increasing")
    if axes.min() <= 0:
        raise ValueError("axes must be positive")
    if not (0.0 < tau < 1.0):
        raise ValueError(f"tau must be in (0,1), got {tau}")
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")

    kept_lower = axes[axes >= epsilon]
    lower = max(0.0, 2.0 * float(np.sum(np.log2(kept_lower / epsilon)))) if kept_lower.size else 0.0
    lower_tag = f"volume-lower(kept={kept_lower.size})"

    if epsilon >= float(axes[0]):
        # a single ball at the origin already covers the body
        return CoveringBounds(
            lower_log2=lower,
            upper_log2=max(lower, 0.0),
            epsilon=epsilon,
            methods=(lower_tag, "single-ball"),
        )

    trunc = truncate_ellipsoid(axes, epsilon, tau)
    if trunc.kept_dims == 0:
        # everything below tau*eps: the whole body fits in a single eps-ball
        return CoveringBounds(
            lower_log2=lower,
            upper_log2=max(lower, 0.0),
            epsilon=epsilon,
            methods=(lower_tag, "fully-truncated"),
        )
    eps_upper = trunc.inflated_epsilon
    upper_tag = f"ball-upper(kept={trunc.kept_dims},tau={tau:g})"
    scale = float(axes[0])
    if scale > 1.0:
        eps_upper = eps_upper / scale
        upper_tag += ",rescaled"
    if eps_upper >= 1.0:
        upper = 0.0
        upper_tag += ",trivial"
    else:
        upper = ball_covering_upper(trunc.kept_dims, eps_upper, rogers_c)
    return CoveringBounds(
        lower_log2=lower,
        upper_log2=max(upper, lower),
        epsilon=epsilon,
        methods=(lower_tag, upper_tag),
    )


def axes_digest(axes) -> str:
    """Short stable identifier for a semi-axis tuple, used in oracle exports."""
    axes = np.asarray(axes, dtype=float).ravel()
    blob = ",".join(format(a, ".17g") for a in axes).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def export_bounds_csv(
    path: str | Path,
    rows: list[dict],
) -> None:
    """Write oracle results as CSV with the canonical column set.

    Each row dict provides axes, epsilon, tau, lower/upper bits and an
    optional greedy count (empty when the oracle was not runnable).
    """
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["axes_hash", "epsilon", "tau", "lower_bits", "upper_bits", "greedy_count"]
        )
        for row in rows:
            writer.writerow(
                [
                    axes_digest(row["axes"]),
                    format(float(row["epsilon"]), ".17g"),
                    format(float(row["tau"]), ".17g"),
                    format(float(row["lower_bits"]), ".17g"),
                    format(float(row["upper_bits"]), ".17g"),
                    "" if row.get("greedy_count") is None else int(row["greedy_count"]),
                ]
            )
