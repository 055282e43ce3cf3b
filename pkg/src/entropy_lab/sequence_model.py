"""Eigenvalue and counting-function models for compact positive operators.

Two model families are supported, both two-term power laws:

* ``EigenvalueModel``: lambda_n = c1 * n**(-alpha1) + c2 * n**(-alpha2)
* ``CountingModel``:   M(gamma) = kappa1 * gamma**(-beta1) + kappa2 * gamma**(-beta2)

plus ``SpectrumSample`` for finite, numerically computed spectra.  The
admissible exponent regimes are enforced strictly at construction; boundary
cases are rejected with a distinct error code because the expansions derived
from these models do not cover them.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import FitDomainError, RegimeError, SpectrumDomainError

# Negative eigenvalues above this magnitude are treated as data errors rather
# than roundoff; smaller ones are clamped to zero.
TOL_CLAMP = 1e-10

SPECTRUM_SOURCES = ("analytic", "nystrom", "lattice", "file")


@dataclass(frozen=True)
class EigenvalueModel:
    """Two-term decay model lambda_n = c1/n**alpha1 + c2/n**alpha2.

    Admissible regimes:
      A: alpha1 < alpha2 < alpha1 + 1/2
      B: alpha1 == alpha2 and c2 == 0  (pure power law)
    """

    c1: float
    alpha1: float
    c2: float = 0.0
    alpha2: float | None = None

    def __post_init__(self):
        if self.alpha2 is None:
            object.__setattr__(self, "alpha2", self.alpha1)
        if not (self.c1 > 0):
            raise RegimeError(f"c1 must be positive, got {self.c1}")
        if not (self.alpha1 > 0 and self.alpha2 > 0):
            raise RegimeError(
                f"exponents must be positive, got alpha1={self.alpha1}, alpha2={self.alpha2}"
            )
        if self.alpha1 == self.alpha2 and self.c2 == 0.0:
            return  # regime B
        if self.alpha2 == self.alpha1 + 0.5:
            raise RegimeError(
                f"alpha2 == alpha1 + 1/2 is a regime boundary not covered by the "
                f"expansions (alpha1={self.alpha1}, alpha2={self.alpha2})",
                code="regime-boundary",
            )
        if not (self.alpha1 < self.alpha2 < self.alpha1 + 0.5):
            raise RegimeError(
                f"need alpha1 < alpha2 < alpha1 + 1/2 (or alpha1 == alpha2 with c2 == 0); "
                f"got alpha1={self.alpha1}, alpha2={self.alpha2}, c2={self.c2}"
            )

    @property
    def pure_power_law(self) -> bool:
        return self.alpha1 == self.alpha2 and self.c2 == 0.0


@dataclass(frozen=True)
class CountingModel:
    """Two-term counting model M(gamma) = kappa1*gamma**(-beta1) + kappa2*gamma**(-beta2).

    Admissible regimes:
      A: beta1/2 < beta2 < beta1
      B: beta1 == beta2 and kappa2 == 0
    """

    kappa1: float
    beta1: float
    kappa2: float = 0.0
    beta2: float | None = None

    def __post_init__(self):
        if self.beta2 is None:
            object.__setattr__(self, "beta2", self.beta1)
        if not (self.kappa1 > 0):
            raise RegimeError(f"kappa1 must be positive, got {self.kappa1}")
        if not (self.beta1 > 0 and self.beta2 > 0):
            raise RegimeError(
                f"exponents must be positive, got beta1={self.beta1}, beta2={self.beta2}"
            )
        if self.beta1 == self.beta2 and self.kappa2 == 0.0:
            return  # regime B
        if self.beta2 == self.beta1 / 2:
            raise RegimeError(
                f"beta2 == beta1/2 is a regime boundary not covered by the expansions "
                f"(beta1={self.beta1}, beta2={self.beta2})",
                code="regime-boundary",
            )
        if not (self.beta1 / 2 < self.beta2 < self.beta1):
            raise RegimeError(
                f"need beta1/2 < beta2 < beta1 (or beta1 == beta2 with kappa2 == 0); "
                f"got beta1={self.beta1}, beta2={self.beta2}, kappa2={self.kappa2}"
            )

    @property
    def beta_star(self) -> float:
        """Derived exponent beta1/(1 + beta1 - beta2); never stored."""
        return self.beta1 / (1.0 + self.beta1 - self.beta2)

    @property
    def pure_power_law(self) -> bool:
        return self.beta1 == self.beta2 and self.kappa2 == 0.0


@dataclass(frozen=True, eq=False)
class SpectrumSample:
    """Finite list of computed eigenvalues, sorted non-increasing.

    Unsorted input is sorted (stable), not rejected.  Values in
    [-TOL_CLAMP, 0) are clamped to zero; values below -TOL_CLAMP are
    rejected, since the modeled operators are positive and larger negative
    values indicate a broken discretization rather than roundoff.
    """

    values: np.ndarray
    source: str = "file"
    params: Mapping = field(default_factory=dict)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float).ravel()
        if vals.size and vals.min() < -TOL_CLAMP:
            raise SpectrumDomainError(
                f"eigenvalue {vals.min()} below -{TOL_CLAMP}; refusing to clamp"
            )
        vals = np.clip(vals, 0.0, None)
        # stable sort so ties keep input order
        order = np.argsort(-vals, kind="stable")
        vals = vals[order]
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if self.source not in SPECTRUM_SOURCES:
            raise ValueError(f"unknown source tag {self.source!r}; expected one of {SPECTRUM_SOURCES}")
        object.__setattr__(self, "params", dict(self.params))

    def __len__(self) -> int:
        return int(self.values.size)


def eval_model(model: EigenvalueModel, n: int) -> float:
    """Evaluate lambda_n = c1*n**(-alpha1) + c2*n**(-alpha2) at integer n >= 1.

    No clamping: the result may be non-positive for adversarial c2, and
    callers that require positivity must check.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return model.c1 * float(n) ** (-model.alpha1) + model.c2 * float(n) ** (-model.alpha2)


def model_values(model: EigenvalueModel, n_first: int, n_last: int) -> np.ndarray:
    """Vector of lambda_n for n in [n_first, n_last], both ends inclusive."""
    n = np.arange(n_first, n_last + 1, dtype=float)
    return model.c1 * n ** (-model.alpha1) + model.c2 * n ** (-model.alpha2)


def empirical_counting(sample: SpectrumSample, gamma: float) -> int:
    """Number of sample values >= gamma (inclusive at the threshold)."""
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    # values are sorted non-increasing
    return int(np.searchsorted(-sample.values, -gamma, side="right"))


def counting_to_eigenvalue_model(cm: CountingModel) -> EigenvalueModel:
    """Convert a counting model to the equivalent eigenvalue decay model.

    c1 = kappa1**(1/beta1),  alpha1 = 1/beta1,
    c2 = kappa1**((1-beta2)/beta1) * kappa2 / beta1,
    alpha2 = 1 + (1 - beta2)/beta1.

    A valid counting regime always maps to a valid eigenvalue regime; a
    construction failure here would mean the conversion itself is wrong.
    """
    c1 = cm.kappa1 ** (1.0 / cm.beta1)
    alpha1 = 1.0 / cm.beta1
    if cm.pure_power_law:
        c2, alpha2 = 0.0, alpha1
    else:
        c2 = cm.kappa1 ** ((1.0 - cm.beta2) / cm.beta1) * cm.kappa2 / cm.beta1
        alpha2 = 1.0 + (1.0 - cm.beta2) / cm.beta1
    try:
        return EigenvalueModel(c1=c1, alpha1=alpha1, c2=c2, alpha2=alpha2)
    except RegimeError as exc:  # pragma: no cover - unreachable for valid input
        raise AssertionError(
            f"counting-to-eigenvalue conversion produced an inadmissible model: {exc}"
        ) from exc


@dataclass(frozen=True)
class TailFit:
    """Result of a log-log least-squares tail fit."""

    model: EigenvalueModel
    residual_rms: float
    window: tuple[int, int]


def fit_tail_model(sample: SpectrumSample, window: tuple[int, int]) -> TailFit:
    """Fit log(lambda_n) ~ log(c1) - alpha1*log(n) over a 1-based index window.

    Only the leading power law is fitted (returned with c2 = 0); two-term
    fitting is ill-conditioned and second-order terms are supplied
    analytically where needed.  The window must contain at least 4 strictly
    positive values.
    """
    first, last = int(window[0]), int(window[1])
    if first < 1 or last > len(sample) or first > last:
        raise FitDomainError(
            f"window {window} out of range for a sample of length {len(sample)}"
        )
    vals = sample.values[first - 1 : last]
    if vals.size < 4:
        raise FitDomainError(f"window {window} has {vals.size} indices, need >= 4")
    if vals.min() <= 0:
        raise FitDomainError(f"window {window} contains non-positive values")
    logn = np.log(np.arange(first, last + 1, dtype=float))
    logv = np.log(vals)
    design = np.column_stack([np.ones_like(logn), -logn])
    coef, *_ = np.linalg.lstsq(design, logv, rcond=None)
    log_c1, alpha1 = float(coef[0]), float(coef[1])
    resid = logv - design @ coef
    rms = float(np.sqrt(np.mean(resid**2)))
    model = EigenvalueModel(c1=math.exp(log_c1), alpha1=alpha1, c2=0.0, alpha2=alpha1)
    return TailFit(model=model, residual_rms=rms, window=(first, last))


def save_spectrum(sample: SpectrumSample, path: str | Path) -> None:
    """Write a spectrum as CSV (`index,lambda`, 1-based) plus a JSON sidecar."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["index", "lambda"])
        for i, v in enumerate(sample.values, start=1):
            writer.writerow([i, format(float(v), ".17g")])
    sidecar = {"source": sample.source, "params": sample.params}
    path.with_suffix(".json").write_text(json.dumps(sidecar, sort_keys=True) + "\n")


def load_spectrum(path: str | Path) -> SpectrumSample:
    """Load a spectrum CSV; values may be in any order and are sorted on load.

    If `<path>.json` (suffix replaced) exists it supplies source/params
    metadata, otherwise the sample is tagged as coming from a file.
    """
    path = Path(path)
    values = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [h.strip().lower() for h in header[:2]] != ["index", "lambda"]:
            raise ValueError(f"expected header 'index,lambda' in {path}, got {header}")
        for row in reader:
            if not row:
                continue
            values.append(float(row[1]))
    source, params = "file", {}
    sidecar = path.with_suffix(".json")
    if sidecar.exists():
        meta = json.loads(sidecar.read_text())
        source = meta.get("source", "file")
        params = meta.get("params", {})
    return SpectrumSample(values=np.asarray(values), source=source, params=params)
