"""Two-term entropy and entropy-number expansions, series inversion, and the
classical geometric-mean supremum bound used for comparison.

All expansions have the shape A*x**(-a) + B*x**(-b), in epsilon for metric
entropy (bits) and in m (the bit budget) for entropy numbers.  Remainder
terms are not represented; reports always print the evaluation point so the
asymptotic caveat stays visible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .errors import NotSupportedError, RegimeError, SpectrumDomainError
from .sequence_model import (
    CountingModel,
    EigenvalueModel,
    SpectrumSample,
    fit_tail_model,
    model_values,
)

LN2 = math.log(2.0)

# carl_supremum evaluates the objective in chunks of this many N values.
_CARL_CHUNK = 65536


@dataclass(frozen=True)
class EntropyExpansion:
    """H(eps) ~ A*eps**(-a) + B*eps**(-b), in bits."""

    A: float
    a: float
    B: float = 0.0
    b: float | None = None
    variable: str = "epsilon"

    def __post_init__(self):
        if self.b is None:
            object.__setattr__(self, "b", self.a)
        if not (self.A > 0 and self.a > 0 and self.b > 0):
            raise ValueError(f"need A > 0 and positive exponents, got {self}")


@dataclass(frozen=True)
class EntropyNumberExpansion:
    """eps_m ~ A*m**(-a) + B*m**(-b)."""

    A: float
    a: float
    B: float = 0.0
    b: float | None = None
    variable: str = "m"

    def __post_init__(self):
        if self.b is None:
            object.__setattr__(self, "b", self.a)
        if not (self.A > 0 and self.a > 0 and self.b > 0):
            raise ValueError(f"need A > 0 and positive exponents, got {self}")


Expansion = Union[EntropyExpansion, EntropyNumberExpansion]


def eval_expansion(exp: Expansion, x) -> float | np.ndarray:
    """Evaluate A*x**(-a) + B*x**(-b) at x > 0 (scalar or array)."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("expansion evaluation point must be positive")
    out = exp.A * x ** (-exp.a) + exp.B * x ** (-exp.b)
    return float(out) if out.ndim == 0 else out


def entropy_from_eigenvalue_model(model: EigenvalueModel) -> EntropyExpansion:
    """Entropy expansion of an operator with two-term eigenvalue decay.

    A = alpha1*c1**(1/alpha1)/ln 2,             a = 1/alpha1,
    B = c2*c1**((1-alpha2)/alpha1) / (ln 2 * (alpha1-alpha2+1)),
    b = (alpha1-alpha2+1)/alpha1.
    """
    c1, a1, c2, a2 = model.c1, model.alpha1, model.c2, model.alpha2
    A = a1 * c1 ** (1.0 / a1) / LN2
    a = 1.0 / a1
    if model.pure_power_law:
        return EntropyExpansion(A=A, a=a, B=0.0, b=a)
    B = c2 * c1 ** ((1.0 - a2) / a1) / (LN2 * (a1 - a2 + 1.0))
    b = (a1 - a2 + 1.0) / a1
    return EntropyExpansion(A=A, a=a, B=B, b=b)


def entropy_numbers_from_eigenvalue_model(model: EigenvalueModel) -> EntropyNumberExpansion:
    """Entropy-number expansion matching `entropy_from_eigenvalue_model`.

    A = c1*(alpha1/ln 2)**alpha1,  a = alpha1,
    B = c2/(alpha1-alpha2+1) * (alpha1/ln 2)**alpha2,  b = alpha2.
    """
    c1, a1, c2, a2 = model.c1, model.alpha1, model.c2, model.alpha2
    A = c1 * (a1 / LN2) ** a1
    if model.pure_power_law:
        return EntropyNumberExpansion(A=A, a=a1, B=0.0, b=a1)
    B = c2 / (a1 - a2 + 1.0) * (a1 / LN2) ** a2
    return EntropyNumberExpansion(A=A, a=a1, B=B, b=a2)


def entropy_from_counting_model(cm: CountingModel) -> EntropyExpansion:
    """Entropy expansion straight from a counting model.

    A = kappa1/(beta1 ln 2), a = beta1;  B = kappa2/(beta2 ln 2), b = beta2.
    """
    A = cm.kappa1 / (cm.beta1 * LN2)
    if cm.pure_power_law:
        return EntropyExpansion(A=A, a=cm.beta1, B=0.0, b=cm.beta1)
    B = cm.kappa2 / (cm.beta2 * LN2)
    return EntropyExpansion(A=A, a=cm.beta1, B=B, b=cm.beta2)


def entropy_numbers_from_counting_model(cm: CountingModel) -> EntropyNumberExpansion:
    """Entropy-number expansion from a counting model.

    With beta* = beta1/(1 + beta1 - beta2):
    A = (kappa1/(beta1 ln 2))**(1/beta1),  a = 1/beta1,
    B = kappa2/(kappa1*beta2) * (kappa1/(beta1 ln 2))**(1/beta*),  b = 1/beta*.
    """
    lead = cm.kappa1 / (cm.beta1 * LN2)
    A = lead ** (1.0 / cm.beta1)
    a = 1.0 / cm.beta1
    if cm.pure_power_law:
        return EntropyNumberExpansion(A=A, a=a, B=0.0, b=a)
    inv_bstar = 1.0 / cm.beta_star
    B = cm.kappa2 / (cm.kappa1 * cm.beta2) * lead**inv_bstar
    return EntropyNumberExpansion(A=A, a=a, B=B, b=inv_bstar)


class FirstOrderInversion(NamedTuple):
    coefficient: float
    exponent: float


class SecondOrderInversion(NamedTuple):
    c_lead: float
    e_lead: float
    c_second: float
    e_second: float


def invert_first_order(kappa1: float, beta1: float) -> FirstOrderInversion:
    """Leading-order solution of n = kappa1*zeta**(-beta1) for zeta as n grows.

    zeta_n ~ kappa1**(1/beta1) * n**(-1/beta1).
    """
    if not (kappa1 > 0 and beta1 > 0):
        raise ValueError(f"kappa1 and beta1 must be positive, got {kappa1}, {beta1}")
    return FirstOrderInversion(kappa1 ** (1.0 / beta1), -1.0 / beta1)


def invert_second_order(
    kappa1: float, kappa2: float, beta1: float, beta2: float
) -> SecondOrderInversion:
    """Two-term solution of n = kappa1*zeta**(-beta1) + kappa2*zeta**(-beta2).

    Requires beta1 > beta2 > 0.  Returns
    zeta_n ~ kappa1**(1/beta1) * n**(-1/beta1)
             + kappa1**((1-beta2)/beta1)*kappa2/beta1 * n**(beta2/beta1 - 1/beta1 - 1).
    """
    if not (kappa1 > 0):
        raise ValueError(f"kappa1 must be positive, got {kappa1}")
    if not (beta1 > beta2 > 0):
        raise RegimeError(
            f"second-order inversion requires beta1 > beta2 > 0, got "
            f"beta1={beta1}, beta2={beta2}"
        )
    c_lead = kappa1 ** (1.0 / beta1)
    e_lead = -1.0 / beta1
    c_second = kappa1 ** ((1.0 - beta2) / beta1) * kappa2 / beta1
    e_second = beta2 / beta1 - 1.0 / beta1 - 1.0
    return SecondOrderInversion(c_lead, e_lead, c_second, e_second)


@dataclass(frozen=True)
class CarlBoundResult:
    """Supremum of 2**(-m/N) * geomean(lambda_1..lambda_N) over N.

    ``n_star`` is the smallest maximizing N; ``boundary_hit`` flags a
    maximizer at the search limit, i.e. the supremum may lie beyond n_max.
    """

    value: float
    n_star: int
    m: int
    boundary_hit: bool = False


def _log_lambdas(source, n_first: int, n_last: int) -> np.ndarray:
    """ln(lambda_n) for n in [n_first, n_last]; errors on non-positive values."""
    if isinstance(source, EigenvalueModel):
        vals = model_values(source, n_first, n_last)
    elif isinstance(source, SpectrumSample):
        vals = source.values[n_first - 1 : n_last]
    else:
        raise TypeError(f"unsupported spectrum source {type(source).__name__}")
    if vals.size and vals.min() <= 0:
        n_bad = n_first + int(np.argmax(vals <= 0))
        raise SpectrumDomainError(f"non-positive eigenvalue at n={n_bad}")
    return np.log(vals)


def _tail_exponent_estimate(source, n_eff: int) -> float | None:
    """Rough decay exponent used only to size the early-stop patience."""
    if isinstance(source, EigenvalueModel):
        return source.alpha1
    first = max(1, n_eff // 2)
    if n_eff - first + 1 < 4:
        return None
    try:
        fit = fit_tail_model(source, (first, n_eff))
    except Exception:
        return None
    return fit.model.alpha1 if fit.model.alpha1 > 0 else None


def carl_supremum(source, m: int, n_max: int) -> CarlBoundResult:
    """Exhaustively maximize 2**(-m/N) * (prod_{n<=N} lambda_n)**(1/N) over N.

    Evaluation runs in log space (running sum of ln lambda_n, no product
    underflow) for N = 1..n_max, stopping early once the objective has
    decreased for 3*ceil(ln(2)*m/alpha_hat) consecutive N, since the
    maximizer of a decaying spectrum sits near ln(2)*m/alpha1.  Ties pick
    the smallest N.
    """
    if m < 1 or n_max < 1:
        raise ValueError("m and n_max must be >= 1")
    n_eff = n_max
    if isinstance(source, SpectrumSample):
        n_eff = min(n_max, len(source))
        if n_eff == 0:
            raise SpectrumDomainError("empty spectrum sample")

    alpha_hat = _tail_exponent_estimate(source, n_eff)
    patience = None
    if alpha_hat is not None:
        patience = 3 * math.ceil(LN2 * m / alpha_hat)

    best_log = -math.inf
    best_n = 0
    log_sum = 0.0
    prev_obj = None
    decreasing_run = 0
    stopped_early = False

    n_lo = 1
    while n_lo <= n_eff:
        n_hi = min(n_lo + _CARL_CHUNK - 1, n_eff)
        logs = _log_lambdas(source, n_lo, n_hi)
        cums = log_sum + np.cumsum(logs)
        ns = np.arange(n_lo, n_hi + 1, dtype=float)
        obj = (-m * LN2 + cums) / ns
        log_sum = float(cums[-1])

        idx = int(np.argmax(obj))
        if obj[idx] > best_log:
            best_log = float(obj[idx])
            best_n = n_lo + idx

        if patience is not None:
            # extend the run of consecutive strict decreases across chunks
            full = obj if prev_obj is None else np.concatenate(([prev_obj], obj))
            dec = np.diff(full) < 0
            resets = np.flatnonzero(~dec)
            if resets.size == 0:
                decreasing_run += dec.size
            else:
                head_run = decreasing_run + int(resets[0])
                gaps = np.diff(resets) - 1
                max_gap = int(gaps.max()) if gaps.size else 0
                decreasing_run = dec.size - 1 - int(resets[-1])
                if head_run >= patience or max_gap >= patience:
                    stopped_early = True
            prev_obj = float(obj[-1])
            if decreasing_run >= patience:
                stopped_early = True
            if stopped_early:
                break
        n_lo = n_hi + 1

    return CarlBoundResult(
        value=math.exp(best_log),
        n_star=best_n,
        m=m,
        boundary_hit=(not stopped_early and best_n == n_eff),
    )


def carl_asymptotic(model: EigenvalueModel, m: int) -> float:
    """Leading term c1*(alpha1/ln 2)**alpha1 * m**(-alpha1) of the supremum.

    Only stated for pure power laws lambda_n ~ c1*n**(-alpha1).
    """
    if not model.pure_power_law:
        raise NotSupportedError(
            "the supremum asymptotics are only available for pure power-law models"
        )
    if m < 1:
        raise ValueError("m must be >= 1")
    return model.c1 * (model.alpha1 / LN2) ** model.alpha1 * float(m) ** (-model.alpha1)
