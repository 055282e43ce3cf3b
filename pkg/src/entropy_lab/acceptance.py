"""Self-validation criteria binding the formula routes to independent oracles.

Each criterion returns a machine-readable record; `run_criteria` drives them
for the `validate` CLI command and the test suite reuses the same functions.
The fast suite skips the high-node Nystrom runs and the large lattice count;
those criteria are reported as skipped, not silently dropped.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import covering, spectra
from .asymptotics import (
    LN2,
    carl_supremum,
    entropy_from_counting_model,
    entropy_from_eigenvalue_model,
    entropy_numbers_from_counting_model,
    entropy_numbers_from_eigenvalue_model,
    invert_second_order,
)
from .sequence_model import (
    CountingModel,
    EigenvalueModel,
    counting_to_eigenvalue_model,
    empirical_counting,
)

TWO_OVER_PI = 2.0 / math.pi


@dataclass
class CriterionResult:
    cid: str
    name: str
    status: str  # pass | fail | skipped
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def _rel_err(got: float, want: float) -> float:
    return abs(got - want) / max(abs(want), 1e-300)


def random_counting_models(rng: np.random.Generator, n: int) -> list[CountingModel]:
    """Seeded admissible counting models, mostly two-term, some pure power law."""
    models = []
    while len(models) < n:
        beta1 = rng.uniform(0.3, 4.0)
        if rng.uniform() < 0.2:
            models.append(CountingModel(kappa1=rng.uniform(0.1, 10.0), beta1=beta1))
            continue
        # stay away from the regime boundaries beta1/2 and beta1
        frac = rng.uniform(0.55, 0.95)
        beta2 = beta1 * frac
        kappa2 = rng.uniform(-5.0, 5.0)
        models.append(
            CountingModel(
                kappa1=rng.uniform(0.1, 10.0), beta1=beta1, kappa2=kappa2, beta2=beta2
            )
        )
    return models


def criterion_donoho(seed: int, cache: dict) -> tuple[bool, dict]:
    """Leading Sobolev constant on (0, 2*pi) in d=1 equals 2k/ln 2."""
    worst = 0.0
    for k in (1, 2, 3):
        cfg = spectra.SobolevConfig(k=k, box=spectra.BoxDomain((2.0 * math.pi,)))
        exp = spectra.sobolev_entropy(cfg, "one-term")
        worst = max(worst, _rel_err(exp.A, 2.0 * k / LN2))
        worst = max(worst, abs(exp.a - 1.0 / k))
    return worst <= 1e-12, {"max_rel_err": worst, "tolerance": 1e-12}


def criterion_commutation(seed: int, cache: dict) -> tuple[bool, dict]:
    """Counting route equals conversion + eigenvalue route, coefficientwise."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for cm in random_counting_models(rng, 100):
        em = counting_to_eigenvalue_model(cm)
        h_direct = entropy_from_counting_model(cm)
        h_via = entropy_from_eigenvalue_model(em)
        n_direct = entropy_numbers_from_counting_model(cm)
        n_via = entropy_numbers_from_eigenvalue_model(em)
        for direct, via in ((h_direct, h_via), (n_direct, n_via)):
            worst = max(worst, _rel_err(via.A, direct.A), _rel_err(via.a, direct.a))
            denom = max(abs(direct.B), abs(via.B), 1e-300)
            worst = max(worst, abs(via.B - direct.B) / denom if direct.B or via.B else 0.0)
            worst = max(worst, _rel_err(via.b, direct.b))
    return worst <= 1e-12, {"max_rel_err": worst, "models": 100, "tolerance": 1e-12}


def criterion_carl(seed: int, cache: dict) -> tuple[bool, dict]:
    """Supremum asymptotics and the factor-6 sandwich for lambda_n = 1/n."""
    harmonic = EigenvalueModel(c1=1.0, alpha1=1.0)
    res = carl_supremum(harmonic, m=10_000, n_max=1_000_000)
    scaled = res.value * 10_000 * LN2
    ok = 0.95 <= scaled <= 1.05
    details = {"scaled_supremum": scaled, "n_star": res.n_star}
    first_term = entropy_numbers_from_eigenvalue_model(harmonic)
    ratios = {}
    for m in (10, 100, 1_000, 10_000):
        sup = carl_supremum(harmonic, m=m, n_max=1_000_000)
        ratio = (first_term.A * m ** (-first_term.a)) / sup.value
        ratios[f"m={m}"] = ratio
        ok = ok and (1.0 <= ratio <= 6.0)
    details["first_term_over_supremum"] = ratios
    return ok, details


def _bisect_root(kappa1, kappa2, beta1, beta2, n, rel_tol=1e-14) -> float:
    """Root of kappa1*z**(-beta1) + kappa2*z**(-beta2) = n by bisection."""

    def f(z):
        return kappa1 * z ** (-beta1) + kappa2 * z ** (-beta2) - n

    lead = (kappa1 / n) ** (1.0 / beta1)
    lo, hi = lead * 1e-3, lead * 1e3
    while f(lo) <= 0:
        lo /= 10.0
    while f(hi) >= 0:
        hi *= 10.0
    while (hi - lo) > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def criterion_inversion(seed: int, cache: dict) -> tuple[bool, dict]:
    """Two-term inversion tracks exact roots within 10% of the second term."""
    rng = np.random.default_rng(seed)
    ok = True
    worst_frac = 0.0
    for _ in range(10):
        beta1 = rng.uniform(0.8, 3.0)
        beta2 = beta1 * rng.uniform(0.5, 0.8)
        kappa1 = rng.uniform(0.5, 5.0)
        kappa2 = float(rng.choice((-1.0, 1.0))) * rng.uniform(0.2, 1.0) * kappa1
        inv = invert_second_order(kappa1, kappa2, beta1, beta2)
        fracs = []
        for n in (10_000, 1_000_000):
            exact = _bisect_root(kappa1, kappa2, beta1, beta2, n)
            two_term = inv.c_lead * n**inv.e_lead + inv.c_second * n**inv.e_second
            second = abs(inv.c_second) * n**inv.e_second
            fracs.append(abs(exact - two_term) / second)
        ok = ok and fracs[1] < 0.10 and fracs[1] < fracs[0]
        worst_frac = max(worst_frac, fracs[1])
    return ok, {"worst_residual_fraction_at_1e6": worst_frac, "tolerance": 0.10}


def _lps_sample(cache: dict, sigma: float, r: float, nodes: int):
    key = ("lps", sigma, r, nodes)
    if key not in cache:
        cache[key] = spectra.lps_eigenvalues(
            spectra.LPSConfig(sigma=sigma, r=r, nodes=nodes)
        )
    return cache[key]


def criterion_lps_plateau(seed: int, cache: dict) -> tuple[bool, dict]:
    """Plateau width matches the time-bandwidth product at sigma=1, r=20."""
    sample = _lps_sample(cache, 1.0, 20.0, 600)
    raw_min = sample.params["raw_min"]
    raw_max = sample.params["raw_max"]
    ok = raw_min >= -1e-8 and raw_max <= 1.0 + 1e-8
    count_half = empirical_counting(sample, 0.5)
    ok = ok and 11 <= count_half <= 15
    cfg = spectra.LPSConfig(sigma=1.0, r=20.0, nodes=600)
    rates = {}
    for gamma in (0.2, 0.5, 0.8):
        rate = spectra.lps_counting_rate(cfg, gamma, spectrum=sample)
        rates[f"gamma={gamma}"] = rate
        ok = ok and abs(rate - TWO_OVER_PI) <= 0.1
    return ok, {
        "raw_min": raw_min,
        "raw_max": raw_max,
        "count_at_0.5": count_half,
        "shannon_number": 2.0 * 20.0 / math.pi,
        "rates": rates,
        "rate_limit": TWO_OVER_PI,
    }


def lps_sandwich_normalized(sample, r: float, epsilon: float, tau: float = 0.5):
    """Covering sandwich of a Nystrom spectrum, in bits per unit 2r."""
    axes = sample.values[sample.values > 0]
    bounds = covering.sandwich_entropy(axes, epsilon, tau=tau)
    return bounds.lower_log2 / (2.0 * r), bounds.upper_log2 / (2.0 * r)


def criterion_lps_sandwich(seed: int, cache: dict) -> tuple[bool, dict]:
    """Sandwich brackets the limiting rate; midpoint error shrinks with r.

    At desk scale the upper branch is dominated by the dimension-dependent
    covering constant (which tends to 1 only as r grows), so the +/-25%
    tolerance is enforced on the lower endpoint and on bracket containment,
    while the upper endpoint enters through the midpoint-convergence check.
    """
    rate = TWO_OVER_PI * 1.0  # log2(1/0.5) = 1 bit
    mids = {}
    details = {"theoretical_rate": rate}
    ok = True
    for r, nodes in ((10.0, 300), (20.0, 600)):
        sample = _lps_sample(cache, 1.0, r, nodes)
        low, up = lps_sandwich_normalized(sample, r, epsilon=0.5, tau=0.5)
        mids[r] = 0.5 * (low + up)
        details[f"r={r:g}"] = {"lower": low, "upper": up, "midpoint": mids[r]}
        ok = ok and low <= up
    low20 = details["r=20"]["lower"]
    up20 = details["r=20"]["upper"]
    ok = ok and abs(low20 - rate) <= 0.25 * rate
    ok = ok and low20 <= rate * 1.25 and up20 >= rate * 0.75
    ok = ok and abs(mids[20.0] - rate) <= abs(mids[10.0] - rate)
    details["midpoint_distance_r10"] = abs(mids[10.0] - rate)
    details["midpoint_distance_r20"] = abs(mids[20.0] - rate)
    return ok, details


def criterion_weyl(seed: int, cache: dict) -> tuple[bool, dict]:
    """Two-term lattice count of the unit-pi cube at gamma = 1e4."""
    box = spectra.BoxDomain((math.pi, math.pi, math.pi))
    gamma = 1e4
    count = spectra.box_laplacian_counting(box, gamma)
    cm = spectra.sobolev_counting_model(spectra.SobolevConfig(k=1, box=box), "two-term")
    ok = _rel_err(cm.kappa1, math.pi / 6.0) <= 1e-12
    ok = ok and _rel_err(cm.kappa2, -3.0 * math.pi / 8.0) <= 1e-12
    pred1 = cm.kappa1 * gamma**1.5
    pred2 = pred1 + cm.kappa2 * gamma
    ok = ok and abs(count - pred1) / count <= 0.03
    ok = ok and abs(count - pred2) / count <= 0.01
    ok = ok and (count - pred1) < 0  # boundary term reduces the count
    return ok, {
        "count": count,
        "one_term_prediction": pred1,
        "two_term_prediction": pred2,
        "one_term_rel_err": abs(count - pred1) / count,
        "two_term_rel_err": abs(count - pred2) / count,
    }


def criterion_covering(seed: int, cache: dict) -> tuple[bool, dict]:
    """Volume lower <= greedy count <= ball upper on the complex unit disk."""
    disk = covering.Ellipsoid([1.0], field="complex")
    ok = True
    details = {}
    for eps in (0.5, 0.3):
        lower = covering.volume_lower_bound(disk, eps)
        count = covering.greedy_cover_count(disk, eps, grid_step=eps / 8.0)
        upper = covering.ball_covering_upper(1, eps)
        ok = ok and lower <= math.log2(count) <= upper
        details[f"eps={eps}"] = {
            "lower_bits": lower,
            "greedy_count": count,
            "upper_bits": upper,
        }
    ok = ok and details["eps=0.5"]["lower_bits"] == 2.0
    ok = ok and details["eps=0.5"]["greedy_count"] <= 9
    return ok, details


def criterion_determinism(seed: int, cache: dict) -> tuple[bool, dict]:
    """Two fast validation passes serialize to byte-identical reports."""
    from .report import dumps_canonical

    payloads = []
    for _ in range(2):
        results = run_criteria("fast", seed=seed, include_determinism=False)
        payloads.append(
            dumps_canonical(
                [
                    {"cid": r.cid, "status": r.status, "details": r.details}
                    for r in results
                ]
            )
        )
    return payloads[0] == payloads[1], {"bytes": len(payloads[0].encode())}


# (cid, name, runs_in_fast_suite, function)
CRITERIA = [
    ("C1", "donoho-constant", True, criterion_donoho),
    ("C2", "counting-route-commutation", True, criterion_commutation),
    ("C3", "carl-supremum-asymptotics", True, criterion_carl),
    ("C4", "inversion-lemmas", True, criterion_inversion),
    ("C5", "lps-plateau", False, criterion_lps_plateau),
    ("C6", "lps-entropy-rate-sandwich", False, criterion_lps_sandwich),
    ("C7", "weyl-two-term", False, criterion_weyl),
    ("C8", "covering-sandwich", True, criterion_covering),
    ("C9", "validate-determinism", True, criterion_determinism),
]


def run_criteria(
    suite: str = "full",
    seed: int = 0,
    include_determinism: bool = True,
    cache: dict | None = None,
) -> list[CriterionResult]:
    """Run the acceptance criteria; 'fast' skips big Nystrom/lattice runs."""
    if suite not in ("fast", "full"):
        raise ValueError(f"suite must be 'fast' or 'full', got {suite!r}")
    cache = {} if cache is None else cache
    out = []
    for cid, name, fast_ok, fn in CRITERIA:
        if suite == "fast" and not fast_ok:
            out.append(CriterionResult(cid=cid, name=name, status="skipped"))
            continue
        if cid == "C9" and not include_determinism:
            continue
        start = time.perf_counter()
        try:
            passed, details = fn(seed, cache)
            status = "pass" if passed else "fail"
        except Exception as exc:  # criterion crashes are failures, not process errors
            status = "fail"
            details = {"error": f"{type(exc).__name__}: {exc}"}
        out.append(
            CriterionResult(
                cid=cid,
                name=name,
                status=status,
                details=details,
                seconds=time.perf_counter() - start,
            )
        )
    return out
