"""Metric entropy and entropy numbers of compact operators.

The library turns eigenvalue or eigenvalue-counting models into two-term
entropy and entropy-number expansions, cross-validates them against
brute-force covering oracles, and computes reference spectra (sinc-kernel
time-band limiting, box Laplacians) to feed the models.
"""

__version__ = "0.1.0"

from .errors import (
    DiscretizationError,
    EntropyLabError,
    FitDomainError,
    HypothesisError,
    NotSupportedError,
    NumericalConvergenceError,
    PreconditionError,
    RegimeError,
    ResourceBudgetError,
    SpectrumDomainError,
)
from .sequence_model import (
    CountingModel,
    EigenvalueModel,
    SpectrumSample,
    TailFit,
    counting_to_eigenvalue_model,
    empirical_counting,
    eval_model,
    fit_tail_model,
    load_spectrum,
    save_spectrum,
)
from .asymptotics import (
    CarlBoundResult,
    EntropyExpansion,
    EntropyNumberExpansion,
    carl_asymptotic,
    carl_supremum,
    entropy_from_counting_model,
    entropy_from_eigenvalue_model,
    entropy_numbers_from_counting_model,
    entropy_numbers_from_eigenvalue_model,
    eval_expansion,
    invert_first_order,
    invert_second_order,
)
from .covering import (
    CoveringBounds,
    Ellipsoid,
    TruncationResult,
    ball_covering_upper,
    greedy_cover_count,
    sandwich_entropy,
    truncate_ellipsoid,
    volume_lower_bound,
)
from .spectra import (
    BoxDomain,
    DomainGeometry,
    LPSConfig,
    SobolevConfig,
    box_laplacian_counting,
    box_laplacian_eigenvalues,
    chi,
    jacobi_eigenvalues,
    lps_counting_rate,
    lps_eigenvalues,
    lps_entropy_rate,
    omega,
    sobolev_T_eigenvalue,
    sobolev_counting_model,
    sobolev_entropy,
)

__all__ = [name for name in dir() if not name.startswith("_")]
