"""Exception hierarchy shared by all entropy_lab modules."""


class EntropyLabError(Exception):
    """Base class for all errors raised by entropy_lab."""


class RegimeError(EntropyLabError):
    """Model parameters fall outside the admissible exponent regimes.

    ``code`` distinguishes boundary cases (equality with a regime edge,
    e.g. alpha2 == alpha1 + 1/2) from plainly inadmissible combinations.
    """

    def __init__(self, message: str, code: str = "regime"):
        super().__init__(message)
        self.code = code


class HypothesisError(RegimeError):
    """A theorem hypothesis is violated (e.g. two-term expansion with d < 3)."""

    def __init__(self, message: str):
        super().__init__(message, code="hypothesis")


class NotSupportedError(EntropyLabError):
    """Requested operation is outside the supported scope of the formula."""


class SpectrumDomainError(EntropyLabError):
    """A spectrum value violates a positivity/range requirement."""


class FitDomainError(EntropyLabError):
    """Fit window is too small or contains non-positive values."""


class DiscretizationError(EntropyLabError):
    """Discretized eigenvalues fall outside the admissible range; refine the grid."""


class NumericalConvergenceError(EntropyLabError):
    """An iterative numerical procedure failed to converge."""


class PreconditionError(EntropyLabError):
    """An operation precondition (e.g. grid resolution) is not met."""


class ResourceBudgetError(EntropyLabError):
    """Requested computation exceeds the configured enumeration/memory budget."""
