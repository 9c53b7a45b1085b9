"""Exception hierarchy shared by every module in the package."""


class CuspMomentsError(Exception):
    """Base class for all package errors."""


class DomainError(CuspMomentsError, ValueError):
    """Input outside the mathematical domain of an operation."""


class CapacityError(CuspMomentsError):
    """Request exceeds a configured size or memory budget."""


class AccuracyError(CuspMomentsError):
    """A numerical target could not be met (quadrature, truncation)."""


class DiagonalizationError(CuspMomentsError):
    """Hecke eigenvalues too close to separate reliably."""


class ConditioningError(CuspMomentsError):
    """A linear system is too ill-conditioned to solve."""


class CoverageError(CuspMomentsError):
    """A coefficient table is too short for the requested range."""


class RangeError(CuspMomentsError):
    """Evaluation outside a cached interpolation range."""


class FitError(CuspMomentsError):
    """Not enough usable data points for a regression."""


class RegimeError(CuspMomentsError):
    """Parameters violate the hypotheses of a requested bound."""


class HypothesisError(CuspMomentsError):
    """Hessian lower bounds of the second derivative test do not hold."""
