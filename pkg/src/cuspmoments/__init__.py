"""Numerical companion for smoothed moments of Rankin-Selberg resonance sums over weight windows."""
from .errors import (
    AccuracyError,
    CapacityError,
    ConditioningError,
    CoverageError,
    CuspMomentsError,
    DiagonalizationError,
    DomainError,
    FitError,
    HypothesisError,
    RangeError,
    RegimeError,
)

__version__ = "0.1.0"
