"""Safer-than comparisons of actions in finite decision problems."""

from .core import (
    DEFAULT_TOL,
    Belief,
    DecisionProblem,
    DominatedPairError,
    NonGenericError,
    PairClassification,
    ProblemFormatError,
    SaferError,
    Tolerance,
    classify_states,
    detect_risk_free,
    parse_problem,
    require_generic,
    serialize_problem,
)
from .relation import (
    NOT_SAFER,
    SAFER,
    SafetyVerdict,
    is_safer,
    is_safer_two_state,
    order_report,
    slope_report,
    smooth_reduce,
)
from .transforms import ConcaveTransform, parse_transform

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL", "NOT_SAFER", "SAFER", "Belief", "ConcaveTransform", "DecisionProblem",
    "DominatedPairError", "NonGenericError", "PairClassification", "ProblemFormatError",
    "SaferError", "SafetyVerdict", "Tolerance", "classify_states", "detect_risk_free",
    "is_safer", "is_safer_two_state", "order_report", "parse_problem", "parse_transform",
    "require_generic", "serialize_problem", "slope_report", "smooth_reduce",
]
