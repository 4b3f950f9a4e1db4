"""Majorization-based entropic uncertainty bounds for coarse-grained position and momentum."""

from .bounds import (
    BoundRequest,
    BoundResult,
    best_bound,
    bound_B,
    bound_majorization,
    bound_R,
    find_crossing,
    renyi_entropy,
)
from .coarsegrain import (
    CoarseDistribution,
    StateSpec,
    momentum_probs,
    position_probs,
    verify_direct_sum_majorization,
    verify_eur,
)
from .errors import BracketError, ConvergenceError, DomainError, NumericalError, ResourceError
from .majorization import MajorizationVector, build_w, check_chain, f_value, majorizes
from .prolate import ProlateEvaluation, lambda0, lambda0_asymptotic, lambda0_nystrom, lambda0_series

__version__ = "0.1.0"
