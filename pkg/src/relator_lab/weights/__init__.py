"""Weight functions, profiles, the max-min classification and certificate search."""

from .brown import brown_kernel_fg, widened_extremes
from .feasibility import FeasibilityError, feasible_point, integer_direction
from .oracle import oracle_search
from .profile import (
    Extremum,
    ExtremumReport,
    MaxMinClass,
    Profile,
    WeightError,
    WeightFunction,
    classify,
    profile,
)
from .search import (
    DEFAULT_SIGN_CAP,
    MaxMinCertificate,
    SearchCapped,
    best_class,
    certify,
    search_certificate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
