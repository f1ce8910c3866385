"""Robust minimum redundancy array toolkit.

Discovery, validation and cataloguing of sparse sensor arrays whose
difference coarray survives any single interior sensor failure:
exhaustive maximum-aperture search, per-array robustness reports, and a
closed-form family for arbitrary sizes.
"""

from ._version import __version__
from .coarray import (
    Coarray,
    SensorArray,
    WeightFunction,
    coarray,
    make_array,
    primary_weights,
    weight_after_removal,
    weight_function,
)
from .robustness import (
    FailureCheck,
    RobustnessReport,
    assess,
    check_failure,
    check_healthy,
    essential_sensors,
)
from .combinatorics import CombinationCursor, binomial, rank, unrank
from .cfe import (
    CfeArray,
    InterElementSpacings,
    ValidationSummary,
    cfe_aperture,
    cfe_array,
    cfe_dof,
    cfe_positions,
    ies_of,
    validate_range,
)
from .search import (
    ENDPOINTS_ONLY,
    STANDARD,
    Fixation,
    ProgressUpdate,
    SearchConfig,
    SearchOutcome,
    StageResult,
    find_near_optimal,
    find_optimal,
    search_space_size,
    search_stage,
)
from .catalog import Catalog, CatalogRecord, canonicalize
from . import errors

__all__ = [
    "__version__",
    "SensorArray",
    "WeightFunction",
    "Coarray",
    "make_array",
    "weight_function",
    "coarray",
    "weight_after_removal",
    "primary_weights",
    "FailureCheck",
    "RobustnessReport",
    "check_healthy",
    "check_failure",
    "assess",
    "essential_sensors",
    "binomial",
    "CombinationCursor",
    "rank",
    "unrank",
    "CfeArray",
    "InterElementSpacings",
    "ValidationSummary",
    "cfe_positions",
    "cfe_array",
    "cfe_aperture",
    "cfe_dof",
    "ies_of",
    "validate_range",
    "Fixation",
    "ENDPOINTS_ONLY",
    "STANDARD",
    "SearchConfig",
    "StageResult",
    "SearchOutcome",
    "ProgressUpdate",
    "search_space_size",
    "search_stage",
    "find_optimal",
    "find_near_optimal",
    "Catalog",
    "CatalogRecord",
    "canonicalize",
    "errors",
]
