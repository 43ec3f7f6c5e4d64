"""Exact k-wise Kemeny rank aggregation with certified reduction rules."""

from ._accel import backend_name
from .distance import distance_fast, distance_oracle, profile_distance, swap_delta
from .model import (
    CandidateSet,
    MedianResult,
    Profile,
    ProfileError,
    Ranking,
    format_profile,
    parse_profile,
)
from .reduce import ConstraintSet, compute_alpha_smith_set, run_all_rules
from .solve import median_bnb, median_bruteforce, median_dp

__version__ = "0.1.0"

__all__ = [
    "CandidateSet",
    "ConstraintSet",
    "MedianResult",
    "Profile",
    "ProfileError",
    "Ranking",
    "backend_name",
    "compute_alpha_smith_set",
    "distance_fast",
    "distance_oracle",
    "format_profile",
    "median_bnb",
    "median_bruteforce",
    "median_dp",
    "parse_profile",
    "profile_distance",
    "run_all_rules",
    "swap_delta",
]
