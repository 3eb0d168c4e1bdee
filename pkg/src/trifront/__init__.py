"""Tri-criterion portfolio front toolkit.

Estimates (mu, sigma, carbon) problem instances from return histories,
approximates the risk/return/carbon Pareto surface with a box-archive
evolutionary search, and applies percentile-based investor preferences to
extract a region of interest and representative portfolios. Ships as a
library, a CLI and an HTTP service with an interactive explorer.
"""

from .archive import EpsArchive, Grid, box_index, dominates, eps_dominates
from .engine import EvMogaConfig, RunResult, run
from .market_data import AssetUniverse, ReturnsMatrix, estimate_moments, load_returns
from .portfolio import Bounds, ObjectiveVector, Portfolio, evaluate, random_portfolio, repair
from .preferences import (
    PreferenceFilter,
    ProfileConfig,
    RegionOfInterest,
    Representatives,
    filter_region,
    percentile,
    reference_vectors,
    representatives,
)

__version__ = "0.1.0"

__all__ = [
    "AssetUniverse",
    "Bounds",
    "EpsArchive",
    "EvMogaConfig",
    "Grid",
    "ObjectiveVector",
    "Portfolio",
    "PreferenceFilter",
    "ProfileConfig",
    "RegionOfInterest",
    "Representatives",
    "ReturnsMatrix",
    "RunResult",
    "box_index",
    "dominates",
    "eps_dominates",
    "estimate_moments",
    "evaluate",
    "filter_region",
    "load_returns",
    "percentile",
    "random_portfolio",
    "reference_vectors",
    "repair",
    "representatives",
    "run",
]
