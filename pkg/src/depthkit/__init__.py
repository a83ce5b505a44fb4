"""Exact data-depth functions for planar point sets."""

from .geometry import Beta, BetaError, Dataset, DimensionError
from .oracles import (DepthCount, beta_skeleton_depth_bf, depth_pair_sets,
                      halfspace_depth_bf, simplicial_depth_bf)
from .fast import (beta_skeleton_depth_decomposed, halfspace_depth_fast, skd_infinity,
                   spherical_depth_fast)

__all__ = [
    "Beta", "BetaError", "Dataset", "DimensionError", "DepthCount",
    "beta_skeleton_depth_bf", "depth_pair_sets", "halfspace_depth_bf", "simplicial_depth_bf",
    "beta_skeleton_depth_decomposed", "halfspace_depth_fast", "skd_infinity",
    "spherical_depth_fast",
]
