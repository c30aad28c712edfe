"""Gait symmetry index from 3D point-cloud sequences."""

from ._gaitsym import (
    GaitParams,
    GaitsymError,
    assess,
    assess_histograms,
    cross_correlate,
    estimate,
    generate,
    generate_mirror_pair,
    histograms,
    recenter_offset,
    roc,
    sector_index,
)

__all__ = [
    "GaitParams",
    "GaitsymError",
    "assess",
    "assess_histograms",
    "cross_correlate",
    "estimate",
    "generate",
    "generate_mirror_pair",
    "histograms",
    "recenter_offset",
    "roc",
    "sector_index",
]
__version__ = "1.0.0"
