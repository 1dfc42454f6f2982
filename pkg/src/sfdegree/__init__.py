"""Degree statistics of scale-free inhomogeneous random graphs."""

from .weights import WeightDistribution, parse_weight

__version__ = "0.1.0"

__all__ = ["WeightDistribution", "parse_weight", "__version__"]
