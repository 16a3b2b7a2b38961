"""Optimal transport machinery: exact LP, entropic approximation, barycenters."""

from .barycenter import (
    BarycenterResult,
    PermutationExtraction,
    barycenter,
    extract_permutations,
)
from .core import Coupling, DiscreteMeasure, cost_matrix
from .enumeration import brute_force_transport, enumerate_vertices
from .simplex import solve_transport
from .sinkhorn import default_epsilon, sinkhorn

__all__ = [
    "BarycenterResult",
    "Coupling",
    "DiscreteMeasure",
    "PermutationExtraction",
    "barycenter",
    "brute_force_transport",
    "cost_matrix",
    "default_epsilon",
    "enumerate_vertices",
    "extract_permutations",
    "sinkhorn",
    "solve_transport",
]
