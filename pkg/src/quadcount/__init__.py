"""Exact and sampled 4-vertex subgraph profiles of undirected graphs."""

from .errors import (
    ArgumentError,
    ConsistencyError,
    ContractError,
    InputError,
    ParseError,
    PlanError,
    QuadcountError,
    SizeError,
)
from .four import FourProfiles, compute_profiles
from .graph import Graph, load_graph, read_graph
from .oracle import brute_force_profiles
from .sparsify import build_sampling_matrices, estimate_profile, sample_edges

__all__ = [
    "ArgumentError", "ConsistencyError", "ContractError", "InputError", "ParseError",
    "PlanError", "QuadcountError", "SizeError",
    "FourProfiles", "Graph", "brute_force_profiles", "build_sampling_matrices",
    "compute_profiles", "estimate_profile", "load_graph", "read_graph", "sample_edges",
]

__version__ = "0.1.0"
