"""Monotone cohomology, matching complexes and oriented homology of directed graphs."""
from __future__ import annotations

__version__ = "0.1.0"

from ._kernels import BACKEND
from .algebra import AlgebraError, FiniteAlgebra, builtin, load_algebra, parse_algebra
from .cochain import (CochainComplex, FunctorSpec, cohomology, euler_characteristic, monotone_cochain,
                      oriented_matching_cochain, tensor, verify_source_resolution_iso)
from .complexes import SimplicialComplex, build_complex, predicted_homotopy, reduced_homology
from .graphcore import (Orientation, OrientedGraph, analyze, enumerate_free_flow, load_graph, parse_graph,
                        source_resolution)
from .linalg import ExactMatrix, HomologySummary, chain_homology, cochain_cohomology, rank, smith_normal_form
from .orientedhomology import build_oh_complex, freeflow_histogram, oriented_homology
from .poset import RankedPoset, face_poset, monotone_poset, poset_isomorphic, sign_assignment

__all__ = [
    "__version__", "BACKEND",
    "AlgebraError", "FiniteAlgebra", "builtin", "load_algebra", "parse_algebra",
    "CochainComplex", "FunctorSpec", "cohomology", "euler_characteristic", "monotone_cochain",
    "oriented_matching_cochain", "tensor", "verify_source_resolution_iso",
    "SimplicialComplex", "build_complex", "predicted_homotopy", "reduced_homology",
    "Orientation", "OrientedGraph", "analyze", "enumerate_free_flow", "load_graph", "parse_graph",
    "source_resolution",
    "ExactMatrix", "HomologySummary", "chain_homology", "cochain_cohomology", "rank", "smith_normal_form",
    "build_oh_complex", "freeflow_histogram", "oriented_homology",
    "RankedPoset", "face_poset", "monotone_poset", "poset_isomorphic", "sign_assignment",
]
