"""Exact cluster-algebra seed mutation and non-leaving-face verification."""

from clusternlf.laurent import LaurentPoly, lp_add, lp_cmp, lp_exact_div, lp_mul
from clusternlf.seed import (
    CMatrix,
    ExchangeMatrix,
    LabeledSeed,
    check_symmetrizer,
    epsilon_k,
    initial_seed,
    mutate_matrix,
    mutate_seed,
    transition_cmatrix,
)
from clusternlf.graph import Cluster, ExchangeGraph, Face, enumerate_graph, face_of, geodesics, minimal_face
from clusternlf.bongartz import CompletionQuery, bongartz_completion, projection
from clusternlf.nlf import NlfReport, verify_nlf

__version__ = "0.1.0"

__all__ = [
    "CMatrix",
    "Cluster",
    "CompletionQuery",
    "ExchangeGraph",
    "ExchangeMatrix",
    "Face",
    "LabeledSeed",
    "LaurentPoly",
    "NlfReport",
    "bongartz_completion",
    "check_symmetrizer",
    "enumerate_graph",
    "epsilon_k",
    "face_of",
    "geodesics",
    "initial_seed",
    "lp_add",
    "lp_cmp",
    "lp_exact_div",
    "lp_mul",
    "minimal_face",
    "mutate_matrix",
    "mutate_seed",
    "projection",
    "transition_cmatrix",
    "verify_nlf",
]
