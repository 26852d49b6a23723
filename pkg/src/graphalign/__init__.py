"""Alignment toolkit for families of correlated inhomogeneous random graphs."""

from .align import (ClosureOutput, PairwiseMatchings, build_transitivity_graph,
                    complete_by_elimination, is_connected, pairwise_match_all,
                    score, transitive_close)
from .graphs import (Graph, MatchProfile, PartialMatching, Permutation, compose,
                     intersect, read_edge_list, relabel, union, write_edge_list)
from .kcore import (CoreResult, core_peel, low_degree_set, luczak_expand,
                    simulated_kcore_match)
from .kernels import backend
from .sampling import (CorrelatedFamily, ModelSpec, build_anchor_matrix,
                       build_parameter_matrix, export_family, sample_family)
from .thresholds import (DegreeProfile, ThresholdReport, homogeneous_classify,
                         model_condition, phase_grid, threshold_report)

__all__ = [
    "Graph", "Permutation", "PartialMatching", "MatchProfile",
    "intersect", "union", "relabel", "compose",
    "read_edge_list", "write_edge_list",
    "ModelSpec", "CorrelatedFamily", "build_parameter_matrix",
    "build_anchor_matrix", "sample_family", "export_family",
    "CoreResult", "core_peel", "low_degree_set", "luczak_expand",
    "simulated_kcore_match",
    "PairwiseMatchings", "ClosureOutput", "pairwise_match_all",
    "transitive_close", "build_transitivity_graph", "is_connected",
    "score", "complete_by_elimination",
    "DegreeProfile", "ThresholdReport", "threshold_report",
    "homogeneous_classify", "model_condition", "phase_grid",
    "backend",
]

__version__ = "0.1.0"
