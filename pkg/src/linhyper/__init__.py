"""Perfect fractional matchings, nibble matchings, hypertree tilings and
near-spanning embeddings in linear k-uniform hypergraphs."""

from __future__ import annotations

from .embedding import (BarePath, EmbedParams, Embedding, PatternSpec, embed_linear_cycle, embed_pattern,
                        greedy_forest_embed, pattern_spec_for, sample_reservoir, verify_embedding,
                        verify_linear_cycle)
from .errors import (DenominatorOverflow, HypergraphError, InfeasibleHost, LinearityViolation, LPTimeout,
                     ParseError, StageFailure)
from .fractional import (FarkasCertificate, FractionalMatching, RegularizedGraph, regularize, solve_pfm,
                         verify_certificate, verify_fm)
from .generators import (PatternGraph, complete_kpartite_linear, cycle_pattern, extremal_construction,
                         make_pattern, mols, path_pattern, random_linear, random_tree_pattern, steiner_triple,
                         subdivision_pattern)
from .hypergraph import LinearKGraph, MultiKGraph, build_linear_graph, degree_profile, induced_remove
from .nibble import Matching, NibbleParams, greedy_matching, nibble_matching, verify_matching
from .oracle import SearchBudget, count_l2_paths, find_embedding_exact, max_matching_exact
from .tiling import LabeledCopy, TilingResult, tree_tiling, verify_tiling
from .trees import SemiBareDecomposition, semi_bare_decomposition

__version__ = "0.1.0"

__all__ = [
    "BarePath", "DenominatorOverflow", "EmbedParams", "Embedding", "FarkasCertificate", "FractionalMatching",
    "HypergraphError", "InfeasibleHost", "LabeledCopy", "LPTimeout", "LinearKGraph", "LinearityViolation",
    "Matching", "MultiKGraph", "NibbleParams", "ParseError", "PatternGraph", "PatternSpec", "RegularizedGraph",
    "SearchBudget", "SemiBareDecomposition", "StageFailure", "TilingResult", "build_linear_graph",
    "complete_kpartite_linear", "count_l2_paths", "cycle_pattern", "degree_profile", "embed_linear_cycle",
    "embed_pattern", "extremal_construction", "find_embedding_exact", "greedy_forest_embed", "greedy_matching",
    "induced_remove", "make_pattern", "max_matching_exact", "mols", "nibble_matching", "path_pattern",
    "pattern_spec_for", "random_linear", "random_tree_pattern", "regularize", "sample_reservoir",
    "semi_bare_decomposition", "solve_pfm", "steiner_triple", "subdivision_pattern", "tree_tiling",
    "verify_certificate", "verify_embedding", "verify_fm", "verify_linear_cycle", "verify_matching",
    "verify_tiling",
]
