"""Constrained subgroup discovery: box-shaped subgroups with feature-cardinality
limits and alternative descriptions."""

from ._core import (
    CandidateCapExceeded,
    Dataset,
    DegenerateTargetError,
    SolverError,
    SolverNotFound,
    SubgroupDescription,
    deselection_dissimilarity,
    discover,
    encode_smt,
    find_alternatives,
    hamming_similarity,
    is_perfect,
    jaccard_similarity,
    load_csv,
    membership,
    nwracc,
    postprocess_bounds,
    run_experiment,
    selected_features,
    solver_available,
    wracc,
    wracc_max,
)

__all__ = [
    "CandidateCapExceeded",
    "Dataset",
    "DegenerateTargetError",
    "SolverError",
    "SolverNotFound",
    "SubgroupDescription",
    "deselection_dissimilarity",
    "discover",
    "encode_smt",
    "find_alternatives",
    "hamming_similarity",
    "is_perfect",
    "jaccard_similarity",
    "load_csv",
    "membership",
    "nwracc",
    "postprocess_bounds",
    "run_experiment",
    "selected_features",
    "solver_available",
    "wracc",
    "wracc_max",
]
