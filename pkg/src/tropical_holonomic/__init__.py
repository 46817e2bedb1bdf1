"""Exact tools for tropical holonomic sequences and the entropy of their solution sets."""

from .dimension import (
    AttainmentGraph,
    ScanReport,
    attainment_graph,
    components,
    dim_WN,
    entropy_scan,
    feasible_patterns,
    intervals,
    lemma_predicates,
    max_cell,
    pattern_to_system,
)
from .poly import Polynomial, combine, eventual_sign, eventual_sign_index, shift
from .polyhedra import LinearSystem, cell_dimension, rank, strictly_feasible
from .tropical import (
    EntropyClass,
    HolonomicSystem,
    argmin_set,
    check_sequence,
    classify,
    classify_system,
    extend_greedy,
    witness_case1,
    witness_case2,
)

__version__ = "0.1.0"
