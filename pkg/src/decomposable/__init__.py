"""Decomposable (chordal-isomorphic) dependency models.

Separation and d-separation oracles, chordality machinery, model checkers for
the independence axioms C1-C9', exhaustive small-graph verification, and a
constraint-based chordal skeleton learner.
"""

from .axioms import (
    AxiomReport,
    AxiomSuiteReport,
    AxiomViolation,
    check_all,
    check_axiom,
    check_c9prime,
    check_chordality_c7,
    check_clique_separability,
    check_completeness_c9,
    check_decomposition,
    check_intersection,
    check_strong_chordality,
    check_strong_union,
    check_symmetry,
    check_transitivity,
    replay,
)
from .chordal import (
    CliqueTree,
    chordless_cycle_witness,
    clique_tree,
    enumerate_chordal_graphs,
    find_peo,
    is_chordal,
    maximal_cliques,
    minimal_separators,
)
from .errors import CapExceededError, GraphFormatError, InconsistentOracleError, NotChordalError
from .graph import UndirectedGraph, VertexSet, enumerate_graphs, is_complete, separated
from .model import (
    Dag,
    DagModel,
    DependencyModel,
    ExplicitModel,
    GraphModel,
    classify_map,
    d_separated,
    d_separated_moral,
    explicit_from_model,
    graph_model,
    model_graph,
    orient_by_peo,
)

__version__ = "0.1.0"
