"""Reduction compiler and certification toolkit for Feedback Vertex Set on
restricted Hamiltonian graph classes."""

from .graph import (
    Graph,
    GraphError,
    HamCycleWitness,
    Instance,
    PlaneGraph,
    ReductionTrace,
    TraceStep,
    check_regular,
    faces,
    identify_vertices,
    strip_low_degree,
    subdivide_edge,
)
from .solvers import (
    FvsSolution,
    SolverError,
    UndecidedError,
    check_ham_ordered,
    check_ore_condition,
    check_planarity,
    find_hamiltonian_cycle,
    fvs_branch_reduce,
    fvs_exact_exhaustive,
    is_fvs,
    verify_witness,
    vertex_connectivity_at_least,
)
from .gadgets import (
    Gadget,
    GadgetReport,
    build_gadget,
    certify_gadget,
    insert_gadget,
    verify_insertion_equivalence,
)
from .geometry import (
    GeometryError,
    GridEmbedding,
    RoutedConnection,
    dissolve_crossings,
    find_crossings,
    grid_embed,
    pick_epsilon,
    route_connection,
)
from .pipeline import (
    PipelineError,
    PipelineResult,
    StageResult,
    TwoFactor,
    compute_two_factor,
    eliminate_degree_two,
    evenize,
    five_regularize,
    ham_ordered_lift,
    hamiltonize,
    merge_step,
    p_regularize,
    pair_degree_three,
    replay_trace,
    run_pipeline,
)
from .textio import parse_graph, trace_to_json, verify_trace, write_graph

__version__ = "0.1.0"
