"""Spectral-gap laboratory for quantum annealing of MWIS instances.

Builds weighted-graph problem instances, maps them onto transverse-field
spin Hamiltonians with optional multi-qubit catalyst terms, scans the
spectral gap along the anneal, and packages the paper-figure experiments
behind a reproducible CLI.
"""

__version__ = "0.1.0"

from .graphs import (
    BipartiteToySpec,
    GraphError,
    TripartiteToySpec,
    WeightedGraph,
    brute_force_mwis,
    build_bipartite,
    build_tripartite,
    erdos_renyi_instance,
    odd_frustrated_loops,
    table1_topology,
)
from .pauli import (
    PauliTermSum,
    anneal_hamiltonian,
    apply,
    driver_hamiltonian,
    n_local_catalyst,
    problem_hamiltonian,
    product_catalyst,
)
from .catalysts import (
    CatalystConfig,
    all_sets,
    complement_sets,
    edge_sets,
    enumerate_placements,
    hierarchy_filter,
    optimal_search,
    placement_count,
)
from .spectrum import (
    EigenResult,
    GapScan,
    ScalingFit,
    ScanGrid,
    SolverConvergenceError,
    detect_first_order,
    fit_exponential,
    gap_scan,
    lowest_eigenpairs,
    order_parameter,
)
from .oracle import (
    FlipCostReport,
    first_order_condition,
    first_order_condition_general,
    flip_costs,
    flip_costs_43,
)
from .perturbation import (
    DegenerateTargetError,
    PerturbationInput,
    complete_spectrum,
    energy_corrections,
)
