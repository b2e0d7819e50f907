"""Closed-form spin-flip energy costs for the bipartite toy family.

Starting from the classical ground state (heavier partition up), the cost
of each elementary flip has an exact expression in the partition weights
and the uniform coupling.  These forms provide an independent check on the
spin-encoding diagonal and the predicate for when the first excited
classical state sits at maximal Hamming distance, the precondition for a
first-order transition during the anneal.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import pauli
from .graphs import BipartiteToySpec, build_bipartite

__all__ = [
    "FlipCostReport",
    "flip_costs",
    "flip_costs_43",
    "first_order_condition",
    "first_order_condition_general",
]


@dataclass(frozen=True)
class FlipCostReport:
    """A flip, its closed-form cost, and the diagonal-difference check."""

    label: str
    flip_set: tuple[int, ...]
    symbolic_cost: float
    numeric_cost: float


def _diagonal_costs(spec: BipartiteToySpec, flips: list[tuple[str, tuple[int, ...], float]]):
    """Evaluate each flip numerically on the spin-encoding diagonal."""
    graph = build_bipartite(spec)
    diag = pauli.diagonal(pauli.problem_hamiltonian(graph))
    # Classical ground state: partition A down (bits set), B up (bits clear).
    ground = (1 << spec.size_a) - 1
    reports = []
    for label, flip_set, symbolic in flips:
        mask = 0
        for v in flip_set:
            mask |= 1 << v
        numeric = float(diag[ground ^ mask] - diag[ground])
        reports.append(FlipCostReport(label, flip_set, symbolic, numeric))
    return reports


def flip_costs(spec: BipartiteToySpec) -> list[FlipCostReport]:
    """Closed-form flip costs for the general (k+1, k) bipartite family.

    With per-site weights w_a = W_1/(k+1), w_b = W_2/k and uniform J:
      one A-spin:        4 k J - 4 W_1 / (k+1)
      one B-spin:        4 W_2 / k
      all spins:         4 (W_2 - W_1)
      one A + one B:     4 (k-1) J - 4 w_a + 4 w_b
    Requires W_2 >= W_1 so partition-B-up is a classical ground state.
    """
    if spec.total_weight_b < spec.total_weight_a:
        raise ValueError("closed forms assume total_weight_b >= total_weight_a")
    k = spec.size_b
    w_a = spec.total_weight_a / spec.size_a
    w_b = spec.total_weight_b / spec.size_b
    coupling = spec.coupling
    n = spec.n_vertices
    flips = [
        ("flip one A-spin", (0,), 4 * k * coupling - 4 * w_a),
        ("flip one B-spin", (spec.size_a,), 4 * w_b),
        ("flip all spins", tuple(range(n)), 4 * (spec.total_weight_b - spec.total_weight_a)),
        ("flip one A- and one B-spin", (0, spec.size_a),
         4 * (k - 1) * coupling - 4 * w_a + 4 * w_b),
    ]
    return _diagonal_costs(spec, flips)


def flip_costs_43(spec: BipartiteToySpec) -> list[FlipCostReport]:
    """The four flip costs of the (4, 3) toy:
    12J - W_1, 4W_2/3, 4(W_2 - W_1), and 8J - 4w_1 + 4w_5."""
    if (spec.size_a, spec.size_b) != (4, 3):
        raise ValueError("the (4, 3) closed forms need sizes (4, 3)")
    return flip_costs(spec)


def first_order_condition(total_weight_a: float, total_weight_b: float) -> bool:
    """True when (W_2 - W_1) < W_2/3 on the (4, 3) toy: the all-flipped
    state then undercuts every single-spin flip, putting the first excited
    classical state at Hamming distance L from the ground state."""
    return first_order_condition_general(total_weight_a, total_weight_b, 3)


def first_order_condition_general(
    total_weight_a: float, total_weight_b: float, size_b: int
) -> bool:
    """(W_2 - W_1) < W_2/k for the (k+1, k) family; strict at the boundary."""
    if not 0 < total_weight_a < total_weight_b:
        raise ValueError("need 0 < W_1 < W_2")
    return (total_weight_b - total_weight_a) < total_weight_b / size_b
