"""Weighted-graph instances for the maximum weighted independent set problem.

Builders for the bipartite and tripartite toy families, seeded
Erdos-Renyi ensembles, the 10-vertex benchmark topology, a brute-force
classical solver, and odd-cycle enumeration.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

__all__ = [
    "GraphError",
    "WeightedGraph",
    "BipartiteToySpec",
    "TripartiteToySpec",
    "build_bipartite",
    "build_tripartite",
    "erdos_renyi_instance",
    "table1_topology",
    "brute_force_mwis",
    "odd_frustrated_loops",
]

# Maximum vertex count for the exhaustive classical solver.
BRUTE_FORCE_LIMIT = 30


class GraphError(ValueError):
    """Invalid graph, spec, or parameter range."""


@dataclass(frozen=True)
class WeightedGraph:
    """An MWIS instance: positive vertex weights, antiferromagnetic couplings.

    Edges are stored canonically as (i, j, J) with i < j, sorted.  Every
    coupling must exceed the smaller of the two endpoint weights, otherwise
    the weights could override the independence constraint in the ground
    state of the spin mapping.
    """

    n_vertices: int
    weights: tuple[float, ...]
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        n = self.n_vertices
        if n <= 0:
            raise GraphError("graph needs at least one vertex")
        if len(self.weights) != n:
            raise GraphError(f"expected {n} weights, got {len(self.weights)}")
        if any(w <= 0 for w in self.weights):
            raise GraphError("vertex weights must be strictly positive")
        canon = []
        seen = set()
        for i, j, coupling in self.edges:
            if i == j:
                raise GraphError(f"self-loop on vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise GraphError(f"edge ({i},{j}) out of range")
            a, b = (i, j) if i < j else (j, i)
            if (a, b) in seen:
                raise GraphError(f"duplicate edge ({a},{b})")
            seen.add((a, b))
            if coupling <= min(self.weights[a], self.weights[b]):
                raise GraphError(
                    f"coupling J={coupling} on edge ({a},{b}) must exceed "
                    f"min(w_{a}, w_{b})={min(self.weights[a], self.weights[b])}"
                )
            canon.append((a, b, float(coupling)))
        canon.sort()
        object.__setattr__(self, "edges", tuple(canon))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n_vertices)]
        for i, j, _ in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def edge_pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j, _ in self.edges]

    def to_json(self) -> str:
        """Canonical interchange form: {n, weights, edges:[[i,j,J],...]}."""
        return json.dumps(
            {
                "n": self.n_vertices,
                "weights": list(self.weights),
                "edges": [[i, j, coupling] for i, j, coupling in self.edges],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "WeightedGraph":
        try:
            obj = json.loads(text)
            return cls(
                n_vertices=int(obj["n"]),
                weights=tuple(float(w) for w in obj["weights"]),
                edges=tuple((int(i), int(j), float(c)) for i, j, c in obj["edges"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, GraphError):
                raise
            raise GraphError(f"malformed graph JSON: {exc}") from exc


@dataclass(frozen=True)
class BipartiteToySpec:
    """Complete-bipartite toy family with uniform coupling.

    Partition A holds size_a spins sharing total weight total_weight_a,
    partition B likewise; the family keeps size_a = size_b + 1 so that the
    two extensive classical branches (all of A vs all of B) compete.
    """

    size_a: int
    size_b: int
    total_weight_a: float
    total_weight_b: float
    coupling: float

    def __post_init__(self):
        if self.size_b < 1 or self.size_a != self.size_b + 1:
            raise GraphError("bipartite toy needs size_a == size_b + 1 >= 2")
        if self.total_weight_a <= 0 or self.total_weight_b <= 0:
            raise GraphError("partition weights must be positive")
        if self.coupling <= 0:
            raise GraphError("coupling must be positive")

    @property
    def n_vertices(self) -> int:
        return self.size_a + self.size_b

    def site_weights(self) -> tuple[float, ...]:
        wa = self.total_weight_a / self.size_a
        wb = self.total_weight_b / self.size_b
        return (wa,) * self.size_a + (wb,) * self.size_b

    def partition(self) -> tuple[list[int], list[int]]:
        return list(range(self.size_a)), list(range(self.size_a, self.n_vertices))


@dataclass(frozen=True)
class TripartiteToySpec:
    """Complete-tripartite toy: three blocks, every cross-block pair coupled."""

    block_sizes: tuple[int, int, int]
    block_weights: tuple[float, float, float]
    coupling: float

    def __post_init__(self):
        if len(self.block_sizes) != 3 or any(s < 1 for s in self.block_sizes):
            raise GraphError("three positive block sizes required")
        if len(self.block_weights) != 3 or any(w <= 0 for w in self.block_weights):
            raise GraphError("three positive block weights required")
        if self.coupling <= 0:
            raise GraphError("coupling must be positive")

    @property
    def n_vertices(self) -> int:
        return sum(self.block_sizes)

    def blocks(self) -> list[list[int]]:
        out, start = [], 0
        for size in self.block_sizes:
            out.append(list(range(start, start + size)))
            start += size
        return out

    def site_weights(self) -> tuple[float, ...]:
        out: list[float] = []
        for size, total in zip(self.block_sizes, self.block_weights):
            out += [total / size] * size
        return tuple(out)


def build_bipartite(spec: BipartiteToySpec) -> WeightedGraph:
    """Complete bipartite graph with per-site weights W_a/size_a, W_b/size_b."""
    weights = spec.site_weights()
    part_a, part_b = spec.partition()
    edges = tuple((i, j, spec.coupling) for i in part_a for j in part_b)
    return WeightedGraph(spec.n_vertices, weights, edges)


def build_tripartite(spec: TripartiteToySpec) -> WeightedGraph:
    """Complete tripartite graph; within-block pairs stay unconnected."""
    weights = spec.site_weights()
    blocks = spec.blocks()
    edges = []
    for bi in range(3):
        for bj in range(bi + 1, 3):
            edges += [(i, j, spec.coupling) for i in blocks[bi] for j in blocks[bj]]
    return WeightedGraph(spec.n_vertices, weights, tuple(edges))


def erdos_renyi_instance(
    n: int,
    p: float,
    weight_low: float,
    weight_high: float,
    coupling_low: float,
    coupling_high: float,
    seed: int,
) -> WeightedGraph:
    """Seeded G(n, p) instance with uniform weights and couplings.

    Requires coupling_low >= weight_high so every drawn coupling exceeds
    both endpoint weights by construction.  Pure function of its arguments:
    the same seed reproduces the instance byte-for-byte.
    """
    if not 0 <= p <= 1:
        raise GraphError("edge probability must lie in [0, 1]")
    if coupling_low < weight_high:
        raise GraphError(
            "coupling_low must be >= weight_high to guarantee J > min(w_i, w_j)"
        )
    rng = np.random.default_rng(seed)
    pairs = list(itertools.combinations(range(n), 2))
    draws = rng.random(len(pairs))
    present = [pair for pair, u in zip(pairs, draws) if u < p]
    weights = weight_low + (weight_high - weight_low) * rng.random(n)
    couplings = coupling_low + (coupling_high - coupling_low) * rng.random(len(present))
    edges = tuple((i, j, float(c)) for (i, j), c in zip(present, couplings))
    return WeightedGraph(n, tuple(float(w) for w in weights), edges)


# 10-vertex benchmark topology: 21 couplings, 1-indexed in the source data.
_TABLE1_COUPLINGS = {
    (1, 4): 1.66122, (1, 6): 1.01834, (1, 8): 1.14459, (2, 3): 1.78942,
    (2, 4): 1.10915, (2, 6): 1.8282, (2, 7): 1.76385, (3, 4): 1.57587,
    (3, 9): 1.03825, (3, 10): 1.88831, (4, 7): 1.27207, (4, 9): 1.02395,
    (4, 10): 1.68937, (5, 6): 1.23293, (5, 8): 1.32764, (5, 9): 1.0961,
    (6, 10): 1.09028, (7, 8): 1.19425, (7, 9): 1.22829, (7, 10): 1.96842,
    (8, 10): 1.30031,
}


@dataclass(frozen=True)
class GraphSkeleton:
    """Edges and couplings without vertex weights (weights supplied later)."""

    n_vertices: int
    edges: tuple[tuple[int, int, float], ...]

    def with_weights(self, weights) -> WeightedGraph:
        return WeightedGraph(self.n_vertices, tuple(weights), self.edges)


def table1_topology() -> GraphSkeleton:
    """The fixed 10-vertex, 21-edge benchmark topology (0-indexed)."""
    edges = tuple(
        sorted((i - 1, j - 1, c) for (i, j), c in _TABLE1_COUPLINGS.items())
    )
    return GraphSkeleton(10, edges)


def brute_force_mwis(graph: WeightedGraph) -> tuple[tuple[int, ...], float]:
    """Exhaustive maximum weighted independent set.

    Scans all 2^n subsets in vectorized chunks.  Ties on total weight are
    broken by the lexicographically smallest sorted vertex tuple so the
    result is deterministic.
    """
    n = graph.n_vertices
    if n > BRUTE_FORCE_LIMIT:
        raise GraphError(f"brute force capped at {BRUTE_FORCE_LIMIT} vertices, got {n}")
    adj_masks = np.zeros(n, dtype=np.int64)
    for i, j, _ in graph.edges:
        adj_masks[i] |= 1 << j
        adj_masks[j] |= 1 << i
    weights = np.asarray(graph.weights)

    best_weight = -math.inf
    best_set: tuple[int, ...] | None = None
    chunk = 1 << min(n, 20)
    for start in range(0, 1 << n, chunk):
        masks = np.arange(start, start + chunk, dtype=np.int64)
        ok = np.ones(len(masks), dtype=bool)
        total = np.zeros(len(masks))
        for v in range(n):
            inset = (masks >> v) & 1 == 1
            ok &= ~(inset & ((masks & adj_masks[v]) != 0))
            total += weights[v] * inset
        total[~ok] = -math.inf
        top = float(total.max())
        if top < best_weight:
            continue
        for m in masks[total == top]:
            vs = tuple(v for v in range(n) if (int(m) >> v) & 1)
            if top > best_weight or (best_set is not None and vs < best_set):
                best_weight, best_set = top, vs
    assert best_set is not None
    return best_set, best_weight


def odd_frustrated_loops(graph: WeightedGraph, max_length: int = 7) -> list[tuple[int, ...]]:
    """All simple odd cycles of length <= max_length, as sorted vertex tuples.

    Odd cycles of antiferromagnetic couplings are frustrated: no spin
    assignment satisfies every bond, which is what makes catalysts spanning
    them ineffective.
    """
    if max_length < 3:
        raise GraphError("max_length must be at least 3")
    g = nx.Graph()
    g.add_nodes_from(range(graph.n_vertices))
    g.add_edges_from(graph.edge_pairs())
    loops = []
    for cycle in nx.simple_cycles(g, length_bound=max_length):
        if len(cycle) % 2 == 1:
            loops.append(tuple(sorted(cycle)))
    loops.sort(key=lambda c: (len(c), c))
    return loops
