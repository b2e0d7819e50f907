"""Catalyst configurations: generation, enumeration, filtering, search.

A configuration is a set of qubit subsets, each realized as one X-product
term that flips those qubits jointly.  Enumeration is lexicographic over
the candidate list and supports counting and strided sharding so exhaustive
sweeps parallelize without materializing the stream.
"""
from __future__ import annotations

import itertools
import json
import math
from collections import deque

import numpy as np
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .graphs import WeightedGraph

__all__ = [
    "CatalystConfig",
    "edge_sets",
    "complement_sets",
    "all_sets",
    "placement_count",
    "enumerate_placements",
    "unrank_placement",
    "hierarchy_filter",
    "optimal_search",
]

Subset = tuple[int, ...]


@dataclass(frozen=True)
class CatalystConfig:
    """Qubit subsets flipped jointly, a global sign, and a provenance label.

    sign=+1 is stoquastic (negative off-diagonal matrix entries); sign=-1
    flips every term to the non-stoquastic variant.
    """

    subsets: tuple[Subset, ...]
    sign: int = +1
    label: str = ""

    def __post_init__(self):
        if self.sign not in (+1, -1):
            raise ValueError("sign must be +1 or -1")
        canon: list[Subset] = []
        seen = set()
        for subset in self.subsets:
            tup = tuple(sorted(int(q) for q in subset))
            if len(tup) < 2:
                raise ValueError(f"catalyst subset {tup} needs at least two qubits")
            if len(set(tup)) != len(tup):
                raise ValueError(f"repeated qubit in subset {subset}")
            if tup not in seen:
                seen.add(tup)
                canon.append(tup)
        object.__setattr__(self, "subsets", tuple(canon))

    def to_json(self) -> str:
        return json.dumps(
            {"sign": self.sign, "subsets": [list(s) for s in self.subsets], "label": self.label}
        )

    @classmethod
    def from_json(cls, text: str) -> "CatalystConfig":
        obj = json.loads(text)
        return cls(
            subsets=tuple(tuple(s) for s in obj["subsets"]),
            sign=int(obj.get("sign", +1)),
            label=str(obj.get("label", "")),
        )


def edge_sets(graph: WeightedGraph, n: int) -> list[Subset]:
    """Connected n-vertex subsets: the edges themselves for n=2, and for
    n=3 every triple spanned by at least two edges."""
    if n not in (2, 3):
        raise ValueError("edge-based subsets are defined for n in {2, 3}")
    if n == 2:
        return [(i, j) for i, j, _ in graph.edges]
    present = {(i, j) for i, j, _ in graph.edges}
    triples = []
    for triple in itertools.combinations(range(graph.n_vertices), 3):
        count = sum(1 for pair in itertools.combinations(triple, 2) if pair in present)
        if count >= 2:
            triples.append(triple)
    return triples


def complement_sets(graph: WeightedGraph, n: int) -> list[Subset]:
    """n-vertex subsets spanned by no problem edge at all."""
    if n not in (2, 3):
        raise ValueError("complement subsets are defined for n in {2, 3}")
    present = {(i, j) for i, j, _ in graph.edges}
    out = []
    for subset in itertools.combinations(range(graph.n_vertices), n):
        if not any(pair in present for pair in itertools.combinations(subset, 2)):
            out.append(subset)
    return out


def all_sets(n_qubits: int, n: int) -> list[Subset]:
    """Every n-qubit subset of the register."""
    if n < 2 or n > n_qubits:
        raise ValueError("subset size must satisfy 2 <= n <= n_qubits")
    return list(itertools.combinations(range(n_qubits), n))


def placement_count(candidates: Sequence[Subset], m: int) -> int:
    """Number of configurations enumerate_placements would stream."""
    if not 0 <= m <= len(candidates):
        raise ValueError(f"m={m} outside [0, {len(candidates)}]")
    return math.comb(len(candidates), m)


def enumerate_placements(
    candidates: Sequence[Subset],
    m: int,
    sign: int = +1,
    offset: int = 0,
    stride: int = 1,
) -> Iterator[CatalystConfig]:
    """Stream all m-of-candidates choices in lexicographic index order.

    offset/stride select every stride-th configuration starting at the
    given rank, so disjoint workers can shard the stream and their union
    recovers it exactly.
    """
    if not 0 <= m <= len(candidates):
        raise ValueError(f"m={m} outside [0, {len(candidates)}]")
    if stride < 1 or offset < 0:
        raise ValueError("need stride >= 1 and offset >= 0")
    combos = itertools.combinations(range(len(candidates)), m)
    for rank, combo in itertools.islice(enumerate(combos), offset, None, stride):
        yield CatalystConfig(
            subsets=tuple(candidates[c] for c in combo),
            sign=sign,
            label=f"m={m} rank={rank}",
        )


def unrank_placement(
    candidates: Sequence[Subset], m: int, rank: int, sign: int = +1
) -> CatalystConfig:
    """Configuration at the given lexicographic rank without enumeration."""
    total = placement_count(candidates, m)
    if not 0 <= rank < total:
        raise ValueError(f"rank {rank} outside [0, {total})")
    n = len(candidates)
    combo = []
    next_index = 0
    remaining = rank
    for slot in range(m):
        for c in range(next_index, n):
            block = math.comb(n - c - 1, m - slot - 1)
            if remaining < block:
                combo.append(c)
                next_index = c + 1
                break
            remaining -= block
    return CatalystConfig(
        subsets=tuple(candidates[c] for c in combo),
        sign=sign,
        label=f"m={m} rank={rank}",
    )


def _induced_has_odd_cycle(adjacency: list[set[int]], subset: Subset) -> bool:
    """True iff the induced subgraph on subset is not two-colorable."""
    inside = set(subset)
    color: dict[int, int] = {}
    for root in subset:
        if root in color:
            continue
        color[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in adjacency[u]:
                if v not in inside:
                    continue
                if v not in color:
                    color[v] = color[u] ^ 1
                    queue.append(v)
                elif color[v] == color[u]:
                    return True
    return False


def hierarchy_filter(
    graph: WeightedGraph, subsets: Iterable[Subset]
) -> tuple[list[Subset], list[Subset]]:
    """Partition subsets into (allowed, rejected) by the frustrated-loop rule.

    A subset is rejected when its induced subgraph contains an odd cycle
    (for triples: when it is a triangle); tree-induced subsets, chordless
    even cycles, and edgeless subsets always pass.
    """
    adjacency = graph.adjacency()
    allowed, rejected = [], []
    for subset in subsets:
        tup = tuple(sorted(subset))
        if _induced_has_odd_cycle(adjacency, tup):
            rejected.append(tup)
        else:
            allowed.append(tup)
    return allowed, rejected


def optimal_search(
    graph: WeightedGraph,
    n: int,
    m: int,
    candidates: Sequence[Subset] | None = None,
    budget: int = 1000,
    seed: int = 0,
    sign: int = +1,
    grid=None,
    partition=None,
) -> tuple[CatalystConfig, float]:
    """Best-placement search maximizing the refined minimum gap.

    Exhaustive when the configuration count fits the budget, otherwise a
    seeded uniform sample of distinct ranks.  Ties break toward the
    lexicographically smaller configuration, and for a fixed seed a larger
    budget extends the same sample, so the best result never degrades.
    """
    from .spectrum import gap_scan  # deferred: spectrum imports this module

    if budget < 1:
        raise ValueError("budget must be at least 1")
    if candidates is None:
        candidates = all_sets(graph.n_vertices, n)
    total = placement_count(candidates, m)

    if total <= budget:
        ranks: Iterable[int] = range(total)
    else:
        rng = np.random.default_rng(seed)
        chosen: list[int] = []
        seen = set()
        while len(chosen) < budget:
            r = int(rng.integers(total))
            if r not in seen:
                seen.add(r)
                chosen.append(r)
        ranks = chosen

    best_config: CatalystConfig | None = None
    best_delta = -math.inf
    for rank in ranks:
        config = unrank_placement(candidates, m, rank, sign=sign)
        scan = gap_scan(graph, config, partition=partition, grid=grid)
        better = scan.delta_min > best_delta
        tied = scan.delta_min == best_delta and (
            best_config is None or config.subsets < best_config.subsets
        )
        if better or tied:
            best_delta = scan.delta_min
            best_config = config
    assert best_config is not None
    return best_config, best_delta
