"""Real symmetric qubit operators as signed sums of I/X/Z tensor products.

Each term is (coefficient, z_mask, x_mask): the factor on qubit k is Z if
bit k of z_mask is set, X if bit k of x_mask is set, identity otherwise.
A term never sets both masks on the same qubit, so every operator here is
real symmetric in the computational basis.

Basis convention: sigma^z on qubit k of basis index b has eigenvalue
(-1)**(bit k of b), i.e. a clear bit is spin-up (+1, vertex in the
independent set) and a set bit is spin-down.

Matrix-vector products are matrix-free: XOR permutations plus popcount
signs, costing 2^L work per term with no stored matrix.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable

import numpy as np

from .graphs import WeightedGraph

if TYPE_CHECKING:  # runtime import avoided; catalysts imports spectrum lazily
    from .catalysts import CatalystConfig

__all__ = [
    "PauliTermSum",
    "apply",
    "diagonal",
    "to_matrix",
    "problem_hamiltonian",
    "driver_hamiltonian",
    "product_catalyst",
    "n_local_catalyst",
    "catalyst_operator",
    "anneal_hamiltonian",
]


@dataclass(frozen=True)
class PauliTermSum:
    """Deduplicated, canonically ordered term list over n_qubits qubits."""

    n_qubits: int
    coeffs: np.ndarray
    z_masks: np.ndarray
    x_masks: np.ndarray

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("need at least one qubit")
        if np.any(self.z_masks & self.x_masks):
            raise ValueError("a term may not place Z and X on the same qubit")
        limit = 1 << self.n_qubits
        if np.any(self.z_masks >= limit) or np.any(self.x_masks >= limit):
            raise ValueError("mask addresses a qubit outside the register")

    @classmethod
    def from_terms(
        cls, n_qubits: int, terms: Iterable[tuple[float, int, int]]
    ) -> "PauliTermSum":
        """Merge duplicate (z_mask, x_mask) pairs and drop exact zeros."""
        acc: dict[tuple[int, int], float] = {}
        for coeff, z, x in terms:
            key = (int(z), int(x))
            acc[key] = acc.get(key, 0.0) + float(coeff)
        kept = sorted(
            ((x, z, c) for (z, x), c in acc.items() if c != 0.0)
        )
        if kept:
            xs, zs, cs = zip(*kept)
        else:
            xs, zs, cs = (), (), ()
        return cls(
            n_qubits=n_qubits,
            coeffs=np.asarray(cs, dtype=np.float64),
            z_masks=np.asarray(zs, dtype=np.int64),
            x_masks=np.asarray(xs, dtype=np.int64),
        )

    @property
    def n_terms(self) -> int:
        return len(self.coeffs)

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def terms(self) -> list[tuple[float, int, int]]:
        return [
            (float(c), int(z), int(x))
            for c, z, x in zip(self.coeffs, self.z_masks, self.x_masks)
        ]

    def scaled(self, factor: float) -> "PauliTermSum":
        return PauliTermSum.from_terms(
            self.n_qubits, ((factor * c, z, x) for c, z, x in self.terms())
        )

    def to_json(self) -> str:
        """Debug dump; not a stability contract."""
        return json.dumps(
            [{"coeff": c, "z_mask": z, "x_mask": x} for c, z, x in self.terms()]
        )


def _parity_signs(masked: np.ndarray) -> np.ndarray:
    """(-1)**popcount(masked) as float64."""
    return 1.0 - 2.0 * (np.bitwise_count(masked.astype(np.uint64)) & 1).astype(np.float64)


def apply(op: PauliTermSum, state: np.ndarray) -> np.ndarray:
    """Matrix-vector product: each term sends amplitude at b to b XOR x_mask
    with sign coefficient * (-1)**popcount(b AND z_mask)."""
    state = np.asarray(state, dtype=np.float64)
    if state.shape != (op.dim,):
        raise ValueError(f"state must have length {op.dim}, got {state.shape}")
    idx = np.arange(op.dim, dtype=np.int64)
    out = np.zeros(op.dim)
    for c, z, x in zip(op.coeffs, op.z_masks, op.x_masks):
        signed = (c * _parity_signs(idx & z)) * state
        if x:
            out[idx ^ x] += signed
        else:
            out += signed
    return out


def diagonal(op: PauliTermSum) -> np.ndarray:
    """Diagonal of the operator (contributions of x_mask == 0 terms)."""
    idx = np.arange(op.dim, dtype=np.int64)
    d = np.zeros(op.dim)
    for c, z, x in zip(op.coeffs, op.z_masks, op.x_masks):
        if x == 0:
            d += c * _parity_signs(idx & z)
    return d


def to_matrix(op: PauliTermSum) -> np.ndarray:
    """Dense 2^L x 2^L matrix via the same mask arithmetic as apply."""
    dim = op.dim
    mat = np.zeros((dim, dim))
    idx = np.arange(dim, dtype=np.int64)
    for c, z, x in zip(op.coeffs, op.z_masks, op.x_masks):
        mat[idx ^ x, idx] += c * _parity_signs(idx & z)
    return mat


def problem_hamiltonian(graph: WeightedGraph) -> PauliTermSum:
    """Diagonal spin encoding of the MWIS instance.

    One ZZ term of strength J_ij per edge plus a Z term per vertex with
    coefficient (sum of incident couplings - 2 w_i); the diagonal is
    minimized exactly on basis states whose up-spin set is a maximum
    weighted independent set.
    """
    n = graph.n_vertices
    coupling_sum = [0.0] * n
    terms: list[tuple[float, int, int]] = []
    for i, j, coupling in graph.edges:
        terms.append((coupling, (1 << i) | (1 << j), 0))
        coupling_sum[i] += coupling
        coupling_sum[j] += coupling
    for i in range(n):
        terms.append((coupling_sum[i] - 2.0 * graph.weights[i], 1 << i, 0))
    return PauliTermSum.from_terms(n, terms)


def driver_hamiltonian(n_qubits: int) -> PauliTermSum:
    """Transverse field -X on every qubit; spectral gap exactly 2."""
    if n_qubits < 1:
        raise ValueError("need at least one qubit")
    return PauliTermSum.from_terms(
        n_qubits, ((-1.0, 0, 1 << q) for q in range(n_qubits))
    )


def product_catalyst(n_qubits: int, sign: int = +1) -> PauliTermSum:
    """Single term flipping all spins at once (X on every qubit).

    sign=+1 is the stoquastic default (off-diagonal entries <= 0);
    sign=-1 gives the non-stoquastic variant.
    """
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    return PauliTermSum.from_terms(n_qubits, [(-float(sign), 0, (1 << n_qubits) - 1)])


def n_local_catalyst(config: "CatalystConfig", n_qubits: int) -> PauliTermSum:
    """One X-product term per qubit subset in the configuration.

    The 2-local case over a graph's edge set is the familiar XX catalyst;
    a single subset covering all qubits degenerates to the product catalyst.
    """
    terms = []
    for subset in config.subsets:
        if len(subset) < 2:
            raise ValueError(f"catalyst subset {subset} needs at least two qubits")
        if any(not 0 <= q < n_qubits for q in subset):
            raise ValueError(f"catalyst subset {subset} outside register of {n_qubits}")
        mask = 0
        for q in subset:
            mask |= 1 << q
        terms.append((-float(config.sign), 0, mask))
    return PauliTermSum.from_terms(n_qubits, terms)


def catalyst_operator(config: "CatalystConfig | None", n_qubits: int) -> PauliTermSum | None:
    """None-tolerant wrapper used by scan drivers."""
    if config is None:
        return None
    return n_local_catalyst(config, n_qubits)


def anneal_hamiltonian(
    s: float,
    problem: PauliTermSum,
    driver: PauliTermSum,
    catalyst: PauliTermSum | None = None,
) -> PauliTermSum:
    """Interpolated Hamiltonian s*H_p + (1-s)*H_D + s(1-s)*H_c.

    The catalyst weight vanishes at both endpoints, so s=0 reproduces the
    driver and s=1 the problem term-for-term.
    """
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"anneal parameter s={s} outside [0, 1]")
    if problem.n_qubits != driver.n_qubits or (
        catalyst is not None and catalyst.n_qubits != problem.n_qubits
    ):
        raise ValueError("operands act on different qubit counts")
    terms = [(s * c, z, x) for c, z, x in problem.terms()]
    terms += [((1.0 - s) * c, z, x) for c, z, x in driver.terms()]
    if catalyst is not None:
        w = s * (1.0 - s)
        terms += [(w * c, z, x) for c, z, x in catalyst.terms()]
    return PauliTermSum.from_terms(problem.n_qubits, terms)
