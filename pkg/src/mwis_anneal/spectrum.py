"""Low-lying spectra along the anneal: eigensolvers, gap scans, scaling fits.

The minimum gap of a first-order transition sits in an exponentially
narrow avoided crossing, so the scan works in two phases: a coarse grid
brackets the dip, then golden-section subdivision walks into it.  The
refinement tolerance is configurable because the dip width shrinks like
the gap itself.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Callable, Sequence

import numpy as np
import scipy.linalg

from . import pauli
from .graphs import WeightedGraph, brute_force_mwis
from .pauli import PauliTermSum, anneal_hamiltonian, apply, diagonal

if TYPE_CHECKING:
    from .catalysts import CatalystConfig

__all__ = [
    "SolverConvergenceError",
    "EigenResult",
    "lowest_eigenpairs",
    "order_parameter",
    "ScanGrid",
    "GapScan",
    "gap_scan",
    "detect_first_order",
    "ScalingFit",
    "fit_exponential",
    "gap_scan_csv",
    "scaling_fit_csv",
]

DENSE_DIM_LIMIT = 4096
# Gap below 100*tol marks a (near-)degenerate subspace.
DEGENERACY_FACTOR = 100.0


class SolverConvergenceError(RuntimeError):
    """Iteration cap hit before the requested accuracy; carries residuals."""

    def __init__(self, message: str, residual_norms=None):
        super().__init__(message)
        self.residual_norms = residual_norms


@dataclass(frozen=True)
class EigenResult:
    """Ascending eigenvalues with orthonormal eigenvectors (as columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residual_norms: np.ndarray
    degenerate: bool = False


def _residuals(op: PauliTermSum, vals: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    out = []
    for lam, v in zip(vals, vecs.T):
        out.append(np.linalg.norm(apply(op, v) - lam * v))
    return np.asarray(out)


def _dense_eigenpairs(op: PauliTermSum, k: int) -> tuple[np.ndarray, np.ndarray]:
    mat = pauli.to_matrix(op)
    vals, vecs = scipy.linalg.eigh(mat, subset_by_index=(0, k - 1))
    return vals, vecs


def _lanczos_eigenpairs(
    op: PauliTermSum,
    k: int,
    tol: float,
    seed: int,
    v0: np.ndarray | None,
    max_iter: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Lanczos with full reorthogonalization, matrix-free through apply.

    Deterministic: the starting vector comes from the given seed (optionally
    blended with a warm-start vector), and breakdowns restart from the same
    generator stream.
    """
    dim = op.dim
    rng = np.random.default_rng(seed)
    start = rng.standard_normal(dim)
    if v0 is not None:
        # Warm start: keep a deterministic random admixture so the Krylov
        # space can still grow past an exact eigenvector.
        start = v0 + 1e-8 * start
    q = start / np.linalg.norm(start)

    basis: list[np.ndarray] = [q]
    alphas: list[float] = []
    betas: list[float] = []
    scale = max(1.0, float(np.abs(op.coeffs).sum()))
    max_iter = min(max_iter, dim)

    ritz_vals = np.zeros(0)
    for it in range(1, max_iter + 1):
        w = apply(op, basis[-1])
        alphas.append(float(basis[-1] @ w))
        w -= alphas[-1] * basis[-1]
        if len(basis) > 1:
            w -= betas[-1] * basis[-2]
        # Full reorthogonalization, twice for numerical safety.
        vmat = np.column_stack(basis)
        for _ in range(2):
            w -= vmat @ (vmat.T @ w)
        beta = float(np.linalg.norm(w))
        tri = scipy.linalg.eigh_tridiagonal(alphas, betas, eigvals_only=False)
        ritz_vals, ritz_vecs = tri
        if len(alphas) >= k:
            # Residual bound per Ritz pair: |beta * last component|.
            bounds = abs(beta) * np.abs(ritz_vecs[-1, :k])
            if np.all(bounds <= tol * scale):
                break
        if len(basis) == dim:
            break
        if beta <= 1e-14 * scale:
            # Invariant subspace: inject a fresh orthogonal direction.
            w = rng.standard_normal(dim)
            vmat = np.column_stack(basis)
            for _ in range(2):
                w -= vmat @ (vmat.T @ w)
            norm = float(np.linalg.norm(w))
            if norm <= 1e-14:
                break
            basis.append(w / norm)
            betas.append(0.0)
        else:
            basis.append(w / beta)
            betas.append(beta)
    else:
        vmat = np.column_stack(basis[: len(alphas)])
        vecs = vmat @ ritz_vecs[:, :k]
        raise SolverConvergenceError(
            f"Lanczos hit the {max_iter}-iteration cap",
            residual_norms=_residuals(op, ritz_vals[:k], vecs),
        )

    vmat = np.column_stack(basis[: len(alphas)])
    vals = ritz_vals[:k]
    vecs = vmat @ ritz_vecs[:, :k]
    # Re-orthonormalize the Ritz vectors (exact to working precision).
    vecs, _ = np.linalg.qr(vecs)
    return vals, vecs


def lowest_eigenpairs(
    op: PauliTermSum,
    k: int = 2,
    tol: float = 1e-10,
    method: str = "auto",
    seed: int = 7,
    v0: np.ndarray | None = None,
    max_iter: int = 1000,
) -> EigenResult:
    """k algebraically smallest eigenpairs.

    method="auto" uses dense symmetric diagonalization up to dimension 4096
    and Lanczos beyond; "dense" / "lanczos" force a path.  Results are
    deterministic for a fixed starting-vector seed.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if k > op.dim:
        raise ValueError(f"k={k} exceeds the space dimension {op.dim}")
    if method not in ("auto", "dense", "lanczos"):
        raise ValueError(f"unknown method {method!r}")
    if method == "auto":
        method = "dense" if op.dim <= DENSE_DIM_LIMIT else "lanczos"
    if method == "dense":
        vals, vecs = _dense_eigenpairs(op, k)
    else:
        vals, vecs = _lanczos_eigenpairs(op, k, tol, seed, v0, max_iter)
    # Canonical eigenvector sign: largest-magnitude component positive.
    for col in range(vecs.shape[1]):
        lead = np.argmax(np.abs(vecs[:, col]))
        if vecs[lead, col] < 0:
            vecs[:, col] = -vecs[:, col]
    degenerate = bool(vals[1] - vals[0] < DEGENERACY_FACTOR * tol)
    return EigenResult(
        eigenvalues=vals,
        eigenvectors=vecs,
        residual_norms=_residuals(op, vals, vecs),
        degenerate=degenerate,
    )


def order_parameter(
    state: np.ndarray, partition_a: Sequence[int], partition_b: Sequence[int]
) -> float:
    """Expectation of the spin imbalance sum_A sigma^z - sum_B sigma^z."""
    set_a, set_b = set(partition_a), set(partition_b)
    if set_a & set_b:
        raise ValueError(f"partitions overlap on {sorted(set_a & set_b)}")
    state = np.asarray(state)
    n_qubits = int(math.log2(len(state)))
    if 1 << n_qubits != len(state):
        raise ValueError("state length is not a power of two")
    if any(not 0 <= q < n_qubits for q in set_a | set_b):
        raise ValueError("partition indices outside the register")
    idx = np.arange(len(state), dtype=np.uint64)
    diag = np.zeros(len(state))
    for q in set_a:
        diag += 1.0 - 2.0 * ((idx >> np.uint64(q)) & np.uint64(1)).astype(np.float64)
    for q in set_b:
        diag -= 1.0 - 2.0 * ((idx >> np.uint64(q)) & np.uint64(1)).astype(np.float64)
    return float(diag @ (state * state))


@dataclass(frozen=True)
class ScanGrid:
    """Scan controls: coarse density, refinement target, solver settings.

    refine_s_tol is the golden-section stopping interval.  jump_step is the
    probe distance used to measure the order-parameter discontinuity at the
    located minimum; it is one "refined grid step", deliberately coarser
    than refine_s_tol so a smooth-but-fast crossover is not mistaken for a
    discontinuity.
    """

    coarse_points: int = 101
    refine_s_tol: float = 1e-4
    jump_step: float = 1.3e-3
    solver_tol: float = 1e-10
    solver_seed: int = 7
    k: int = 2
    method: str = "auto"

    def __post_init__(self):
        if self.coarse_points < 21:
            raise ValueError("coarse grid needs at least 21 points")
        if not 0 < self.refine_s_tol < 1:
            raise ValueError("refine_s_tol must lie in (0, 1)")


@dataclass(frozen=True)
class GapScan:
    """Per-s record of the scan plus the refined minimum-gap summary.

    s_grid merges the coarse grid with every refinement and probe point, so
    the stored record resolves the dip that delta_min came from.
    """

    s_grid: np.ndarray
    gap: np.ndarray
    order_param: np.ndarray
    flag_degenerate: np.ndarray
    delta_min: float
    s_star: float
    problem_gap: float
    order_jump: float


def _golden_refine(
    fn: Callable[[float], float], lo: float, hi: float, s_tol: float
) -> None:
    """Golden-section minimization; fn caches its own evaluations."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    while (b - a) > s_tol:
        if fn(c) < fn(d):
            b, d = d, c
            c = b - invphi * (b - a)
        else:
            a, c = c, d
            d = a + invphi * (b - a)


def gap_scan(
    graph: WeightedGraph,
    catalyst: "CatalystConfig | None" = None,
    partition: tuple[Sequence[int], Sequence[int]] | None = None,
    grid: ScanGrid | None = None,
) -> GapScan:
    """Gap and order parameter along the anneal, with refined minimum.

    partition defaults to (brute-force MWIS set, remaining vertices), the
    natural imbalance for the instance.  The coarse grid always contains
    s=0 and s=1; refinement brackets the coarse argmin and never reports a
    minimum above any evaluated point.
    """
    grid = grid or ScanGrid()
    n = graph.n_vertices
    problem = pauli.problem_hamiltonian(graph)
    driver = pauli.driver_hamiltonian(n)
    cat_op = pauli.catalyst_operator(catalyst, n)

    if partition is None:
        in_set, _ = brute_force_mwis(graph)
        partition = (list(in_set), [v for v in range(n) if v not in set(in_set)])

    diag_sorted = np.sort(diagonal(problem))
    problem_gap = float(diag_sorted[1] - diag_sorted[0])

    records: dict[float, tuple[float, float, bool]] = {}
    # Warm start (Lanczos path only; the dense path ignores v0): seeded in
    # the sequential refinement phase so coarse points stay
    # schedule-independent.
    warm: dict[str, np.ndarray | None] = {"v0": None}

    def evaluate(s: float, use_warm: bool = False) -> tuple[float, float, bool]:
        s = float(s)
        if s not in records:
            ham = anneal_hamiltonian(s, problem, driver, cat_op)
            v0 = warm["v0"] if use_warm else None
            res = lowest_eigenpairs(
                ham, k=grid.k, tol=grid.solver_tol,
                method=grid.method, seed=grid.solver_seed, v0=v0,
            )
            if res.degenerate and grid.k < 4:
                res = lowest_eigenpairs(
                    ham, k=4, tol=grid.solver_tol,
                    method=grid.method, seed=grid.solver_seed, v0=v0,
                )
            if use_warm:
                warm["v0"] = res.eigenvectors[:, 0]
            gap = float(res.eigenvalues[1] - res.eigenvalues[0])
            order = order_parameter(res.eigenvectors[:, 0], *partition)
            records[s] = (gap, order, res.degenerate)
        return records[s]

    coarse = np.linspace(0.0, 1.0, grid.coarse_points)
    coarse_gaps = np.array([evaluate(s)[0] for s in coarse])

    arg = int(np.argmin(coarse_gaps))
    lo = float(coarse[max(arg - 1, 0)])
    hi = float(coarse[min(arg + 1, grid.coarse_points - 1)])
    warm["v0"] = None
    _golden_refine(lambda s: evaluate(s, use_warm=True)[0], lo, hi, grid.refine_s_tol)

    s_star, (delta_min, _, _) = min(records.items(), key=lambda kv: (kv[1][0], kv[0]))

    # Order-parameter discontinuity probe across one refined grid step.
    half = grid.jump_step / 2.0
    probe_lo = min(max(s_star - half, 0.0), 1.0)
    probe_hi = min(max(s_star + half, 0.0), 1.0)
    order_jump = abs(evaluate(probe_hi)[1] - evaluate(probe_lo)[1])

    s_sorted = np.array(sorted(records))
    gaps = np.array([records[s][0] for s in s_sorted])
    orders = np.array([records[s][1] for s in s_sorted])
    flags = np.array([records[s][2] for s in s_sorted], dtype=bool)
    return GapScan(
        s_grid=s_sorted,
        gap=gaps,
        order_param=orders,
        flag_degenerate=flags,
        delta_min=float(delta_min),
        s_star=float(s_star),
        problem_gap=problem_gap,
        order_jump=float(order_jump),
    )


def detect_first_order(scan: GapScan, jump_threshold: float = 2.0) -> str:
    """Classify the scan: "transition" if the order parameter moves by more
    than the threshold across one refined grid step at the gap minimum,
    else "crossover"."""
    return "transition" if scan.order_jump > jump_threshold else "crossover"


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares fit of delta_min = amplitude * exp(-rate * L)."""

    points: tuple[tuple[int, float], ...]
    amplitude: float
    rate: float
    r_squared: float


def fit_exponential(points: Sequence[tuple[int, float]]) -> ScalingFit:
    """Fit log(delta_min) linearly in L; rate b is the decay per spin."""
    if len(points) < 3:
        raise ValueError("need at least three (L, delta_min) points")
    if any(d <= 0 for _, d in points):
        raise ValueError("delta_min values must be positive")
    sizes = np.array([float(l) for l, _ in points])
    logs = np.log([d for _, d in points])
    slope, intercept = np.polyfit(sizes, logs, 1)
    fitted = slope * sizes + intercept
    ss_res = float(np.sum((logs - fitted) ** 2))
    ss_tot = float(np.sum((logs - logs.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return ScalingFit(
        points=tuple((int(l), float(d)) for l, d in points),
        amplitude=float(np.exp(intercept)),
        rate=float(-slope),
        r_squared=float(min(max(r2, 0.0), 1.0)),
    )


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def gap_scan_csv(scan: GapScan) -> str:
    """CSV record: columns s, gap, order_param, flag_degenerate."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["s", "gap", "order_param", "flag_degenerate"])
    for s, g, o, f in zip(scan.s_grid, scan.gap, scan.order_param, scan.flag_degenerate):
        writer.writerow([_fmt(s), _fmt(g), _fmt(o), int(f)])
    return buf.getvalue()


def scaling_fit_csv(fit: ScalingFit) -> str:
    """CSV of (L, delta_min) rows with fit parameters as footer comments."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["L", "delta_min"])
    for size, delta in fit.points:
        writer.writerow([size, _fmt(delta)])
    buf.write(f"#A={_fmt(fit.amplitude)}\n")
    buf.write(f"#b={_fmt(fit.rate)}\n")
    buf.write(f"#r2={_fmt(fit.r_squared)}\n")
    return buf.getvalue()
