"""Rayleigh-Schrodinger energy corrections through third order.

Works on a dense, complete spectrum (the third-order double sum needs all
eigenpairs), so it is restricted to small registers.  Used to analyze how
a catalyst perturbation moves individual levels near the end of the anneal.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import pauli
from .pauli import PauliTermSum
from .spectrum import EigenResult

__all__ = [
    "DegenerateTargetError",
    "PerturbationInput",
    "complete_spectrum",
    "energy_corrections",
]

DENSE_QUBIT_LIMIT = 10
DEGENERACY_REL_TOL = 1e-10


class DegenerateTargetError(ValueError):
    """Target level too close to a neighbor for nondegenerate theory."""


def complete_spectrum(op: PauliTermSum) -> EigenResult:
    """All 2^L eigenpairs by dense diagonalization."""
    if op.n_qubits > DENSE_QUBIT_LIMIT:
        raise ValueError(
            f"complete spectra are limited to {DENSE_QUBIT_LIMIT} qubits"
        )
    vals, vecs = np.linalg.eigh(pauli.to_matrix(op))
    residuals = np.array(
        [np.linalg.norm(pauli.apply(op, vecs[:, i]) - vals[i] * vecs[:, i])
         for i in range(len(vals))]
    )
    return EigenResult(eigenvalues=vals, eigenvectors=vecs, residual_norms=residuals)


@dataclass(frozen=True)
class PerturbationInput:
    """Complete unperturbed spectrum, perturbation V, strength, target level."""

    unperturbed: EigenResult
    perturbation: PauliTermSum
    lam: float
    target_index: int = 0

    def __post_init__(self):
        dim = len(self.unperturbed.eigenvalues)
        if self.unperturbed.eigenvectors.shape != (dim, dim):
            raise ValueError("unperturbed spectrum must be complete")
        if not 0 <= self.target_index < dim:
            raise ValueError("target index outside the spectrum")


def energy_corrections(inp: PerturbationInput) -> tuple[float, float, float]:
    """(first, second, third) order corrections, each including its power
    of the coupling strength.

    The second-order ground-state correction is always <= 0: every
    denominator E_0 - E_m is negative and every numerator is a square.
    """
    energies = inp.unperturbed.eigenvalues
    vectors = inp.unperturbed.eigenvectors
    n = inp.target_index
    lam = inp.lam

    scale = max(1.0, float(np.max(np.abs(energies))))
    gaps = np.abs(energies - energies[n])
    gaps[n] = np.inf
    if float(gaps.min()) < DEGENERACY_REL_TOL * scale:
        raise DegenerateTargetError(
            f"level {n} is degenerate to relative tolerance {DEGENERACY_REL_TOL}"
        )

    # Full matrix elements M[a, b] = <psi_a|V|psi_b> via matrix-free applies.
    applied = np.column_stack(
        [pauli.apply(inp.perturbation, vectors[:, i]) for i in range(vectors.shape[1])]
    )
    elements = vectors.T @ applied

    others = np.arange(len(energies)) != n
    denom = energies[n] - energies[others]
    row = elements[n, others]

    first = lam * elements[n, n]
    second = lam**2 * float(np.sum(row**2 / denom))

    inner = elements[np.ix_(others, others)]
    weighted = row / denom
    double_sum = float(weighted @ inner @ weighted)
    correction_sum = float(elements[n, n] * np.sum(row**2 / denom**2))
    third = lam**3 * (double_sum - correction_sum)
    return float(first), float(second), float(third)
