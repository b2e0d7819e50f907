import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mwis_anneal.graphs import erdos_renyi_instance
from mwis_anneal.pauli import (
    PauliTermSum,
    anneal_hamiltonian,
    driver_hamiltonian,
    n_local_catalyst,
    problem_hamiltonian,
    to_matrix,
)
from mwis_anneal.catalysts import CatalystConfig, edge_sets
from mwis_anneal.perturbation import (
    DegenerateTargetError,
    PerturbationInput,
    complete_spectrum,
    energy_corrections,
)


def toy_system(seed, n_qubits=4, s=0.6):
    """Unperturbed anneal Hamiltonian plus an XX catalyst as perturbation."""
    g = erdos_renyi_instance(n_qubits, 0.7, 0.1, 1.0, 1.0, 2.0, seed=seed)
    h0 = anneal_hamiltonian(
        s, problem_hamiltonian(g), driver_hamiltonian(n_qubits))
    pairs = edge_sets(g, 2)
    if not pairs:
        pairs = [(0, 1)]
    catalyst = n_local_catalyst(
        CatalystConfig(subsets=tuple(pairs)), n_qubits)
    return h0, catalyst


class TestCorrections:
    def test_identity_perturbation_shifts_only(self):
        h0, _ = toy_system(0)
        spectrum = complete_spectrum(h0)
        identity = PauliTermSum.from_terms(4, [(0.7, 0, 0)])
        first, second, third = energy_corrections(
            PerturbationInput(spectrum, identity, lam=0.2))
        assert first == pytest.approx(0.2 * 0.7, abs=1e-12)
        assert second == pytest.approx(0.0, abs=1e-12)
        assert third == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("seed", [1, 2, 3, 4])
    def test_ground_second_order_nonpositive(self, seed):
        h0, catalyst = toy_system(seed)
        spectrum = complete_spectrum(h0)
        _, second, _ = energy_corrections(
            PerturbationInput(spectrum, catalyst, lam=1.0, target_index=0))
        assert second <= 0.0

    @given(factor=st.floats(-3.0, 3.0).filter(lambda c: abs(c) > 1e-3))
    @settings(max_examples=20, deadline=None)
    def test_order_by_order_scaling(self, factor):
        h0, catalyst = toy_system(5)
        spectrum = complete_spectrum(h0)
        base = energy_corrections(
            PerturbationInput(spectrum, catalyst, lam=1e-3))
        scaled = energy_corrections(
            PerturbationInput(spectrum, catalyst.scaled(factor), lam=1e-3))
        assert scaled[0] == pytest.approx(factor * base[0], rel=1e-9, abs=1e-15)
        assert scaled[1] == pytest.approx(factor**2 * base[1], rel=1e-9, abs=1e-15)
        assert scaled[2] == pytest.approx(factor**3 * base[2], rel=1e-9, abs=1e-15)

    def test_matches_exact_eigenvalue_to_fourth_order(self):
        # residual after the third-order partial sum falls ~1e4 per decade
        h0, catalyst = toy_system(6)
        spectrum = complete_spectrum(h0)
        dense_h0 = to_matrix(h0)
        dense_v = to_matrix(catalyst)

        def residuals(lam):
            first, second, third = energy_corrections(
                PerturbationInput(spectrum, catalyst, lam=lam))
            exact = np.linalg.eigvalsh(dense_h0 + lam * dense_v)[0]
            base = spectrum.eigenvalues[0]
            return (
                abs(exact - (base + first + second)),
                abs(exact - (base + first + second + third)),
            )

        second_hi, third_hi = residuals(1e-2)
        second_lo, third_lo = residuals(1e-3)
        ratio_second = second_hi / second_lo
        ratio_third = third_hi / third_lo
        assert 500 < ratio_second < 2000       # lambda^3 tail
        assert ratio_third > 3000              # lambda^4 tail shrinks faster
        assert third_hi < second_hi

    def test_degenerate_target_rejected(self):
        # driver at L=2 has a doubly degenerate middle pair
        spectrum = complete_spectrum(driver_hamiltonian(2))
        catalyst = PauliTermSum.from_terms(2, [(1.0, 1, 0)])
        with pytest.raises(DegenerateTargetError):
            energy_corrections(
                PerturbationInput(spectrum, catalyst, lam=0.1, target_index=1))

    def test_ground_target_of_degenerate_spectrum_is_fine(self):
        spectrum = complete_spectrum(driver_hamiltonian(2))
        catalyst = PauliTermSum.from_terms(2, [(1.0, 1, 0)])
        first, second, third = energy_corrections(
            PerturbationInput(spectrum, catalyst, lam=0.1, target_index=0))
        assert np.isfinite([first, second, third]).all()

    def test_incomplete_spectrum_rejected(self):
        from mwis_anneal.spectrum import lowest_eigenpairs

        h0, catalyst = toy_system(7)
        partial = lowest_eigenpairs(h0, k=2)
        with pytest.raises(ValueError):
            PerturbationInput(partial, catalyst, lam=0.1)

    def test_qubit_limit(self):
        with pytest.raises(ValueError):
            complete_spectrum(driver_hamiltonian(11))
