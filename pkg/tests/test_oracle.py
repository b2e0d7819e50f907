import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mwis_anneal.graphs import BipartiteToySpec, build_bipartite
from mwis_anneal.oracle import (
    first_order_condition,
    first_order_condition_general,
    flip_costs,
    flip_costs_43,
)
from mwis_anneal.pauli import diagonal, problem_hamiltonian


def random_valid_spec(rng, k=3):
    w2 = float(rng.uniform(0.01, 1.0))
    w1 = w2 * float(rng.uniform(0.3, 0.999))
    max_site = max(w1 / (k + 1), w2 / k)
    coupling = float(rng.uniform(1.05, 12.0)) * max_site
    return BipartiteToySpec(k + 1, k, w1, w2, coupling)


class TestFlipCosts:
    def test_reference_values(self):
        spec = BipartiteToySpec(4, 3, 0.0396, 0.04, 0.2132)
        reports = {r.label: r for r in flip_costs_43(spec)}
        w1 = 0.0396 / 4
        w5 = 0.04 / 3
        assert reports["flip one A-spin"].symbolic_cost == pytest.approx(
            12 * 0.2132 - 0.0396)
        assert reports["flip one B-spin"].symbolic_cost == pytest.approx(4 * 0.04 / 3)
        assert reports["flip all spins"].symbolic_cost == pytest.approx(
            4 * (0.04 - 0.0396))
        assert reports["flip one A- and one B-spin"].symbolic_cost == pytest.approx(
            8 * 0.2132 - 4 * w1 + 4 * w5)

    @pytest.mark.parametrize("seed", range(20))
    def test_symbolic_matches_diagonal(self, seed):
        rng = np.random.default_rng(seed)
        spec = random_valid_spec(rng)
        for report in flip_costs_43(spec):
            assert abs(report.symbolic_cost - report.numeric_cost) < 1e-10

    def test_equal_weights_zero_all_flip(self):
        spec = BipartiteToySpec(4, 3, 0.04, 0.04, 0.2132)
        reports = {r.label: r for r in flip_costs(spec)}
        assert reports["flip all spins"].symbolic_cost == 0.0
        assert abs(reports["flip all spins"].numeric_cost) < 1e-12

    def test_pair_flip_costs_most(self):
        # with J above every site weight the mixed pair flip dominates
        rng = np.random.default_rng(77)
        for _ in range(10):
            spec = random_valid_spec(rng)
            reports = {r.label: r for r in flip_costs_43(spec)}
            assert (reports["flip one A- and one B-spin"].symbolic_cost
                    > reports["flip one B-spin"].symbolic_cost)
            assert (reports["flip one A- and one B-spin"].symbolic_cost
                    > reports["flip all spins"].symbolic_cost)

    def test_wrong_shape(self):
        with pytest.raises(ValueError):
            flip_costs_43(BipartiteToySpec(3, 2, 0.0396, 0.04, 0.2132))

    def test_wrong_weight_order(self):
        with pytest.raises(ValueError):
            flip_costs(BipartiteToySpec(4, 3, 0.05, 0.04, 0.2132))

    @pytest.mark.parametrize("k", [2, 3, 4, 5])
    def test_generalized_family(self, k):
        rng = np.random.default_rng(100 + k)
        spec = random_valid_spec(rng, k=k)
        for report in flip_costs(spec):
            assert abs(report.symbolic_cost - report.numeric_cost) < 1e-10

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_within_partition_flips_are_additive(self, k):
        rng = np.random.default_rng(200 + k)
        spec = random_valid_spec(rng, k=k)
        graph = build_bipartite(spec)
        diag = diagonal(problem_hamiltonian(graph))
        ground = (1 << spec.size_a) - 1

        def cost(flips):
            mask = sum(1 << v for v in flips)
            return diag[ground ^ mask] - diag[ground]

        assert cost([0, 1]) == pytest.approx(cost([0]) + cost([1]), abs=1e-12)
        b0, b1 = spec.size_a, spec.size_a + 1
        assert cost([b0, b1]) == pytest.approx(cost([b0]) + cost([b1]), abs=1e-12)


class TestFirstOrderCondition:
    def test_reference_pair(self):
        assert first_order_condition(0.0396, 0.04) is True

    def test_boundary_fails_strictly(self):
        # exactly representable: W2 - W1 = 1 = W2/3, strict < must fail
        assert first_order_condition(2.0, 3.0) is False

    def test_invalid_order(self):
        with pytest.raises(ValueError):
            first_order_condition(0.05, 0.04)

    @given(
        w2=st.floats(0.01, 1.0),
        ratio=st.floats(0.3, 0.999),
    )
    @settings(max_examples=40, deadline=None)
    def test_iff_complement_is_first_excited(self, w2, ratio):
        w1 = w2 * ratio
        spec = BipartiteToySpec(4, 3, w1, w2, 5.33 * w2)
        graph = build_bipartite(spec)
        diag = diagonal(problem_hamiltonian(graph))
        ground = int(np.argmin(diag))
        complement = ground ^ 0b1111111
        rest = np.delete(diag, ground)
        first_excited_energy = rest.min()
        complement_is_first = diag[complement] == first_excited_energy
        assert first_order_condition(w1, w2) == complement_is_first

    @pytest.mark.parametrize("k", [2, 4, 5])
    def test_generalized_condition(self, k):
        w2 = 0.04
        graph_close = build_bipartite(
            BipartiteToySpec(k + 1, k, w2 * 0.995, w2, 5.33 * w2))
        diag = diagonal(problem_hamiltonian(graph_close))
        ground = int(np.argmin(diag))
        complement = ground ^ ((1 << (2 * k + 1)) - 1)
        rest = np.delete(diag, ground)
        assert first_order_condition_general(w2 * 0.995, w2, k)
        assert diag[complement] == rest.min()
