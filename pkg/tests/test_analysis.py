from fractions import Fraction

import numpy as np
import pytest

from hamming_penalty import analysis
from hamming_penalty.analysis import (
    PermutationGroupSpec,
    check_ground_invariance,
    interaction_graph,
    is_invariant,
    permute_masks,
    sparse_zero_witness,
    symmetrize,
)
from hamming_penalty.builders import build_ising_hamming, build_qubo_hamming
from hamming_penalty.config import SolverSettings
from hamming_penalty.errors import (
    CapacityError,
    DimensionError,
    DomainError,
    InapplicableError,
    PreconditionError,
)
from hamming_penalty.landscape import ground_states, min_penalty, weight_profile
from hamming_penalty.model_io import read_group
from hamming_penalty.models import IsingModel, Qubo, evaluate, qubo_to_ising
from hamming_penalty.sampling import (
    nonnegative_with_missing_edge,
    random_ising,
    random_qubo,
    vanishing_with_missing_edge,
    zero_ground_ising,
    zero_ground_model,
)

SPARSE_Q1 = Qubo(n=3, offset=1, linear=(-1, -1, -1), quadratic={(0, 2): 2, (1, 2): 2})


class TestInteractionGraph:
    def test_complete(self):
        graph = interaction_graph(build_qubo_hamming(4, 2, 1))
        assert graph.is_complete
        assert graph.n_edges == 6
        assert graph.missing_edges() == []

    def test_linear_model_has_no_edges(self):
        graph = interaction_graph(Qubo(n=3, linear=(1, 2, 3)))
        assert graph.edges == frozenset()

    def test_single_edge(self):
        graph = interaction_graph(Qubo(n=3, quadratic={(0, 1): 1}))
        assert graph.edges == {(0, 1)}
        assert graph.missing_edges() == [(0, 2), (1, 2)]
        assert graph.degrees() == [1, 1, 0]


class TestSparseZeroWitness:
    def test_example(self):
        witness = sparse_zero_witness(SPARSE_Q1, 1)
        assert str(witness.bits) == "110"
        assert witness.value == -1
        assert not witness.nonnegative
        assert witness.missing_edge == (0, 1)

    def test_complete_graph(self):
        with pytest.raises(InapplicableError):
            sparse_zero_witness(build_qubo_hamming(3, 1, 1), 1)

    def test_not_vanishing(self):
        with pytest.raises(PreconditionError):
            sparse_zero_witness(SPARSE_Q1.replace(offset=2), 1)

    @pytest.mark.parametrize("r", [0, 3])
    def test_weight_range(self, r):
        with pytest.raises(DomainError):
            sparse_zero_witness(SPARSE_Q1, r)

    def test_reuses_given_profile(self, monkeypatch):
        profile = weight_profile(SPARSE_Q1)

        def no_scan(*args, **kwargs):
            raise AssertionError("profile should be reused")

        monkeypatch.setattr(analysis, "weight_profile", no_scan)
        witness = sparse_zero_witness(SPARSE_Q1, 1, profile=profile)
        assert str(witness.bits) == "110"

    def test_profile_size_mismatch(self):
        with pytest.raises(DimensionError):
            sparse_zero_witness(SPARSE_Q1, 1, profile=weight_profile(Qubo(n=4)))

    def test_ising_input(self):
        witness = sparse_zero_witness(qubo_to_ising(SPARSE_Q1), 1)
        assert witness.value == -1

    def test_random_vanishing_models(self, rng):
        for n in range(3, 9):
            for _ in range(200):
                r = int(rng.integers(1, n))
                u, v = sorted(int(i) for i in rng.choice(n, size=2, replace=False))
                model = vanishing_with_missing_edge(n, r, rng, missing=(u, v))
                witness = sparse_zero_witness(model, r)
                assert witness.bits.weight in (r - 1, r + 1)
                assert witness.value <= 0
                assert evaluate(model, witness.bits) == witness.value

    def test_nonnegative_models_reach_zero(self, rng):
        for n in range(3, 9):
            for _ in range(200):
                r = int(rng.integers(1, n))
                model = nonnegative_with_missing_edge(n, r, rng, missing=(n - 2, n - 1))
                witness = sparse_zero_witness(model, r)
                assert witness.nonnegative
                assert witness.value == 0


class TestGroups:
    def test_full_symmetric_closure(self):
        for n in range(1, 6):
            assert len(PermutationGroupSpec.full_symmetric(n).closure()) == [1, 2, 6, 24, 120][n - 1]

    def test_generated_closure(self, data_dir):
        group = read_group(data_dir / "group_s4.json")
        elements = group.closure()
        assert len(elements) == 24
        assert tuple(range(4)) in elements

    def test_cyclic_group(self):
        group = PermutationGroupSpec(n=5, generators=((1, 2, 3, 4, 0),))
        assert len(group.closure()) == 5

    def test_closure_guard(self):
        with pytest.raises(CapacityError):
            PermutationGroupSpec.full_symmetric(5).closure(SolverSettings(max_group_order=100))
        with pytest.raises(CapacityError):
            PermutationGroupSpec(n=4, generators=((1, 0, 2, 3), (1, 2, 3, 0))).closure(
                SolverSettings(max_group_order=10)
            )

    def test_bad_generator(self):
        with pytest.raises(DimensionError):
            PermutationGroupSpec(n=3, generators=((0, 1, 1),))


class TestSymmetrize:
    def test_mean_of_biases(self):
        m = IsingModel(n=3, linear=(3, 1, 2))
        assert symmetrize(m, PermutationGroupSpec.full_symmetric(3)).linear == (2, 2, 2)

    def test_identity_group(self, rng):
        m = random_ising(4, rng, density=0.5)
        assert symmetrize(m, PermutationGroupSpec.trivial(4)) == m

    def test_single_edge_spreads_over_all_slots(self, data_dir):
        m = IsingModel(n=4, quadratic={(0, 1): 1})
        fast = symmetrize(m, PermutationGroupSpec.full_symmetric(4))
        closure = symmetrize(m, read_group(data_dir / "group_s4.json"))
        assert fast == closure
        assert len(fast.quadratic) == 6
        assert set(fast.quadratic.values()) == {Fraction(1, 6)}

    def test_offset_kept(self, rng):
        m = random_qubo(5, rng)
        assert symmetrize(m, PermutationGroupSpec.full_symmetric(5)).offset == m.offset

    def test_result_is_invariant(self, rng):
        group = PermutationGroupSpec(n=6, generators=((1, 2, 0, 3, 4, 5), (0, 1, 2, 4, 5, 3)))
        m = random_qubo(6, rng)
        averaged = symmetrize(m, group)
        assert is_invariant(averaged, group)
        assert symmetrize(averaged, group) == averaged

    def test_conversion_commutes(self, rng):
        group = PermutationGroupSpec.full_symmetric(5)
        for _ in range(20):
            q = random_qubo(5, rng, density=0.6)
            assert symmetrize(qubo_to_ising(q), group) == qubo_to_ising(symmetrize(q, group))

    def test_degree_mismatch(self):
        with pytest.raises(DimensionError):
            symmetrize(Qubo(n=3), PermutationGroupSpec.full_symmetric(4))

    def test_zero_ground_models(self, rng):
        """Averaging keeps the ground set and bounds, is idempotent and never lowers the gap."""
        trials = 0
        while trials < 500:
            n = 3 + trials % 8
            r = int(rng.integers(0, n + 1))
            model = zero_ground_model(n, r, rng) if trials % 3 else zero_ground_ising(n, r, rng)
            group = PermutationGroupSpec.full_symmetric(n)
            averaged = symmetrize(model, group)

            np.testing.assert_array_equal(ground_states(averaged), ground_states(model))
            lo, hi = min(model.linear), max(model.linear)
            assert all(lo <= v <= hi for v in averaged.linear)
            couplings = [model.coupling(j, k) for j, k in model.pairs()]
            assert all(min(couplings) <= v <= max(couplings) for v in averaged.quadratic.values())
            assert symmetrize(averaged, group) == averaged
            if 0 < r < n:
                assert min_penalty(averaged, r).gap >= min_penalty(model, r).gap
            assert check_ground_invariance(averaged, group)
            trials += 1


class TestGroundInvariance:
    def test_penalty_models_are_invariant(self):
        for n in range(2, 7):
            group = PermutationGroupSpec.full_symmetric(n)
            for r in range(n + 1):
                assert check_ground_invariance(build_qubo_hamming(n, r, 1), group)
                assert check_ground_invariance(build_ising_hamming(n, r, 1), group)

    def test_unique_ground_state_breaks_swap(self):
        m = Qubo(n=3, linear=(-1, 1, 1))
        np.testing.assert_array_equal(ground_states(m), [4])
        assert not check_ground_invariance(m, PermutationGroupSpec(n=3, generators=((1, 0, 2),)))
        assert check_ground_invariance(m, PermutationGroupSpec(n=3, generators=((0, 2, 1),)))

    def test_permute_masks(self):
        masks = np.array([0b100, 0b110])
        np.testing.assert_array_equal(permute_masks(masks, (1, 2, 0), 3), [0b010, 0b011])
