import json
from fractions import Fraction

import pytest

from hamming_penalty.builders import (
    Binding,
    BoundKind,
    CoefficientBounds,
    alternate_ising_offset,
    build_hamming,
    build_ising_hamming,
    build_optimal,
    build_qubo_hamming,
    optimal_ising_scale,
    optimal_qubo_scale,
    symmetric_weight_values,
    within_bounds,
)
from hamming_penalty.errors import DomainError, ModelFormatError, UnsupportedWeightError
from hamming_penalty.landscape import exact_energies, weight_profile
from hamming_penalty.models import Bitstring, complement_qubo, evaluate, qubo_to_ising
from hamming_penalty.sampling import random_masks


class TestQuboBuilder:
    def test_q1(self):
        q = build_qubo_hamming(3, 1, 1)
        assert q.offset == 1
        assert q.linear == (-1, -1, -1)
        assert q.quadratic == {(0, 1): 2, (0, 2): 2, (1, 2): 2}

    def test_q2(self):
        q = build_qubo_hamming(4, 2, 1)
        assert q.offset == 4
        assert set(q.linear) == {-3}
        assert set(q.quadratic.values()) == {2}
        assert len(q.quadratic) == 6

    def test_r0(self):
        q = build_qubo_hamming(2, 0, 1)
        assert q.offset == 0
        assert q.linear == (1, 1)
        assert q.quadratic == {(0, 1): 2}
        assert evaluate(q, "11") == 4

    @pytest.mark.parametrize("E", [Fraction(1), Fraction(1, 2)])
    def test_value_is_squared_distance(self, E, rng):
        for n in range(2, 17):
            for r in range(n + 1):
                q = build_qubo_hamming(n, r, E)
                if n <= 12:
                    numerators, den = exact_energies(q)
                    masks = range(1 << n)
                else:
                    masks = random_masks(n, 1000, rng)
                    numerators, den = exact_energies(q, masks=masks)
                for mask, num in zip(masks, numerators):
                    weight = bin(int(mask)).count("1")
                    assert Fraction(int(num), den) == E * (r - weight) ** 2

    @pytest.mark.parametrize("n,r,E", [(3, 4, 1), (3, -1, 1), (3, 1, 0), (3, 1, -2), (0, 0, 1)])
    def test_domain_errors(self, n, r, E):
        with pytest.raises(DomainError):
            build_qubo_hamming(n, r, E)

    def test_complement_duality(self):
        for n in range(2, 7):
            for r in range(n + 1):
                flipped = complement_qubo(build_qubo_hamming(n, r, 1))
                mirror = build_qubo_hamming(n, n - r, 1)
                for mask in range(1 << n):
                    x = Bitstring.from_mask(mask, n)
                    assert evaluate(flipped, x) == evaluate(mirror, x)


class TestQuboScale:
    def test_linear_case(self):
        scale = optimal_qubo_scale(3, 1, CoefficientBounds.qubo(1, 4))
        assert (scale.E, scale.gap, scale.binding) == (1, 1, Binding.LINEAR)

    def test_quadratic_case(self):
        scale = optimal_qubo_scale(3, 1, CoefficientBounds.qubo(2, 2))
        assert (scale.gap, scale.binding) == (1, Binding.QUADRATIC)

    def test_tie(self):
        scale = optimal_qubo_scale(4, 2, CoefficientBounds.qubo(3, 2))
        assert (scale.gap, scale.binding) == (1, Binding.TIE)

    @pytest.mark.parametrize("r", [0, 4])
    def test_boundary_weights_unsupported(self, r):
        with pytest.raises(UnsupportedWeightError):
            optimal_qubo_scale(4, r, CoefficientBounds.qubo(1, 1))

    def test_optimal_model_respects_bounds(self):
        for B, C in [(1, 1), (1, 4), (4, 1), (Fraction(5, 2), Fraction(3, 7))]:
            bounds = CoefficientBounds.qubo(B, C)
            for n in range(2, 8):
                for r in range(1, n):
                    model, scale = build_optimal(n, r, bounds)
                    assert within_bounds(model, bounds)
                    tight_linear = min(model.linear) == -bounds.B
                    tight_quadratic = max(model.quadratic.values()) == bounds.C
                    assert tight_linear or tight_quadratic
                    assert tight_linear == (scale.binding in (Binding.LINEAR, Binding.TIE))


class TestIsingBuilder:
    def test_h2(self):
        m = build_ising_hamming(4, 2, 1)
        assert m.offset == 2
        assert m.biases == (0, 0, 0, 0)
        assert set(m.couplings.values()) == {1}
        profile = weight_profile(m)
        assert profile.minima[2] == profile.maxima[2] == 0
        assert profile.minima[1] == profile.minima[3] == 2

    def test_h1(self):
        m = build_ising_hamming(4, 1, 1)
        assert m.offset == 4
        assert m.biases == (2, 2, 2, 2)
        assert all(evaluate(m, Bitstring.basis(4, j)) == 0 for j in range(4))

    def test_n2(self):
        m = build_ising_hamming(2, 1, Fraction(1, 2))
        assert m.offset == Fraction(1, 2)
        assert m.biases == (0, 0)
        assert m.couplings == {(0, 1): Fraction(1, 2)}

    def test_matches_converted_qubo(self):
        for E in (Fraction(1), Fraction(1, 3)):
            for n in range(2, 13):
                for r in range(n + 1):
                    assert build_ising_hamming(n, r, E) == qubo_to_ising(build_qubo_hamming(n, r, 2 * E))

    def test_needs_two_spins(self):
        with pytest.raises(DomainError):
            build_ising_hamming(1, 0, 1)

    def test_alternate_offset_does_not_vanish(self):
        n, r, E = 4, 1, 1
        exact = build_ising_hamming(n, r, E)
        printed = exact.replace(offset=alternate_ising_offset(n, r, E))
        assert evaluate(printed, "1000") != 0
        for mask in range(1 << n):
            x = Bitstring.from_mask(mask, n)
            expected = {0: 2, 1: 0, 2: 2}.get(x.weight)
            if expected is not None:
                assert evaluate(exact, x) == expected

    def test_alternate_offset_agrees_at_half_weight(self):
        assert alternate_ising_offset(6, 3, 2) == build_ising_hamming(6, 3, 2).offset


class TestIsingScale:
    def test_half_weight(self):
        scale = optimal_ising_scale(4, 2, CoefficientBounds.ising(1, 1, 3))
        assert (scale.E, scale.gap) == (3, 6)

    def test_low_weight(self):
        scale = optimal_ising_scale(4, 1, CoefficientBounds.ising(1, 1, 1))
        assert (scale.E, scale.gap, scale.binding) == (Fraction(1, 2), 1, Binding.LINEAR)

    def test_high_weight_uses_h_min(self):
        scale = optimal_ising_scale(4, 3, CoefficientBounds.ising(2, 1, 1))
        assert (scale.E, scale.gap) == (1, 2)
        model, _ = build_optimal(4, 3, CoefficientBounds.ising(2, 1, 1))
        assert min(model.biases) == -2

    def test_optimal_model_respects_bounds(self):
        profiles = [(1, 1, 1), (10, 10, 1), (1, 10, 1), (10, 1, 1), (Fraction(1, 2), 3, 2)]
        for h_min, h_max, J_max in profiles:
            bounds = CoefficientBounds.ising(h_min, h_max, J_max)
            for n in range(2, 10):
                for r in range(1, n):
                    model, scale = build_optimal(n, r, bounds)
                    assert within_bounds(model, bounds)
                    assert scale.gap == 2 * scale.E > 0

    def test_wrong_bounds_kind(self):
        with pytest.raises(DomainError):
            optimal_ising_scale(4, 1, CoefficientBounds.qubo(1, 1))


class TestCoefficientBounds:
    def test_rejects_non_positive(self):
        with pytest.raises(DomainError):
            CoefficientBounds.qubo(0, 1)
        with pytest.raises(DomainError):
            CoefficientBounds.ising(1, -1, 1)

    def test_rejects_foreign_fields(self):
        with pytest.raises(DomainError):
            CoefficientBounds(kind=BoundKind.QUBO, B=Fraction(1), C=Fraction(1), J_max=Fraction(1))

    def test_from_dict(self):
        bounds = CoefficientBounds.from_dict({"kind": "ising", "h_min": "1/2", "h_max": 3, "J_max": "1"})
        assert bounds == CoefficientBounds.ising(Fraction(1, 2), 3, 1)
        assert bounds.to_dict() == {"kind": "ising", "h_min": "1/2", "h_max": "3", "J_max": "1"}

    @pytest.mark.parametrize(
        "data",
        [
            {"kind": "qubo", "B": 0.5, "C": "1"},
            {"kind": "qubo", "B": "1"},
            {"kind": "potts", "B": "1", "C": "1"},
            {"kind": "qubo", "B": "1", "C": "1/0"},
            {"kind": "qubo", "B": "1", "C": "1", "D": "2"},
            {"kind": "qubo", "B": "-1", "C": "1"},
        ],
    )
    def test_from_dict_rejects(self, data):
        with pytest.raises(ModelFormatError):
            CoefficientBounds.from_dict(data)

    def test_from_json_single_and_list(self, tmp_path):
        single = tmp_path / "one.json"
        single.write_text(json.dumps({"kind": "qubo", "B": "1", "C": "4"}))
        assert CoefficientBounds.from_json(single) == [CoefficientBounds.qubo(1, 4)]
        many = tmp_path / "many.json"
        many.write_text(json.dumps([{"kind": "qubo", "B": "1", "C": "4"}, {"kind": "qubo", "B": "2", "C": "2"}]))
        assert len(CoefficientBounds.from_json(many)) == 2

    def test_sample_files(self, data_dir):
        assert len(CoefficientBounds.from_json(data_dir / "qubo_bounds.json")) == 3
        assert {b.kind for b in CoefficientBounds.from_json(data_dir / "ising_bounds.json")} == {BoundKind.ISING}

    def test_scaled(self):
        assert CoefficientBounds.qubo(1, 4).scaled(2) == CoefficientBounds.qubo(2, 8)


def test_symmetric_weight_values_match_builders():
    for kind in ("qubo", "ising"):
        for n in range(2, 7):
            for r in range(n + 1):
                model = build_hamming(kind, n, r, Fraction(3, 2))
                values = symmetric_weight_values(kind, n, model.offset, model.linear[0], model.coupling(0, 1))
                profile = weight_profile(model)
                assert values == list(profile.minima)
