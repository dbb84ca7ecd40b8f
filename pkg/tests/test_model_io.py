import json
from fractions import Fraction

import pytest

from hamming_penalty.analysis import PermutationGroupSpec
from hamming_penalty.builders import build_ising_hamming, build_qubo_hamming
from hamming_penalty.errors import ModelFormatError
from hamming_penalty.model_io import (
    SpinConvention,
    group_from_data,
    model_from_dict,
    model_to_dict,
    model_to_json,
    read_model,
    write_model,
)
from hamming_penalty.models import IsingModel, Qubo, evaluate
from hamming_penalty.sampling import random_ising, random_qubo


def q1_dict():
    return {
        "kind": "qubo",
        "n": 3,
        "offset": "1",
        "linear": ["-1", "-1", "-1"],
        "quadratic": [
            {"i": 0, "j": 1, "value": "2"},
            {"i": 0, "j": 2, "value": "2"},
            {"i": 1, "j": 2, "value": "2"},
        ],
    }


def test_q1_serialization():
    assert model_to_dict(build_qubo_hamming(3, 1, 1)) == q1_dict()


def test_text_layout():
    text = model_to_json(IsingModel(n=2, offset=Fraction(-1, 2), quadratic={(0, 1): Fraction(1, 3)}))
    assert text.endswith("}\n")
    assert list(json.loads(text)) == ["kind", "n", "offset", "linear", "quadratic"]
    assert '"offset": "-1/2"' in text


def test_round_trip_through_files(tmp_path, rng):
    for model in (random_qubo(5, rng, density=0.5), random_ising(5, rng, density=0.5)):
        path = tmp_path / f"{model.kind}.json"
        write_model(model, path)
        assert read_model(path) == model
        # byte-identical re-serialization
        assert write_model(read_model(path), None) == path.read_text()


def test_minus_convention_flips_biases_only():
    model = build_ising_hamming(4, 1, 1)
    data = model_to_dict(model, SpinConvention.MINUS)
    assert data["linear"] == ["-2"] * 4
    assert data["offset"] == "4"
    assert {e["value"] for e in data["quadratic"]} == {"1"}
    assert model_from_dict(data, SpinConvention.MINUS) == model


def test_minus_convention_leaves_qubo_alone():
    q = build_qubo_hamming(3, 1, 1)
    assert model_to_dict(q, SpinConvention.MINUS) == q1_dict()


def test_minus_convention_matches_flipped_spins():
    model = build_ising_hamming(3, 1, 1)
    external = model_from_dict(model_to_dict(model, SpinConvention.MINUS))
    # read with the internal convention, bit 1 now means spin -1
    assert evaluate(external, "011") == evaluate(model, "100")


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d["quadratic"].append({"i": 2, "j": 1, "value": "1"}),
        lambda d: d["quadratic"].append({"i": 1, "j": 1, "value": "1"}),
        lambda d: d["quadratic"].append({"i": 0, "j": 3, "value": "1"}),
        lambda d: d["quadratic"].append({"i": 0, "j": 1, "value": "5"}),
        lambda d: d.update(offset="1/0"),
        lambda d: d.update(offset="0.5"),
        lambda d: d.update(offset=0.5),
        lambda d: d.update(offset=True),
        lambda d: d.update(kind="potts"),
        lambda d: d.update(n="3"),
        lambda d: d.update(linear=["1", "2"]),
        lambda d: d.pop("quadratic"),
    ],
)
def test_reader_rejects(mutate):
    data = q1_dict()
    mutate(data)
    with pytest.raises(ModelFormatError):
        model_from_dict(data)


def test_integer_rationals_accepted():
    data = q1_dict()
    data["offset"] = 1
    assert model_from_dict(data) == build_qubo_hamming(3, 1, 1)


def test_zero_entries_are_not_written():
    q = Qubo(n=2, linear=(0, 1), quadratic={(0, 1): 0})
    assert model_to_dict(q)["quadratic"] == []


def test_unreadable_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ModelFormatError):
        read_model(bad)
    with pytest.raises(ModelFormatError):
        read_model(tmp_path / "missing.json")


class TestGroups:
    def test_bare_shorthand(self):
        group = group_from_data("S_4")
        assert group.symmetric and group.n == 4

    def test_generator_shorthand(self):
        assert group_from_data({"n": 5, "generators": "S_n"}) == PermutationGroupSpec.full_symmetric(5)

    def test_explicit_generators(self):
        group = group_from_data({"n": 3, "generators": [[1, 0, 2]]})
        assert group.generators == ((1, 0, 2),)
        assert not group.symmetric

    @pytest.mark.parametrize(
        "data",
        [
            "S_n",
            "A_4",
            {"n": 3, "generators": [[0, 0, 1]]},
            {"n": 3, "generators": [[0, 1]]},
            {"n": 3, "generators": "S_4"},
            {"n": 3, "generators": [[0, 1, "2"]]},
            {"generators": [[0]]},
        ],
    )
    def test_rejects(self, data):
        with pytest.raises(ModelFormatError):
            group_from_data(data)
