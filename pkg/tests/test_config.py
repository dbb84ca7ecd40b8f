import json

import pytest

from hamming_penalty.config import DEFAULT_SETTINGS, SolverSettings, resolve
from hamming_penalty.errors import ConfigError


def test_missing_file_gives_defaults(tmp_path):
    assert SolverSettings.from_json(tmp_path / "absent.json") == SolverSettings()
    assert SolverSettings.from_json(None) == SolverSettings()


def test_partial_file(tmp_path):
    path = tmp_path / "settings.json"
    path.write_text(json.dumps({"chunk_bits": 10, "lp_tolerance": "1e-8"}))
    settings = SolverSettings.from_json(path)
    assert settings.chunk_bits == 10
    assert settings.lp_tolerance == 1e-8
    assert settings.max_lp_bits == 12


def test_shipped_settings(data_dir):
    assert SolverSettings.from_json(data_dir / "penalty_settings.json") == SolverSettings()


@pytest.mark.parametrize("text", ["{oops", "[1, 2]", '{"chunk_bits": "many"}'])
def test_invalid_files(tmp_path, text):
    path = tmp_path / "settings.json"
    path.write_text(text)
    with pytest.raises(ConfigError):
        SolverSettings.from_json(path)


def test_resolve():
    custom = SolverSettings(chunk_bits=2)
    assert resolve(None) is DEFAULT_SETTINGS
    assert resolve(custom) is custom


@pytest.mark.parametrize(
    "payload",
    [{"chunk_bits": 2.7}, {"max_pivots": True}, {"max_lp_bits": "10"}, {"lp_tolerance": False}],
)
def test_rejects_non_integral_and_boolean_values(tmp_path, payload):
    path = tmp_path / "settings.json"
    path.write_text(json.dumps(payload))
    with pytest.raises(ConfigError):
        SolverSettings.from_json(path)


def test_integral_float_accepted(tmp_path):
    path = tmp_path / "settings.json"
    path.write_text('{"max_group_order": 1e6, "chunk_bits": 8.0}')
    settings = SolverSettings.from_json(path)
    assert settings.max_group_order == 10**6 and isinstance(settings.max_group_order, int)
    assert settings.chunk_bits == 8 and isinstance(settings.chunk_bits, int)
