"""Tests for configuration loading and key conversion."""

import json
from pathlib import Path

from tracecalc.config.loader import (
    camel_to_snake,
    convert_keys,
    convert_to_camel,
    load_config,
    save_config,
    snake_to_camel,
)
from tracecalc.config.schema import Config


# ── Key conversion ──────────────────────────────────────────────────


class TestCamelToSnake:
    def test_simple(self):
        assert camel_to_snake("blockCap") == "block_cap"

    def test_multiple_words(self):
        assert camel_to_snake("reorthonormalizeEvery") == "reorthonormalize_every"

    def test_single_word(self):
        assert camel_to_snake("paths") == "paths"

    def test_already_snake(self):
        assert camel_to_snake("fd_step") == "fd_step"

    def test_empty(self):
        assert camel_to_snake("") == ""


class TestSnakeToCamel:
    def test_simple(self):
        assert snake_to_camel("block_cap") == "blockCap"

    def test_multiple_words(self):
        assert snake_to_camel("residual_flag") == "residualFlag"

    def test_single_word(self):
        assert snake_to_camel("seed") == "seed"

    def test_empty(self):
        assert snake_to_camel("") == ""


class TestConvertKeys:
    def test_nested_dict(self):
        data = {"heat": {"blockCap": 50}, "lab": {"chunkSize": 10}}
        assert convert_keys(data) == {"heat": {"block_cap": 50}, "lab": {"chunk_size": 10}}

    def test_non_dict(self):
        assert convert_keys("hello") == "hello"
        assert convert_keys(42) == 42
        assert convert_keys(None) is None

    def test_roundtrip(self):
        original = {"blockCap": 1, "maxGrade": 2, "fdStep": 0.1}
        assert convert_to_camel(convert_keys(original)) == original


# ── Config load/save ────────────────────────────────────────────────


class TestLoadConfig:
    def test_default_when_no_file(self, tmp_path: Path):
        config = load_config(tmp_path / "nonexistent.json")
        assert isinstance(config, Config)
        assert config.heat.block_cap == 300

    def test_load_camel_case_json(self, tmp_path: Path):
        config_file = tmp_path / "config.json"
        config_file.write_text(json.dumps({
            "heat": {"blockCap": 120},
            "series": {"order": 24, "fdStep": 1e-3},
            "lab": {"chunkSize": 50, "paths": 400},
        }))
        config = load_config(config_file)
        assert config.heat.block_cap == 120
        assert config.series.order == 24
        assert config.series.fd_step == 1e-3
        assert config.lab.chunk_size == 50
        assert config.lab.paths == 400

    def test_invalid_json_returns_default(self, tmp_path: Path):
        config_file = tmp_path / "config.json"
        config_file.write_text("not json{{{")
        config = load_config(config_file)
        assert config.series.order == 16

    def test_out_of_range_value_returns_default(self, tmp_path: Path):
        config_file = tmp_path / "config.json"
        config_file.write_text(json.dumps({"heat": {"blockCap": 0}}))
        config = load_config(config_file)
        assert config.heat.block_cap == 300

    def test_environment_overrides_file(self, tmp_path: Path, monkeypatch):
        config_file = tmp_path / "config.json"
        config_file.write_text(json.dumps({"lab": {"seed": 5, "paths": 300}}))
        monkeypatch.setenv("TRACECALC_LAB__SEED", "11")
        monkeypatch.setenv("TRACECALC_CACHE", str(tmp_path / "c.json"))
        config = load_config(config_file)
        assert config.lab.seed == 11
        assert config.lab.paths == 300
        assert config.cache_path == tmp_path / "c.json"


class TestSaveConfig:
    def test_save_creates_file(self, tmp_path: Path):
        config_file = tmp_path / "subdir" / "config.json"
        save_config(Config(), config_file)
        assert config_file.exists()

    def test_save_uses_camel_case(self, tmp_path: Path):
        config_file = tmp_path / "config.json"
        save_config(Config(), config_file)
        data = json.loads(config_file.read_text())
        assert "blockCap" in data["heat"]
        assert "reorthonormalizeEvery" in data["lab"]
        assert "outputDir" in data

    def test_roundtrip(self, tmp_path: Path):
        original = Config()
        original.lab.seed = 42
        original.series.order = 8

        config_file = tmp_path / "config.json"
        save_config(original, config_file)
        loaded = load_config(config_file)

        assert loaded.lab.seed == 42
        assert loaded.series.order == 8
