"""Tests for configuration schema validation."""

from pathlib import Path

import pytest
from pydantic import ValidationError

from tracecalc.config.schema import Config, HeatConfig, LabConfig, SeriesConfig


class TestConfig:
    def test_defaults(self):
        config = Config()
        assert config.heat.block_cap == 300
        assert config.heat.max_grade == 12
        assert config.series.order == 16
        assert config.lab.seed == 0

    def test_path_expansion(self):
        config = Config()
        assert isinstance(config.cache_path, Path)
        assert "~" not in str(config.cache_path)
        assert "~" not in str(config.output_path)
        assert config.cache_path.name == "semigroup.json"


class TestHeatConfig:
    def test_block_cap_range(self):
        assert HeatConfig(block_cap=2000).block_cap == 2000
        with pytest.raises(ValidationError):
            HeatConfig(block_cap=0)
        with pytest.raises(ValidationError):
            HeatConfig(block_cap=2001)

    def test_negative_grade_rejected(self):
        with pytest.raises(ValidationError):
            HeatConfig(max_grade=-1)


class TestSeriesConfig:
    def test_defaults(self):
        series = SeriesConfig()
        assert series.fd_step == 1e-4
        assert series.residual_flag == 1e-6

    def test_order_range(self):
        with pytest.raises(ValidationError):
            SeriesConfig(order=0)
        with pytest.raises(ValidationError):
            SeriesConfig(order=201)

    def test_positive_step(self):
        with pytest.raises(ValidationError):
            SeriesConfig(fd_step=0.0)


class TestLabConfig:
    def test_defaults(self):
        lab = LabConfig()
        assert lab.step == 5e-3
        assert lab.paths == 2000
        assert lab.workers == 4
        assert lab.reorthonormalize_every == 100
        assert lab.chunk_size == 250

    def test_counts_must_be_positive(self):
        for field in ("paths", "workers", "reorthonormalize_every", "chunk_size"):
            with pytest.raises(ValidationError):
                LabConfig(**{field: 0})
