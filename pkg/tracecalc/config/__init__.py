"""Configuration module for tracecalc."""

from tracecalc.config.loader import get_config_path, load_config
from tracecalc.config.schema import Config

__all__ = ["Config", "load_config", "get_config_path"]
