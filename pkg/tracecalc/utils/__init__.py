"""Utility helpers."""

from tracecalc.utils.helpers import ensure_dir, run_stem, safe_filename, timestamp

__all__ = ["ensure_dir", "run_stem", "safe_filename", "timestamp"]
