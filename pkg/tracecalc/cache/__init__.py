"""Persistent cache for heat semigroup values."""

from tracecalc.cache.store import CACHE_VERSION, SemigroupCache

__all__ = ["CACHE_VERSION", "SemigroupCache"]
