"""On-disk cache of heat semigroup values.

File layout::

    {"version": 1, "entries": {"u:3": <SemigroupValue JSON>, "v:2": ...}}

Values are pure functions of their key, so the cache only saves time:
any unreadable or mismatched file is dropped and recomputed in full.
"""

import json
import os
import secrets
from pathlib import Path
from typing import Any

from filelock import FileLock
from loguru import logger

from tracecalc.heat.semigroup import HeatSemigroup, MemoKey
from tracecalc.heat.types import SemigroupValue

CACHE_VERSION = 1
LOCK_TIMEOUT = 10


def encode_key(key: MemoKey) -> str:
    kind, k = key
    return f"{kind}:{k}"


def decode_key(text: str) -> MemoKey:
    kind, _, k = text.partition(":")
    if kind not in ("u", "v") or not k.isdigit() or int(k) < 1:
        raise ValueError(f"invalid cache key {text!r}")
    return kind, int(k)


def _read_json_file(path: Path) -> dict[str, Any] | None:
    try:
        if path.exists():
            return json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, OSError, UnicodeDecodeError) as e:
        logger.warning(f"Error reading cache {path}: {e}")
    return None


def _write_json_file(path: Path, data: dict[str, Any]) -> None:
    """Write with an atomic rename."""
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp_path = path.with_suffix(f".{secrets.token_hex(4)}.tmp")
    tmp_path.write_text(json.dumps(data, indent=1) + "\n", encoding="utf-8")
    os.replace(str(tmp_path), str(path))


class SemigroupCache:
    """JSON store for SemigroupValues keyed by (kind, k)."""

    def __init__(self, path: Path):
        self.path = Path(path).expanduser()
        self._lock = FileLock(str(self.path.with_suffix(".lock")), timeout=LOCK_TIMEOUT)
        self._entries: dict[MemoKey, SemigroupValue] | None = None

    def _parse(self, data: dict[str, Any] | None) -> dict[MemoKey, SemigroupValue]:
        if data is None:
            return {}
        version = data.get("version") if isinstance(data, dict) else None
        if version != CACHE_VERSION:
            logger.warning(
                f"Cache {self.path} has version {version!r}, expected {CACHE_VERSION}; recomputing"
            )
            return {}
        try:
            entries = {}
            for text, value in data.get("entries", {}).items():
                key = decode_key(text)
                entry = SemigroupValue.from_json(value)
                if entry.grades != [key[1]]:
                    raise ValueError(f"entry {text} holds grades {entry.grades}")
                entries[key] = entry
            return entries
        except (KeyError, TypeError, ValueError, AttributeError) as e:
            logger.warning(f"Cache {self.path} is corrupt ({e}); recomputing")
            return {}

    def _load(self) -> dict[MemoKey, SemigroupValue]:
        if self._entries is None:
            with self._lock:
                self._entries = self._parse(_read_json_file(self.path))
            logger.debug(f"cache: loaded {len(self._entries)} entries from {self.path}")
        return self._entries

    def __len__(self) -> int:
        return len(self._load())

    def __contains__(self, key: MemoKey) -> bool:
        return key in self._load()

    def get(self, key: MemoKey) -> SemigroupValue | None:
        return self._load().get(key)

    def entries(self) -> dict[MemoKey, SemigroupValue]:
        return dict(self._load())

    def update(self, entries: dict[MemoKey, SemigroupValue]) -> int:
        """Merge entries into the file. Returns the number of new keys."""
        with self._lock:
            current = self._parse(_read_json_file(self.path))
            added = sum(1 for key in entries if key not in current)
            current.update(entries)
            _write_json_file(self.path, {
                "version": CACHE_VERSION,
                "entries": {encode_key(key): value.to_json() for key, value in sorted(current.items())},
            })
            self._entries = current
        logger.debug(f"cache: wrote {len(current)} entries ({added} new) to {self.path}")
        return added

    def clear(self) -> None:
        with self._lock:
            if self.path.exists():
                self.path.unlink()
            self._entries = {}

    # ── semigroup bridge ────────────────────────────────────────────

    def load_into(self, semigroup: HeatSemigroup) -> int:
        """Seed a semigroup memo from the cache."""
        return semigroup.load(self._load())

    def flush(self, semigroup: HeatSemigroup) -> int:
        """Persist every memo entry the cache does not hold yet."""
        known = self._load()
        fresh = {key: value for key, value in semigroup.export().items() if key not in known}
        if not fresh:
            return 0
        return self.update(fresh)
