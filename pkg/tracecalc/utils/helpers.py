"""Filesystem and naming helpers."""

import re
from datetime import datetime
from pathlib import Path

_UNSAFE = re.compile(r'[<>:"/\\|?*\s]+')


def ensure_dir(path: Path) -> Path:
    path.mkdir(parents=True, exist_ok=True)
    return path


def timestamp() -> str:
    """Wall-clock start time recorded in run manifests."""
    return datetime.now().isoformat(timespec="seconds")


def safe_filename(name: str) -> str:
    """Collapse path separators and whitespace so ``name`` is one file component."""
    return _UNSAFE.sub("_", name.strip()).strip("_") or "run"


def run_stem(label: str) -> str:
    """Output stem when no ``--out`` is given, e.g. ``mc-deviation-gl-20261019T142501``."""
    return safe_filename(f"{label}-{datetime.now():%Y%m%dT%H%M%S}")
