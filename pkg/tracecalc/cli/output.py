"""Result files: CSV tables, JSON documents and the run manifest beside them."""

import csv
import io
import json
from pathlib import Path
from typing import Any, Iterable, Sequence

from pydantic import BaseModel, Field

from tracecalc import __version__
from tracecalc.utils.helpers import ensure_dir, timestamp

MC_COLUMNS = (
    "experiment", "group", "N", "t", "k", "n_paths", "h",
    "mean_re", "mean_im", "variance", "stderr", "seed",
)


class RunManifest(BaseModel):
    """Everything needed to rerun a command and get the same files."""
    command: str
    flags: dict[str, Any] = Field(default_factory=dict)
    seed: int | None = None
    version: str = __version__
    started_at: str = Field(default_factory=timestamp)
    wall_time: float = 0.0
    outputs: list[str] = Field(default_factory=list)


def format_number(x: float) -> str:
    """Fixed CSV number format: 17 significant digits round-trip a double."""
    return f"{x:.17g}"


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return format_number(value)
    return str(value)


def render_csv(columns: Sequence[str], rows: Iterable[dict[str, Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c, "")) for c in columns])
    return buffer.getvalue()


def write_csv(path: Path, columns: Sequence[str], rows: Iterable[dict[str, Any]]) -> Path:
    ensure_dir(path.parent)
    path.write_text(render_csv(columns, rows), encoding="utf-8")
    return path


def write_json(path: Path, data: Any) -> Path:
    ensure_dir(path.parent)
    path.write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
    return path


def manifest_path(out: Path) -> Path:
    return out.parent / f"{out.stem}.manifest.json"


def write_manifest(out: Path, manifest: RunManifest) -> Path:
    """Write ``<stem>.manifest.json`` next to ``out``."""
    return write_json(manifest_path(out), manifest.model_dump())
