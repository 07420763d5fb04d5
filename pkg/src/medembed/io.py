"""File formats: delimited numeric tables, ensemble manifests, reports.

Embeddings and matrices are plain text, one row per line, values
separated by whitespace or commas, no header. Floats are written with 17
significant digits so a write/read cycle is bit-exact and identical runs
produce byte-identical files.

A manifest is a JSON object listing the ensemble members:

    {"entries": [{"path": "run0.txt", "tag": "seed=0"}, ...], "n": 50, "p": 2}

Entries may also be bare path strings. Relative paths resolve against the
manifest's own directory. "n" and "p" are optional declared shapes that
are checked against the loaded files.

Reports are "name = value" lines with fixed field names, one per line.
"""

from __future__ import annotations

import glob as _glob
import json
import os
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyEnsemble,
    InconsistentWidth,
    NonFiniteValue,
    ParseError,
)
from .geometry import as_embedding, validate_distance_matrix


def fmt(value) -> str:
    """Deterministic text form: floats at 17 significant digits."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    if isinstance(value, np.ndarray):
        value = value.tolist()
    if isinstance(value, (list, tuple)):
        return " ".join(fmt(v) for v in value)
    raise TypeError(f"cannot format {type(value).__name__} for a report")


def write_table(path, array) -> None:
    arr = np.asarray(array, dtype=float)
    lines = [" ".join(f"{v:.17g}" for v in row) for row in arr]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_table(path) -> np.ndarray:
    rows = []
    width = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            tokens = stripped.replace(",", " ").split()
            try:
                row = [float(t) for t in tokens]
            except ValueError as e:
                raise ParseError(f"{path}: line {lineno}: {e}") from None
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise InconsistentWidth(
                    f"{path}: line {lineno}: expected {width} values, got {len(row)}"
                )
            if not all(np.isfinite(row)):
                raise NonFiniteValue(f"{path}: line {lineno}: non-finite value")
            rows.append(row)
    if not rows:
        raise ParseError(f"{path}: no data rows")
    return np.array(rows, dtype=float)


def load_embedding_file(path) -> np.ndarray:
    """Read a points file: rows are points, columns are coordinates."""
    table = _parse_table(path)
    try:
        return as_embedding(table)
    except ValueError as e:
        raise ParseError(f"{path}: {e}") from None


def load_matrix_file(path) -> np.ndarray:
    """Read a full square distance matrix and validate it."""
    table = _parse_table(path)
    try:
        return validate_distance_matrix(table)
    except DimensionMismatch as e:
        raise DimensionMismatch(f"{path}: {e}") from None
    except ValueError as e:
        raise ParseError(f"{path}: {e}") from None


@dataclass(frozen=True)
class Manifest:
    entries: tuple[tuple[str, str], ...]  # (path, tag) pairs
    declared_n: int | None = None
    declared_p: int | None = None

    def __post_init__(self):
        if not self.entries:
            raise EmptyEnsemble("manifest has no entries")


def load_manifest(path) -> Manifest:
    base = os.path.dirname(os.path.abspath(path))
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: not valid JSON: {e}") from None
    if not isinstance(doc, dict) or "entries" not in doc:
        raise ParseError(f"{path}: expected an object with an 'entries' list")
    entries = []
    for i, item in enumerate(doc["entries"]):
        if isinstance(item, str):
            entry_path, tag = item, ""
        elif isinstance(item, dict) and "path" in item:
            entry_path, tag = item["path"], str(item.get("tag", ""))
        else:
            raise ParseError(f"{path}: entry {i} must be a path string or an object with 'path'")
        if not os.path.isabs(entry_path):
            entry_path = os.path.join(base, entry_path)
        if not os.path.exists(entry_path):
            raise FileNotFoundError(f"{path}: entry {i}: no such file: {entry_path}")
        entries.append((entry_path, tag))
    return Manifest(
        entries=tuple(entries),
        declared_n=_optional_int(doc, "n", path),
        declared_p=_optional_int(doc, "p", path),
    )


def manifest_from_glob(pattern) -> Manifest:
    paths = sorted(_glob.glob(pattern))
    if not paths:
        raise EmptyEnsemble(f"glob {pattern!r} matched no files")
    entries = tuple((p, os.path.splitext(os.path.basename(p))[0]) for p in paths)
    return Manifest(entries=entries)


def write_manifest(path, entries, n=None, p=None) -> None:
    """Entries are (path, tag) pairs; paths are stored as given."""
    doc = {"entries": [{"path": ep, "tag": tag} for ep, tag in entries]}
    if n is not None:
        doc["n"] = int(n)
    if p is not None:
        doc["p"] = int(p)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def load_ensemble(manifest: Manifest):
    """Load every entry; returns (embeddings, tags).

    All members must share the point count, and the declared n/p are
    enforced when present. Errors carry the offending entry's path.
    """
    embeddings = []
    tags = []
    n_seen = None
    for entry_path, tag in manifest.entries:
        emb = load_embedding_file(entry_path)
        n, p = emb.shape
        if manifest.declared_n is not None and n != manifest.declared_n:
            raise DimensionMismatch(
                f"{entry_path}: has {n} points, manifest declares {manifest.declared_n}"
            )
        if manifest.declared_p is not None and p != manifest.declared_p:
            raise DimensionMismatch(
                f"{entry_path}: has {p} coordinates, manifest declares {manifest.declared_p}"
            )
        if n_seen is None:
            n_seen = n
        elif n != n_seen:
            raise DimensionMismatch(
                f"{entry_path}: has {n} points, earlier entries have {n_seen}"
            )
        embeddings.append(emb)
        tags.append(tag)
    return embeddings, tags


def format_report(fields) -> str:
    """Render ordered (name, value) pairs as 'name = value' lines."""
    items = fields.items() if isinstance(fields, dict) else fields
    return "".join(f"{name} = {fmt(value)}\n" for name, value in items)


def _optional_int(doc, key, path):
    if key not in doc or doc[key] is None:
        return None
    value = doc[key]
    if not isinstance(value, int) or isinstance(value, bool):
        raise ParseError(f"{path}: '{key}' must be an integer")
    return value


__all__ = [
    "Manifest",
    "fmt",
    "format_report",
    "load_embedding_file",
    "load_ensemble",
    "load_manifest",
    "load_matrix_file",
    "manifest_from_glob",
    "write_manifest",
    "write_table",
]
