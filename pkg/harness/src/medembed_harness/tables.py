"""Delimited numeric tables, with empty fields standing for missing values.

The embedding consumer reads the same comma-separated layout but rejects
incomplete rows, so files with empty fields stay inside the harness
(between injection and imputation) and everything handed over downstream
is complete.
"""

from __future__ import annotations

import numpy as np


def format_value(v: float) -> str:
    return "" if np.isnan(v) else "%.17g" % v


def write_csv(path, data) -> None:
    data = np.asarray(data, dtype=float)
    if data.ndim != 2:
        raise ValueError(f"expected a 2-d table, got shape {data.shape}")
    with open(path, "w", encoding="utf-8") as fh:
        for row in data:
            fh.write(",".join(format_value(v) for v in row))
            fh.write("\n")


def read_csv(path) -> np.ndarray:
    rows = []
    width = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip("\n")
            if not line.strip():
                continue
            fields = [f.strip() for f in line.split(",")]
            if width is None:
                width = len(fields)
            elif len(fields) != width:
                raise ValueError(
                    f"{path}: line {lineno}: expected {width} values, got {len(fields)}"
                )
            try:
                rows.append([float("nan") if f == "" else float(f) for f in fields])
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: unparseable value") from None
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return np.array(rows, dtype=float)
