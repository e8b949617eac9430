from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

PRICES_SCHEMA = ("tick", "price", "fundamental", "demand_noise", "demand_tech",
                 "demand_fund", "active_noise")
RETURNS_SCHEMA = ("t", "log_return")
ACF_SCHEMA = ("lag", "acf_signed", "acf_abs")
HIST_SCHEMA = ("bin_center", "density")

_CHUNK = 200_000


def _fmt_column(col: np.ndarray) -> np.ndarray:
    if np.issubdtype(col.dtype, np.integer):
        return col.astype(str)
    return np.char.mod("%.17g", col)


def emit_csv(columns, schema, path) -> Path:
    """Write equal-length columns under a header row.

    Integer columns are written as integers and floats with 17 significant
    digits, so every value reads back exactly.
    """
    columns = [np.asarray(c) for c in columns]
    if len(columns) != len(schema):
        raise ValueError(f"{len(columns)} columns for a {len(schema)}-column schema")
    n = len(columns[0]) if columns else 0
    if any(len(c) != n for c in columns):
        raise ValueError("columns differ in length")
    path = Path(path)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(schema) + "\n")
        for start in range(0, n, _CHUNK):
            parts = [_fmt_column(c[start:start + _CHUNK]) for c in columns]
            rows = parts[0]
            for p in parts[1:]:
                rows = np.char.add(np.char.add(rows, ","), p)
            if len(rows):
                fh.write("\n".join(rows.tolist()) + "\n")
    return path


def read_csv_column(path, column: str | None = None) -> np.ndarray:
    """Load one numeric column; defaults to the last column."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        idx = len(header) - 1 if column is None else header.index(column)
        return np.array([float(row[idx]) for row in reader if row])


def _clean(obj):
    if isinstance(obj, float):
        return None if not math.isfinite(obj) else obj
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        return _clean(obj.item())
    return obj


def write_json(data: dict, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(_clean(data), indent=2, sort_keys=True) + "\n")
    return path
