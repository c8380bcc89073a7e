"""CSV and JSON formats used by the command line.

* matrices: header row of column names, one vector per row,
* labels: single column with header ``label``,
* manifests and evaluation summaries: JSON.

Floats are written with 17 significant digits so they read back bit-exact.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .exceptions import ParseError

FLOAT_FORMAT = "%.17g"


def bin_header(q: int):
    return [f"bin_{k}" for k in range(q)]


def write_matrix(path, matrix, header=None) -> None:
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    header = header or bin_header(matrix.shape[1])
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in matrix:
            writer.writerow([FLOAT_FORMAT % v for v in row])


def read_matrix(path) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ParseError(f"{path}: empty file")
    header, body = rows[0], [r for r in rows[1:] if r]
    if not body:
        raise ParseError(f"{path}: no data rows")
    width = len(header)
    out = np.empty((len(body), width))
    for i, row in enumerate(body, start=2):
        if len(row) != width:
            raise ParseError(f"{path}:{i}: expected {width} fields, got {len(row)}")
        try:
            out[i - 2] = [float(v) for v in row]
        except ValueError:
            raise ParseError(f"{path}:{i}: non-numeric field") from None
    return out


def write_labels(path, labels) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("label\n")
        for lab in labels:
            fh.write(f"{int(lab)}\n")


def read_labels(path) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows or [c.strip() for c in rows[0]] != ["label"]:
        raise ParseError(f"{path}: expected a single 'label' column")
    if any(len(r) != 1 for r in rows[1:]):
        raise ParseError(f"{path}: expected one field per row")
    try:
        return np.array([int(r[0]) for r in rows[1:]], dtype=int)
    except ValueError:
        raise ParseError(f"{path}: labels must be integers") from None


def write_json(path, payload) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True, default=_jsonable) + "\n")


def _jsonable(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Path):
        return str(obj)
    if hasattr(obj, "value"):
        return obj.value
    raise TypeError(f"cannot serialize {type(obj).__name__}")
