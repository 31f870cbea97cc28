"""Flat-file output: comma-separated tables with exact float round-trip, JSON reports."""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np

FLOAT_FORMAT = "%.16e"  # 17 significant digits


def format_float(v: float) -> str:
    return FLOAT_FORMAT % (float(v) + 0.0)  # no "-0"


def write_csv(header: Sequence[str], rows: Iterable[Sequence[float]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(header))
    width = len(header)
    for row in rows:
        if len(row) != width:
            raise ValueError(f"row has {len(row)} fields, header has {width}")
        w.writerow([format_float(v) for v in row])
    return buf.getvalue()


def read_csv(source: Union[str, Path, io.TextIOBase]) -> Tuple[List[str], np.ndarray]:
    """Parse a table written by :func:`write_csv` into ``(header, float array)``.

    ``source`` may be a path or an open text stream.
    """
    if isinstance(source, (str, Path)):
        with open(source, newline="") as fh:
            return read_csv(fh)
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("empty table: header row is mandatory") from None
    data = [[float(v) for v in row] for row in reader if row]
    for i, row in enumerate(data):
        if len(row) != len(header):
            raise ValueError(f"data row {i} has {len(row)} fields, header has {len(header)}")
    arr = np.array(data, dtype=float).reshape(len(data), len(header))
    return header, arr


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dump_json(obj) -> str:
    """Deterministic JSON: sorted keys, shortest round-trip floats, non-finite as null."""
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"
