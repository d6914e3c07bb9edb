"""Delimited and JSON output.

Floats are written with ``repr``: the shortest string that round-trips
(at most 17 significant digits), so identical inputs give identical bytes.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np


def format_value(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return "nan" if math.isnan(x) else repr(x)
    return str(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        x = float(x)
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def render_csv(columns, rows, comments=()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    return "\n".join(lines) + "\n"


def render_json(columns, rows, params) -> str:
    payload = {"params": _jsonable(params), "columns": list(columns), "rows": _jsonable([list(r) for r in rows])}
    return json.dumps(payload, indent=1, sort_keys=False) + "\n"


def table_rows(times, curves):
    """Zip a time column with equally long curve columns into rows."""
    cols = [np.asarray(times)] + [np.asarray(c) for c in curves]
    return [tuple(c[n] for c in cols) for n in range(cols[0].size)]


def write_table(out, columns, rows, params, fmt="csv", comments=(), meta=None) -> str:
    """Write the table to ``out`` (or return it when ``out`` is None) plus a metadata sidecar."""
    text = render_csv(columns, rows, comments) if fmt == "csv" else render_json(columns, rows, params)
    if out is None:
        return text
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    if meta is not None:
        Path(str(path) + ".meta.json").write_text(json.dumps(_jsonable(meta), indent=1) + "\n")
    return text
