"""Deterministic CSV/JSON writers.

Floats are written with 17 significant digits and keys in insertion order, so
identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math

import numpy as np

SERIES_HEADER = ("t", "re_Aw", "im_Aw", "re_Aw_dot", "im_Aw_dot", "re_weak_energy", "im_weak_energy")


def fmt(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return format(x, ".17g")


def _json_value(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, bool | np.bool_):
        return "true" if obj else "false"
    if isinstance(obj, enum.Enum):
        return json.dumps(obj.value)
    if isinstance(obj, int | np.integer):
        return str(int(obj))
    if isinstance(obj, float | np.floating):
        return fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_json_value(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list | tuple):
        if not obj:
            return "[]"
        items = [pad + _json_value(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps_json(obj, indent: int = 2) -> str:
    return _json_value(obj, indent, 0) + "\n"


def dumps_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) if isinstance(v, float | np.floating) else ("" if v is None else v) for v in row])
    return buf.getvalue()


def read_series_csv(path) -> tuple[np.ndarray, np.ndarray]:
    """(t, A_w) from a CSV with at least the columns t, re_Aw, im_Aw."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = {"t", "re_Aw", "im_Aw"} - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"series CSV lacks columns {sorted(missing)}")
        t, v = [], []
        for lineno, row in enumerate(reader, start=2):
            try:
                t.append(float(row["t"]))
                v.append(complex(float(row["re_Aw"]), float(row["im_Aw"])))
            except (TypeError, ValueError):
                raise ValueError(f"line {lineno}: non-numeric entry") from None
    return np.array(t), np.array(v, dtype=complex)
