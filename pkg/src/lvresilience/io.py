"""Lossless flat-file output: CSV with 17 significant digits, JSON with shortest round-trip floats."""
from __future__ import annotations

import csv
import io
import json
import math
import os
from pathlib import Path

import numpy as np


def fmt_number(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return "%.17g" % v
    return str(v)


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt_number(v) for v in row])
    return buf.getvalue()


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        obj = float(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        # JSON has no inf/nan
        return None
    return obj


def json_text(obj) -> str:
    # repr of a Python float is already the shortest string that round-trips
    return json.dumps(_plain(obj), indent=2, sort_keys=False, allow_nan=False) + "\n"


def write_text(path, text: str) -> Path:
    p = Path(path)
    if p.parent and not p.parent.exists():
        p.parent.mkdir(parents=True, exist_ok=True)
    with open(p, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return p


def write_csv(path, header, rows) -> Path:
    return write_text(path, csv_text(header, rows))


def write_json(path, obj) -> Path:
    return write_text(path, json_text(obj))


def output_path(name: str, directory=None) -> Path:
    """Resolve ``name`` against ``directory`` or ``$LVRES_OUTPUT_DIR`` (default: cwd)."""
    p = Path(name)
    if p.is_absolute():
        return p
    base = directory or os.environ.get("LVRES_OUTPUT_DIR") or "."
    return Path(base) / p
