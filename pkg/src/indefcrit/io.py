"""JSON / CSV persistence.

JSON floats use Python's shortest round-trip repr (at most 17 significant
digits), so stored arrays reload bit-exactly.  Human CSV tables use 12
significant digits and carry no timestamps, which keeps them byte-stable
across reruns.
"""

from __future__ import annotations

import csv
import datetime as _dt
import json
import math
import os
import platform

import numpy as np

from . import __version__

__all__ = ["FORMAT_VERSION", "to_jsonable", "write_json", "read_json", "write_csv", "fmt",
           "write_solution", "load_solution"]

FORMAT_VERSION = 1


def to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.floating,)):
        obj = float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    return obj


def write_json(path, obj):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_jsonable(obj), fh, indent=1, sort_keys=True)
        fh.write("\n")


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.12g}"
    return str(x)


def write_csv(path, header, rows):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(x) for x in row])


def write_solution(path, config, split, report, oracle_refs=None):
    """Solution file: config echo, split metadata, coefficients and diagnostics."""
    u, v = split.unpack(report.z)
    payload = {
        "format_version": FORMAT_VERSION,
        "config": config.to_dict(),
        "split": split.metadata(),
        "k": report.k,
        "status": report.status,
        "u": u,
        "v": v,
        "phi": report.level,
        "cerami": report.cerami,
        "grad_norm": report.grad_norm,
        "residuals": list(report.residuals),
        "provenance": {
            "seed": config.seed,
            "created": _dt.datetime.now(_dt.timezone.utc).isoformat(),
            "package_version": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "oracle_constants": oracle_refs or {},
        },
    }
    write_json(path, payload)


def load_solution(path):
    d = read_json(path)
    if d.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported solution format {d.get('format_version')!r}")
    d["u"] = np.asarray(d["u"], dtype=float)
    d["v"] = np.asarray(d["v"], dtype=float)
    d["z"] = np.concatenate([d["u"], d["v"]])
    return d
