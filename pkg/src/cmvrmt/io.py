"""Serialization of clouds, matrices and reports.

Floats are written with 17 significant digits so every double round-trips
exactly. Non-finite floats are written as the strings "inf", "-inf", "nan".
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
from pathlib import Path

import numpy as np

from .errors import DimensionError
from .spectra import EigenCloud

__all__ = [
    "fmt_float",
    "dumps_json",
    "clouds_to_csv",
    "clouds_to_json",
    "clouds_from_csv",
    "clouds_from_json",
    "matrix_to_json",
    "matrix_from_json",
    "load_matrix",
    "load_config",
]


def fmt_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _encode(obj, out: list, indent: int | None, level: int):
    nl = "" if indent is None else "\n" + " " * (indent * (level + 1))
    end = "" if indent is None else "\n" + " " * (indent * level)
    if isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif obj is None:
        out.append("null")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        s = fmt_float(obj)
        out.append(s if s not in ("inf", "-inf", "nan") else json.dumps(s))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            out.append(("," if i else "") + nl + json.dumps(str(k)) + ": ")
            _encode(v, out, indent, level + 1)
        out.append(end + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            out.append("[]")
            return
        out.append("[")
        for i, v in enumerate(items):
            out.append(("," if i else "") + nl)
            _encode(v, out, indent, level + 1)
        out.append(end + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_json(obj, indent: int | None = None) -> str:
    """JSON text with 17-significant-digit floats."""
    out: list[str] = []
    _encode(obj, out, indent, 0)
    return "".join(out)


def _pairs(values) -> list:
    v = np.asarray(values, dtype=complex).ravel()
    return [[float(z.real), float(z.imag)] for z in v]


def clouds_to_csv(clouds) -> str:
    buf = _io.StringIO()
    buf.write("rep,re,im\n")
    for i, c in enumerate(clouds):
        rep = c.provenance.get("rep", i)
        for z in c.values:
            buf.write(f"{rep},{fmt_float(z.real)},{fmt_float(z.imag)}\n")
    return buf.getvalue()


def clouds_from_csv(text: str) -> list[EigenCloud]:
    rows = list(csv.DictReader(_io.StringIO(text)))
    if rows and set(rows[0]) != {"rep", "re", "im"}:
        raise ValueError("expected columns rep,re,im")
    by_rep: dict[int, list] = {}
    for r in rows:
        by_rep.setdefault(int(r["rep"]), []).append(complex(float(r["re"]), float(r["im"])))
    return [EigenCloud(np.array(v), provenance={"rep": k}) for k, v in by_rep.items()]


def clouds_to_json(clouds, header: dict | None = None) -> str:
    body = []
    for i, c in enumerate(clouds):
        entry = {"rep": c.provenance.get("rep", i), "values": _pairs(c.values)}
        if c.stratum is not None:
            entry["stratum"] = list(c.stratum)
        body.append(entry)
    return dumps_json({"header": header or {}, "clouds": body}, indent=1)


def clouds_from_json(text: str) -> tuple[dict, list[EigenCloud]]:
    doc = json.loads(text)
    clouds = []
    for entry in doc["clouds"]:
        vals = np.array([complex(re, im) for re, im in entry["values"]])
        stratum = tuple(entry["stratum"]) if "stratum" in entry else None
        clouds.append(EigenCloud(vals, stratum, {"rep": entry["rep"]}))
    return doc.get("header", {}), clouds


def matrix_to_json(M) -> str:
    """``{"shape": [r, c], "data": [[re, im], ...]}`` in row-major order."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        raise DimensionError("matrix must be two-dimensional")
    return dumps_json({"shape": list(M.shape), "data": _pairs(M.ravel())})


def matrix_from_json(text: str) -> np.ndarray:
    doc = json.loads(text)
    shape = tuple(doc["shape"])
    data = doc["data"]
    if len(shape) != 2 or len(data) != shape[0] * shape[1]:
        raise DimensionError("data length does not match shape")
    vals = np.array([complex(float(re), float(im)) for re, im in data])
    return vals.reshape(shape)


def load_matrix(path) -> np.ndarray:
    """Read a matrix from ``.npy`` or from the JSON matrix schema."""
    path = Path(path)
    if path.suffix == ".npy":
        return np.asarray(np.load(path, allow_pickle=False), dtype=complex)
    return matrix_from_json(path.read_text())


def load_config(path) -> dict:
    """Read a TOML or JSON run configuration into a flat dict."""
    path = Path(path)
    if path.suffix == ".toml":
        try:
            import tomllib
        except ModuleNotFoundError:  # Python < 3.11
            import tomli as tomllib
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    else:
        doc = json.loads(path.read_text())
    if not isinstance(doc, dict):
        raise ValueError("config must be a table/object")
    return {str(k).replace("-", "_"): v for k, v in doc.items()}
