"""File formats.

* Configuration: ``{"d": 2, "m": 5, "A": [[...], [...]]}``; entries are
  integers or ``"p/q"`` strings.
* Dual tuple: ``{"V": [[...], ...], "m": 5}``.
* Point: ``{"re": [...], "im": [...]}`` with optional ``"threshold"``; a
  bare list of reals is accepted too.
* Complex: ``{"m": 5, "maximal_faces": [[1, 3], ...]}``.

Vertex and coordinate indices are 1-based in every document.  Floats are
written with 17 significant digits so identical runs give identical bytes.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from .configuration import AmbientPoint, Configuration
from .rational import RationalMatrix, as_fraction, format_fraction

__all__ = [
    "dumps",
    "load_json",
    "config_to_json",
    "config_from_json",
    "matrix_to_json",
    "matrix_from_json",
    "point_to_json",
    "point_from_json",
    "one_based",
]


def _float(v: float) -> str:
    if math.isnan(v) or math.isinf(v):
        return json.dumps(str(v))
    s = format(v, ".17g")
    if s.lstrip("-").isdigit():
        s += ".0"
    return s


def _encode(obj: Any, indent: int | None, level: int) -> str:
    pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
    end = "" if indent is None else "\n" + " " * (indent * level)
    colon = ":" if indent is None else ": "
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    if isinstance(obj, Fraction):
        return json.dumps(format_fraction(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist(), indent, level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [pad + json.dumps(str(k), ensure_ascii=False) + colon + _encode(v, indent, level + 1)
                 for k, v in obj.items()]
        return "{" + ",".join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        flat = all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj)
        if indent is None:
            return "[" + ",".join(_encode(v, None, 0) for v in obj) + "]"
        if flat:
            return "[" + ", ".join(_encode(v, None, 0) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[" + ",".join(items) + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj: Any, indent: int | None = 2) -> str:
    """Deterministic JSON; ``indent=None`` gives one line (for JSON-lines)."""
    return _encode(obj, indent, 0)


def load_json(path) -> Any:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def one_based(indices) -> list[int] | None:
    return None if indices is None else [int(i) + 1 for i in indices]


def config_to_json(A: Configuration) -> dict:
    return {"d": A.d, "m": A.m, "A": [[_entry(v) for v in row] for row in A.rows]}


def _entry(v: Fraction):
    v = as_fraction(v)
    return v.numerator if v.denominator == 1 else format_fraction(v)


def config_from_json(doc: dict) -> Configuration:
    rows = doc["A"]
    m = doc.get("m")
    A = Configuration.from_rows(rows, m)
    if "d" in doc and doc["d"] != A.d:
        raise ValueError(f"declared d={doc['d']} but A has {A.d} rows")
    return A


def matrix_to_json(V: RationalMatrix) -> dict:
    return {"m": V.cols, "V": [[_entry(v) for v in row] for row in V.to_rows()]}


def matrix_from_json(doc: dict) -> RationalMatrix:
    rows = [[as_fraction(v) for v in r] for r in doc["V"]]
    m = doc.get("m", len(rows[0]) if rows else None)
    if m is None:
        raise ValueError("m is required for an empty V")
    return RationalMatrix.from_rows(rows, m) if rows else RationalMatrix(0, m, ())


def point_to_json(z) -> dict:
    c = z.coords if isinstance(z, AmbientPoint) else np.asarray(z, dtype=complex)
    out = {"re": [float(v) for v in c.real], "im": [float(v) for v in c.imag]}
    if isinstance(z, AmbientPoint) and z.threshold:
        out["threshold"] = float(z.threshold)
    return out


def point_from_json(doc) -> AmbientPoint:
    if isinstance(doc, list):
        return AmbientPoint(np.asarray(doc, dtype=float).astype(complex))
    if not isinstance(doc, dict) or "re" not in doc:
        raise ValueError("a point document needs an 're' array (and optionally 'im')")
    re = np.asarray(doc["re"], dtype=float)
    im = np.asarray(doc.get("im", [0.0] * len(re)), dtype=float)
    if re.shape != im.shape:
        raise ValueError("re and im have different lengths")
    return AmbientPoint(re + 1j * im, float(doc.get("threshold", 0.0)))
