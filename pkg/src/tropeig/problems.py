"""Problem files: versioned JSON documents describing one instance.

Every document has ``schema_version`` (currently 1) and ``kind``:

* ``trop_poly``: ``{"coeffs": [13, 6, 5, 0]}``, low to high, ``"inf"`` for +inf.
* ``trop_matrix_poly``: ``{"n": 3, "d": 1, "coeffs": [A_0, A_1]}``.
* ``asymptotic_poly``: ``{"pairs": [[p_0, P_0], ..., [p_n, P_n]]}``.
* ``asymptotic_matrix_poly``: ``{"n", "d"}`` with either dense ``"a"`` and
  ``"A"`` stacks or a sparse ``"entries"`` list of ``{"k", "i", "j", "a", "A"}``;
  omitted sparse entries are ``(a, A) = (0, +inf)``.

Complex numbers are written as numbers or ``[re, im]``; indices are 0-based.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .complex_numerics import as_complex
from .errors import ParseError
from .puiseux_asymptotics import AsymptoticMatrixPoly, AsymptoticPoly
from .serialization import encode
from .tropical_core import INF, TropPoly, to_scalar
from .tropical_spectra import TropMatrixPoly

SCHEMA_VERSION = 1
KINDS = ("trop_poly", "trop_matrix_poly", "asymptotic_poly", "asymptotic_matrix_poly")


def _require(doc: dict, key: str):
    if key not in doc:
        raise ParseError(f"missing field {key!r}")
    return doc[key]


def _stack(doc: dict, key: str, n: int, d: int, conv) -> np.ndarray:
    raw = _require(doc, key)
    try:
        arr = [[[conv(x) for x in row] for row in mat] for mat in raw]
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad entry in {key!r}: {exc}") from exc
    if len(arr) != d + 1 or any(len(m) != n or any(len(r) != n for r in m) for m in arr):
        raise ParseError(f"{key!r} must hold {d + 1} matrices of size {n}x{n}")
    return np.array(arr)


def _dims(doc: dict) -> tuple[int, int]:
    try:
        n, d = int(_require(doc, "n")), int(_require(doc, "d"))
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad dimensions: {exc}") from exc
    if n < 1 or d < 0:
        raise ParseError("need n >= 1 and d >= 0")
    return n, d


def parse_problem(doc: dict):
    """Return ``(kind, instance)`` for a decoded problem document."""
    if not isinstance(doc, dict):
        raise ParseError("problem file must hold a JSON object")
    version = doc.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {version!r}")
    kind = _require(doc, "kind")
    if kind not in KINDS:
        raise ParseError(f"unknown kind {kind!r}; expected one of {KINDS}")
    try:
        if kind == "trop_poly":
            return kind, TropPoly(_require(doc, "coeffs"))
        if kind == "asymptotic_poly":
            return kind, AsymptoticPoly.from_pairs(_require(doc, "pairs"))
        n, d = _dims(doc)
        if kind == "trop_matrix_poly":
            return kind, TropMatrixPoly(_stack(doc, "coeffs", n, d, to_scalar))
        if "entries" in doc:
            a = np.zeros((d + 1, n, n), dtype=complex)
            A = np.full((d + 1, n, n), INF)
            for e in doc["entries"]:
                k, i, j = int(e.get("k", 0)), int(_require(e, "i")), int(_require(e, "j"))
                if not (0 <= k <= d and 0 <= i < n and 0 <= j < n):
                    raise ParseError(f"entry index out of range: {e}")
                a[k, i, j] = as_complex(e.get("a", 0))
                A[k, i, j] = to_scalar(e.get("A", "inf"))
        else:
            a = _stack(doc, "a", n, d, as_complex)
            A = _stack(doc, "A", n, d, to_scalar)
        return kind, AsymptoticMatrixPoly(a, A)
    except ParseError:
        raise
    except (TypeError, ValueError, KeyError) as exc:
        raise ParseError(str(exc)) from exc


def load_problem(path) -> tuple[str, object]:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from exc
    return parse_problem(doc)


def problem_document(inst) -> dict:
    """Inverse of ``parse_problem`` for the instance types above."""
    if isinstance(inst, TropPoly):
        return {"schema_version": SCHEMA_VERSION, "kind": "trop_poly", "coeffs": encode(inst.coeffs)}
    if isinstance(inst, TropMatrixPoly):
        return {"schema_version": SCHEMA_VERSION, "kind": "trop_matrix_poly", "n": inst.n, "d": inst.d, "coeffs": encode(inst.coeffs)}
    if isinstance(inst, AsymptoticPoly):
        return {"schema_version": SCHEMA_VERSION, "kind": "asymptotic_poly", "pairs": encode(list(zip(inst.p, inst.P)))}
    if isinstance(inst, AsymptoticMatrixPoly):
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "asymptotic_matrix_poly",
            "n": inst.n,
            "d": inst.d,
            "a": encode(inst.a),
            "A": encode(inst.A),
        }
    raise TypeError(f"no problem document for {type(inst).__name__}")
