"""JSON encodings of matrices and vectors.

A matrix is ``{"dim": n, "entries": [...]}`` with ``n*n`` entries in row-major
order.  Each entry is a plain number or a ``[re, im]`` pair.  A nested list
of rows is accepted on input as a convenience.  Vectors are lists of the same
entry kind.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import ParseError
from .linalg import as_matrix


def _parse_scalar(x):
    if isinstance(x, bool):
        raise ParseError(f"booleans are not numbers: {x!r}")
    if isinstance(x, (int, float)):
        return complex(float(x), 0.0)
    if isinstance(x, (list, tuple)) and len(x) == 2 and all(
            isinstance(p, (int, float)) and not isinstance(p, bool) for p in x):
        return complex(float(x[0]), float(x[1]))
    raise ParseError(f"cannot read {x!r} as a scalar")


def _encode_scalar(z, real):
    if real:
        return float(z.real)
    return [float(z.real), float(z.imag)]


def _finish(values):
    arr = np.array(values, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise ParseError("non-finite entry")
    return arr.real.copy() if not np.any(arr.imag) else arr


def vector_from_json(obj) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise ParseError("a vector must be a non-empty list")
    return _finish([_parse_scalar(x) for x in obj])


def vector_to_json(v) -> list:
    v = np.asarray(v)
    real = not np.iscomplexobj(v)
    return [_encode_scalar(complex(x), real) for x in v.ravel()]


def matrix_from_json(obj) -> np.ndarray:
    if isinstance(obj, list):
        obj = {"dim": len(obj), "entries": obj}
    if not isinstance(obj, dict) or "entries" not in obj:
        raise ParseError("matrix JSON needs an 'entries' field")
    entries = obj["entries"]
    if not isinstance(entries, list) or not entries:
        raise ParseError("'entries' must be a non-empty list")
    n = obj.get("dim", len(entries))
    if not isinstance(n, int) or isinstance(n, bool) or n <= 0:
        raise ParseError(f"bad dim {n!r}")
    # flat row-major list of n*n entries; n*n == n only for n == 1
    if len(entries) == n * n and not (n == 1 and isinstance(entries[0], list)
                                      and len(entries[0]) == 1):
        flat = entries
    elif len(entries) == n and all(isinstance(r, list) and len(r) == n for r in entries):
        flat = [x for row in entries for x in row]
    else:
        raise ParseError(f"expected {n}*{n} entries, got {len(entries)}")
    M = _finish([_parse_scalar(x) for x in flat]).reshape(n, n)
    return as_matrix(M)


def matrix_to_json(M) -> dict:
    M = np.asarray(M)
    n = M.shape[0]
    real = not np.iscomplexobj(M)
    return {"dim": int(n), "entries": [_encode_scalar(complex(x), real) for x in M.ravel()]}


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def load_matrix(path) -> np.ndarray:
    return matrix_from_json(load_json(path))


def save_matrix(path, M):
    with open(path, "w") as fh:
        json.dump(matrix_to_json(M), fh)


def jsonable(obj):
    """Recursively convert numpy values (and complex numbers) to JSON types."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if obj.ndim == 2 and obj.shape[0] == obj.shape[1]:
            return matrix_to_json(obj)
        return jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        return float(z.real) if z.imag == 0 else [float(z.real), float(z.imag)]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj
