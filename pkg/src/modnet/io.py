"""JSON formats shared by the library and the command line.

* matrix: ``{"dim": n, "entries": [[re, im], ...]}`` row-major, plus
  ``"antilinear": true`` for antilinear operators;
* subspace: ``{"dim": n, "basis": [[[re, im], ...], ...]}``;
* spectrum: ``{"eigenvalues": [...]}``;
* surrogate: ``[{"mass": m, "weight": w, "generator": {...}}, ...]``;
* model and net specs as documented in the README.
"""

import json
import math

import numpy as np

from .linalg import Antilinear

REPORT_KEYS = ("command", "pass", "result")


class FormatError(ValueError):
    """Malformed input file (maps to exit code 2)."""


def _pair(z):
    return [float(np.real(z)), float(np.imag(z))]


def _complex(v, where):
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    raise FormatError(f"{where}: expected a number or [re, im], got {v!r}")


def vector_to_json(v):
    return [_pair(z) for z in np.asarray(v).ravel()]


def vector_from_json(data, where="vector"):
    if not isinstance(data, list):
        raise FormatError(f"{where}: expected a list")
    return np.array([_complex(x, where) for x in data], dtype=complex)


def matrix_to_json(X):
    if isinstance(X, Antilinear):
        out = matrix_to_json(X.matrix)
        out["antilinear"] = True
        return out
    X = np.asarray(X)
    return {"dim": int(X.shape[0]), "entries": [_pair(z) for z in X.ravel()]}


def matrix_from_json(data):
    """Matrix (or :class:`Antilinear`) from its JSON record."""
    if not isinstance(data, dict) or set(data) - {"dim", "entries", "antilinear"}:
        raise FormatError("matrix record needs exactly 'dim', 'entries' and optionally 'antilinear'")
    n = data.get("dim")
    if not isinstance(n, int) or n <= 0:
        raise FormatError("'dim' must be a positive integer")
    entries = data.get("entries")
    if not isinstance(entries, list) or len(entries) != n * n:
        raise FormatError(f"'entries' must list {n * n} values")
    X = np.array([_complex(z, "entries") for z in entries], dtype=complex).reshape(n, n)
    return Antilinear(X) if data.get("antilinear", False) else X


def subspace_to_json(H):
    B = H.basis
    return {"dim": int(H.n), "basis": [vector_to_json(B[:, k]) for k in range(B.shape[1])]}


def subspace_from_json(data):
    """``(n, list of vectors)``; construction is left to the caller."""
    if not isinstance(data, dict) or set(data) != {"dim", "basis"}:
        raise FormatError("subspace record needs exactly 'dim' and 'basis'")
    n = data["dim"]
    if not isinstance(n, int) or n <= 0:
        raise FormatError("'dim' must be a positive integer")
    vecs = [vector_from_json(v, "basis") for v in data["basis"]]
    if any(len(v) != n for v in vecs):
        raise FormatError(f"every basis vector needs {n} entries")
    return n, vecs


def spectrum_from_json(data):
    if not isinstance(data, dict) or set(data) != {"eigenvalues"}:
        raise FormatError("spectrum record needs exactly 'eigenvalues'")
    ev = data["eigenvalues"]
    if not isinstance(ev, list) or not all(isinstance(x, (int, float)) for x in ev):
        raise FormatError("'eigenvalues' must be a list of numbers")
    return ev


def surrogate_from_json(data):
    if not isinstance(data, list) or not data:
        raise FormatError("surrogate must be a nonempty list of mass points")
    out = []
    for rec in data:
        if not isinstance(rec, dict) or not {"mass", "weight", "generator"} <= set(rec):
            raise FormatError("mass point needs 'mass', 'weight' and 'generator'")
        extra = set(rec) - {"mass", "weight", "generator", "multiplicity"}
        if extra:
            raise FormatError(f"unknown mass point keys: {sorted(extra)}")
        out.append(rec)
    return out


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc.msg})") from None


def to_plain(obj):
    """Recursively convert numpy and complex values into JSON-ready data."""
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, Antilinear):
        return matrix_to_json(obj)
    if isinstance(obj, np.ndarray):
        if obj.ndim == 2 and obj.shape[0] == obj.shape[1]:
            return matrix_to_json(obj)
        return to_plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return _pair(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def dumps(report):
    return json.dumps(to_plain(report), sort_keys=True, indent=2)


def _reject_constant(name):
    raise FormatError(f"non-finite number {name} in report")


def parse_report(text):
    """Validating parser for command reports."""
    obj = json.loads(text, parse_constant=_reject_constant)
    if not isinstance(obj, dict):
        raise FormatError("report must be a JSON object")
    missing = [k for k in REPORT_KEYS if k not in obj]
    if missing:
        raise FormatError(f"report lacks {missing}")
    if not isinstance(obj["pass"], bool):
        raise FormatError("'pass' must be a boolean")
    return obj
