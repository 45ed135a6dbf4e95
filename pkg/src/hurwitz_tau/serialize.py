"""JSON helpers: complex numbers travel as ``[re, im]`` pairs."""
from __future__ import annotations

import json
import numbers

import numpy as np

from .errors import InputError


def encode_complex(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def decode_complex(v) -> complex:
    if isinstance(v, numbers.Number):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(t, numbers.Number) for t in v):
        return complex(float(v[0]), float(v[1]))
    raise InputError(f"expected a complex number as [re, im], got {v!r}")


def encode_complex_list(values) -> list[list[float]]:
    return [encode_complex(v) for v in np.asarray(values).ravel()]


def decode_complex_list(values) -> np.ndarray:
    if not isinstance(values, (list, tuple)):
        raise InputError("expected a list of complex numbers")
    return np.array([decode_complex(v) for v in values], dtype=complex)


def encode_complex_matrix(m) -> list[list[list[float]]]:
    m = np.atleast_2d(np.asarray(m))
    return [[encode_complex(v) for v in row] for row in m]


def decode_complex_matrix(rows) -> np.ndarray:
    if not isinstance(rows, (list, tuple)) or not rows:
        raise InputError("expected a nested list for a matrix")
    return np.array([[decode_complex(v) for v in row] for row in rows], dtype=complex)


def to_plain(obj):
    """Recursively convert numpy/complex values into JSON-compatible data."""
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, numbers.Integral):
        return int(obj)
    if isinstance(obj, numbers.Real):
        return float(obj)
    if isinstance(obj, numbers.Complex):
        return encode_complex(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(to_plain(obj), sort_keys=True, indent=2)
