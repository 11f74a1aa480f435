"""JSON encodings shared by the command line tools.

Floats are written with ``repr`` (shortest round-trip form) and keys in a fixed
order, so the same value always serialises to the same bytes.
"""
from __future__ import annotations

import json

import numpy as np

from .clifford import Multivector, Signature, blade_name, parse_blade
from .conformal import ClMat2

EMIT_CUTOFF = 1e-15


def dumps(obj) -> str:
    return json.dumps(_plain(obj), sort_keys=False, allow_nan=False)


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return 0.0 if v == 0.0 else v
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    return obj


def mv_to_json(m: Multivector) -> dict:
    terms = {blade_name(mask, m.sig): float(c)
             for mask, c in enumerate(m.coeffs) if abs(c) >= EMIT_CUTOFF}
    return {"p": m.sig.p, "q": m.sig.q, "coeffs": terms}


def mv_from_json(d) -> Multivector:
    try:
        sig = Signature(int(d["p"]), int(d["q"]))
        coeffs = d.get("coeffs", {})
        if not isinstance(coeffs, dict):
            raise TypeError("coeffs must be an object")
        c = np.zeros(sig.dim)
        for key, val in coeffs.items():
            c[parse_blade(key, sig)] += float(val)
    except (KeyError, TypeError, AttributeError) as err:
        raise ValueError(f"malformed multivector: {err}") from None
    return Multivector(sig, c)


def clmat_to_json(m: ClMat2) -> dict:
    return {k: mv_to_json(getattr(m, k)) for k in "abcd"}


def clmat_from_json(d) -> ClMat2:
    try:
        return ClMat2(*(mv_from_json(d[k]) for k in "abcd"))
    except (KeyError, TypeError) as err:
        raise ValueError(f"malformed matrix: {err}") from None


def complex_to_json(z):
    z = np.asarray(z, dtype=complex)
    if z.ndim == 0:
        return [float(z.real), float(z.imag)]
    return [complex_to_json(v) for v in z]


def complex_from_json(obj) -> np.ndarray:
    arr = np.asarray(obj, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] != 2:
        raise ValueError("complex numbers are encoded as [re, im]")
    return arr[..., 0] + 1j * arr[..., 1]


def mat4_from_json(obj) -> np.ndarray:
    m = complex_from_json(obj)
    if m.shape != (4, 4):
        raise ValueError("expected a 4x4 complex matrix")
    return m


def parse_floats(text: str, n: int | None = None) -> np.ndarray:
    try:
        vals = np.array([float(t) for t in text.split(",")])
    except ValueError:
        raise ValueError(f"expected comma separated numbers, got {text!r}") from None
    if n is not None and vals.shape != (n,):
        raise ValueError(f"expected {n} numbers, got {len(vals)}")
    return vals


def parse_complex_list(text: str) -> np.ndarray:
    try:
        return np.array([complex(t.strip().replace("i", "j")) for t in text.split(",")])
    except ValueError:
        raise ValueError(f"cannot parse complex numbers from {text!r}") from None
