"""Dense real Clifford algebra Cl(p, q).

Basis blades are indexed by bitmask: bit ``k`` set means generator
``e_{k+1}`` is present, generators ordered ascending inside the blade.
The first ``p`` generators square to +1, the remaining ``q`` to -1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from numbers import Real

import numpy as np

ATOL = 1e-9
MAX_DIM = 12


class SignatureMismatch(ValueError):
    pass


class ConvergenceError(ArithmeticError):
    def __init__(self, msg, residual):
        super().__init__(f"{msg} (residual {residual:.3e})")
        self.residual = residual


@dataclass(frozen=True)
class Signature:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise ValueError(f"negative signature ({self.p}, {self.q})")
        if self.p + self.q > MAX_DIM:
            raise ValueError(f"p + q must be <= {MAX_DIM}, got {self.p + self.q}")

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def dim(self) -> int:
        return 1 << self.n

    def square(self, k: int) -> int:
        """Metric sign of the 0-based generator ``k``."""
        return 1 if k < self.p else -1

    def __str__(self):
        return f"Cl({self.p},{self.q})"


def grade_of(mask: int) -> int:
    return bin(mask).count("1")


def blade_mul(a: int, b: int, sig: Signature) -> tuple[int, int]:
    """Product of basis blades ``a`` and ``b``: returns ``(sign, mask)``."""
    # transpositions: for each generator in b, count generators of a above it
    swaps = 0
    x = a >> 1
    while x:
        swaps += grade_of(x & b)
        x >>= 1
    sign = -1 if swaps & 1 else 1
    common = a & b
    k = 0
    while common:
        if common & 1 and k >= sig.p:
            sign = -sign
        common >>= 1
        k += 1
    return sign, a ^ b


@lru_cache(maxsize=None)
def _tables(sig: Signature):
    n = sig.dim
    signs = np.empty((n, n))
    idx = np.empty((n, n), dtype=np.intp)
    for i in range(n):
        for j in range(n):
            s, m = blade_mul(i, j, sig)
            signs[i, j] = s
            idx[i, j] = m
    grades = np.array([grade_of(m) for m in range(n)])
    disjoint = (np.arange(n)[:, None] & np.arange(n)[None, :]) == 0
    # rev(e_I) e_I = product of generator squares
    metric = np.array([_blade_norm(m, sig) for m in range(n)])
    for arr in (signs, idx, grades, disjoint, metric):
        arr.setflags(write=False)
    return signs, idx, grades, disjoint, metric


DENSE_MAX_DIM = 64


@lru_cache(maxsize=None)
def _scatter(sig: Signature):
    """Signed scatter matrix with ``a (x) b @ S`` equal to the geometric product."""
    signs, idx, _, _, _ = _tables(sig)
    n = sig.dim
    s = np.zeros((n * n, n))
    s[np.arange(n * n), idx.ravel()] = signs.ravel()
    s.setflags(write=False)
    return s


def _blade_norm(mask: int, sig: Signature) -> float:
    s = 1.0
    k = 0
    while mask:
        if mask & 1:
            s *= sig.square(k)
        mask >>= 1
        k += 1
    return s


def blade_name(mask: int, sig: Signature) -> str:
    if mask == 0:
        return "1"
    idx = [str(k + 1) for k in range(sig.n) if mask >> k & 1]
    sep = "," if sig.n > 9 else ""
    return "e" + sep.join(idx)


def parse_blade(key: str, sig: Signature) -> int:
    if key == "1":
        return 0
    if not key.startswith("e") or len(key) < 2:
        raise ValueError(f"bad blade key {key!r}")
    body = key[1:]
    if "," in body:
        parts = [int(t) for t in body.split(",")]
    elif sig.n > 9:
        parts = [int(body)]
    else:
        parts = [int(ch) for ch in body]
    if any(b <= a for a, b in zip(parts, parts[1:])):
        raise ValueError(f"blade indices must ascend: {key!r}")
    mask = 0
    for k in parts:
        if not 1 <= k <= sig.n:
            raise ValueError(f"generator index {k} out of range for {sig}")
        mask |= 1 << (k - 1)
    return mask


class Multivector:
    """Immutable element of Cl(p, q) stored as a dense coefficient vector."""

    __slots__ = ("sig", "coeffs")
    __array_priority__ = 1000

    def __init__(self, sig: Signature, coeffs):
        arr = np.array(coeffs, dtype=float)
        if arr.shape != (sig.dim,):
            raise ValueError(f"expected {sig.dim} coefficients for {sig}, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "sig", sig)
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def _raw(cls, sig, arr):
        # trusted fast path: arr is a fresh float array of the right length
        out = object.__new__(cls)
        arr.setflags(write=False)
        object.__setattr__(out, "sig", sig)
        object.__setattr__(out, "coeffs", arr)
        return out

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    # construction helpers
    @classmethod
    def zero(cls, sig):
        return cls(sig, np.zeros(sig.dim))

    @classmethod
    def scalar(cls, sig, value=1.0):
        c = np.zeros(sig.dim)
        c[0] = value
        return cls(sig, c)

    @classmethod
    def blade(cls, sig, mask, value=1.0):
        c = np.zeros(sig.dim)
        c[mask] = value
        return cls(sig, c)

    @classmethod
    def vector(cls, sig, components):
        components = np.asarray(components, dtype=float)
        if components.shape != (sig.n,):
            raise ValueError(f"vector needs {sig.n} components")
        c = np.zeros(sig.dim)
        for k, v in enumerate(components):
            c[1 << k] = v
        return cls(sig, c)

    @classmethod
    def from_dict(cls, sig, terms):
        c = np.zeros(sig.dim)
        for key, val in terms.items():
            c[parse_blade(key, sig)] += float(val)
        return cls(sig, c)

    def basis_vector(self, k):
        return Multivector.blade(self.sig, 1 << k)

    # arithmetic
    def _check(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        if other.sig is not self.sig and other.sig != self.sig:
            raise SignatureMismatch(f"{self.sig} vs {other.sig}")
        return other

    def __add__(self, other):
        if isinstance(other, Real):
            return self + Multivector.scalar(self.sig, other)
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Multivector._raw(self.sig, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Real):
            return self - Multivector.scalar(self.sig, other)
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Multivector._raw(self.sig, self.coeffs - other.coeffs)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Multivector._raw(self.sig, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Real):
            return Multivector._raw(self.sig, self.coeffs * float(other))
        if self._check(other) is NotImplemented:
            return NotImplemented
        return geometric_product(self, other)

    def __rmul__(self, other):
        if isinstance(other, Real):
            return Multivector._raw(self.sig, self.coeffs * float(other))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, Real):
            return Multivector(self.sig, self.coeffs / float(other))
        return self * inverse(other)

    def __xor__(self, other):
        return wedge(self, other)

    def __invert__(self):
        return reversion(self)

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.sig == other.sig and bool(np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.sig, self.coeffs.tobytes()))

    def __getitem__(self, key):
        if isinstance(key, str):
            key = parse_blade(key, self.sig)
        return float(self.coeffs[key])

    def grade(self, k):
        return grade_project(self, k)

    @property
    def scalar_part(self) -> float:
        return float(self.coeffs[0])

    def isclose(self, other, atol=ATOL) -> bool:
        if isinstance(other, Real):
            other = Multivector.scalar(self.sig, other)
        self._check(other)
        return bool(np.max(np.abs(self.coeffs - other.coeffs), initial=0.0) < atol)

    def is_scalar(self, atol=ATOL) -> bool:
        return bool(np.max(np.abs(self.coeffs[1:]), initial=0.0) < atol)

    def is_grades(self, grades, atol=ATOL) -> bool:
        _, _, g, _, _ = _tables(self.sig)
        off = ~np.isin(g, list(grades))
        return bool(np.max(np.abs(self.coeffs[off]), initial=0.0) <= atol)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def terms(self, cutoff=1e-15):
        return {blade_name(m, self.sig): float(c)
                for m, c in enumerate(self.coeffs) if abs(c) >= cutoff}

    def __repr__(self):
        t = self.terms(1e-12)
        if not t:
            return f"0 [{self.sig}]"
        body = " + ".join(f"{v:.6g}" + ("" if k == "1" else f"*{k}") for k, v in t.items())
        return f"{body} [{self.sig}]"


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    if a.sig is not b.sig and a.sig != b.sig:
        raise SignatureMismatch(f"{a.sig} vs {b.sig}")
    if a.sig.dim <= DENSE_MAX_DIM:
        return Multivector._raw(a.sig, (a.coeffs[:, None] * b.coeffs).ravel() @ _scatter(a.sig))
    signs, idx, _, _, _ = _tables(a.sig)
    w = np.outer(a.coeffs, b.coeffs) * signs
    return Multivector._raw(a.sig, np.bincount(idx.ravel(), weights=w.ravel(), minlength=a.sig.dim))


def wedge(a: Multivector, b: Multivector) -> Multivector:
    if a.sig != b.sig:
        raise SignatureMismatch(f"{a.sig} vs {b.sig}")
    signs, idx, _, disjoint, _ = _tables(a.sig)
    w = np.outer(a.coeffs, b.coeffs) * signs * disjoint
    return Multivector(a.sig, np.bincount(idx.ravel(), weights=w.ravel(), minlength=a.sig.dim))


def metric_pairing(a: Multivector, b: Multivector) -> float:
    """Extended metric g(a, b): determinant of generator pairings per blade, zero across grades."""
    if a.sig != b.sig:
        raise SignatureMismatch(f"{a.sig} vs {b.sig}")
    metric = _tables(a.sig)[4]
    return float(np.sum(a.coeffs * b.coeffs * metric))


def vector_contraction(v: Multivector, psi: Multivector) -> Multivector:
    """Grade-lowering part ``v . psi`` of the product of a vector with ``psi``."""
    if not v.is_grades((1,), atol=0.0):
        raise ValueError("contraction is defined here for grade-1 left operands only")
    _, _, g, _, _ = _tables(psi.sig)
    out = np.zeros(psi.sig.dim)
    for k in range(1, psi.sig.n + 1):
        part = grade_project(psi, k)
        if part.max_abs() == 0.0:
            continue
        sel = g == k - 1
        out[sel] += (v * part).coeffs[sel]
    return Multivector(psi.sig, out)


def grade_project(a: Multivector, k: int) -> Multivector:
    if not 0 <= k <= a.sig.n:
        raise ValueError(f"grade {k} outside [0, {a.sig.n}]")
    g = _tables(a.sig)[2]
    return Multivector(a.sig, np.where(g == k, a.coeffs, 0.0))


_SIGN_RULES = {
    "rev": lambda k: (-1) ** (k // 2),
    "hat": lambda k: (-1) ** k,
    "bar": lambda k: (-1) ** (k * (k + 1) // 2),
}


@lru_cache(maxsize=None)
def _grade_signs(sig, kind):
    g = _tables(sig)[2]
    out = np.array([_SIGN_RULES[kind](int(k)) for k in g], dtype=float)
    out.setflags(write=False)
    return out


def reversion(a: Multivector) -> Multivector:
    return Multivector._raw(a.sig, a.coeffs * _grade_signs(a.sig, "rev"))


def grade_involution(a: Multivector) -> Multivector:
    return Multivector._raw(a.sig, a.coeffs * _grade_signs(a.sig, "hat"))


def conjugation(a: Multivector) -> Multivector:
    return Multivector._raw(a.sig, a.coeffs * _grade_signs(a.sig, "bar"))


def commutator(a: Multivector, b: Multivector) -> Multivector:
    return a * b - b * a


def left_matrix(a: Multivector) -> np.ndarray:
    """Matrix of ``x -> a x`` acting on coefficient vectors."""
    signs, idx, _, _, _ = _tables(a.sig)
    n = a.sig.dim
    mat = np.zeros((n, n))
    cols = np.arange(n)
    for i in range(n):
        if a.coeffs[i]:
            mat[idx[i], cols] += a.coeffs[i] * signs[i]
    return mat


def inverse(a: Multivector, rcond=1e-12) -> Multivector:
    mat = left_matrix(a)
    if np.linalg.cond(mat) > 1 / rcond:
        raise ZeroDivisionError(f"multivector is not invertible: {a!r}")
    rhs = np.zeros(a.sig.dim)
    rhs[0] = 1.0
    return Multivector(a.sig, np.linalg.solve(mat, rhs))


def norm(a: Multivector) -> float:
    return float(np.linalg.norm(a.coeffs))


def _series_exp(a: Multivector, terms: int, tol: float) -> Multivector:
    total = Multivector.scalar(a.sig, 1.0)
    term = total
    for n in range(1, terms + 1):
        term = (term * a) / n
        total = total + term
        if norm(term) < tol:
            return total
    raise ConvergenceError(f"exp series did not converge in {terms} terms", norm(term))


def mv_exp(a: Multivector, terms: int = 200, tol: float = 1e-14, closed_form: bool = True) -> Multivector:
    """Exponential; uses the cos/cosh closed form when ``a * a`` is a scalar."""
    if not np.all(np.isfinite(a.coeffs)):
        raise ValueError("non-finite coefficients")
    if closed_form:
        if a.is_scalar(0.0):
            return Multivector.scalar(a.sig, math.exp(a.scalar_part))
        sq = a * a
        if sq.is_scalar(atol=1e-13 * max(1.0, sq.max_abs())):
            # a*a scalar with a non-scalar forces a zero scalar part
            s = sq.scalar_part
            if s < 0:
                r = math.sqrt(-s)
                return math.cos(r) + a * (math.sin(r) / r)
            if s > 0:
                r = math.sqrt(s)
                return math.cosh(r) + a * (math.sinh(r) / r)
            return 1.0 + a
    return _series_exp(a, terms, tol)


def random_multivector(sig: Signature, rng: np.random.Generator, grades=None, scale=1.0) -> Multivector:
    c = rng.uniform(-scale, scale, sig.dim)
    if grades is not None:
        g = _tables(sig)[2]
        c = np.where(np.isin(g, list(grades)), c, 0.0)
    return Multivector(sig, c)
