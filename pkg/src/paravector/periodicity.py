"""Periodicity isomorphisms Cl(W) = Cl(V) (x) Cl(p,q) for two-dimensional V.

The embedding is ``Gamma(v + u) = f1 f2 (x) v + u (x) 1``.  Because ``v`` always
sits next to the even element ``f1 f2``, the tensor product can be taken
ungraded: ``(a (x) b)(c (x) d) = ac (x) bd``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .clifford import (
    Multivector,
    Signature,
    conjugation,
    geometric_product,
    reversion,
)

VARIANTS = {"per1": Signature(1, 1), "per2": Signature(2, 0), "per3": Signature(0, 2)}
TOL = 1e-9


class StructureMismatch(ArithmeticError):
    def __init__(self, msg, pair=None):
        super().__init__(msg)
        self.pair = pair


def _check_v(sig_left: Signature):
    if sig_left not in VARIANTS.values():
        raise ValueError(f"V must have signature (2,0), (1,1) or (0,2), got {sig_left}")


@dataclass(frozen=True, eq=False)
class TensorElement:
    """Element of Cl(V) (x) Cl(p,q); ``coeffs[i, j]`` multiplies ``f_i (x) e_j`` (blade masks)."""

    sig_left: Signature
    sig_right: Signature
    coeffs: np.ndarray

    def __post_init__(self):
        _check_v(self.sig_left)
        c = np.array(self.coeffs, dtype=float).reshape(4, self.sig_right.dim)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, sig_left, sig_right):
        return cls(sig_left, sig_right, np.zeros((4, sig_right.dim)))

    @classmethod
    def pure(cls, left: Multivector, right: Multivector) -> "TensorElement":
        return cls(left.sig, right.sig, np.outer(left.coeffs, right.coeffs))

    def _same(self, o):
        if (self.sig_left, self.sig_right) != (o.sig_left, o.sig_right):
            raise ValueError("tensor factors differ")

    def __add__(self, o):
        self._same(o)
        return TensorElement(self.sig_left, self.sig_right, self.coeffs + o.coeffs)

    def __sub__(self, o):
        self._same(o)
        return TensorElement(self.sig_left, self.sig_right, self.coeffs - o.coeffs)

    def __neg__(self):
        return TensorElement(self.sig_left, self.sig_right, -self.coeffs)

    def __rmul__(self, s):
        return TensorElement(self.sig_left, self.sig_right, float(s) * self.coeffs)

    def __mul__(self, o):
        if not isinstance(o, TensorElement):
            return TensorElement(self.sig_left, self.sig_right, float(o) * self.coeffs)
        self._same(o)
        out = np.zeros_like(self.coeffs)
        # expand both operands over the left blades and multiply factorwise
        left = [Multivector.blade(self.sig_left, i) for i in range(4)]
        for i in range(4):
            ri = Multivector(self.sig_right, self.coeffs[i])
            if ri.max_abs() == 0.0:
                continue
            for k in range(4):
                rk = Multivector(self.sig_right, o.coeffs[k])
                if rk.max_abs() == 0.0:
                    continue
                lk = geometric_product(left[i], left[k])
                out += np.outer(lk.coeffs, geometric_product(ri, rk).coeffs)
        return TensorElement(self.sig_left, self.sig_right, out)

    def map(self, left_fn, right_fn) -> "TensorElement":
        """Apply ``left_fn (x) right_fn`` (both linear on their factor)."""
        out = np.zeros_like(self.coeffs)
        for i in range(4):
            if not self.coeffs[i].any():
                continue
            l = left_fn(Multivector.blade(self.sig_left, i))
            out += np.outer(l.coeffs, right_fn(Multivector(self.sig_right, self.coeffs[i])).coeffs)
        return TensorElement(self.sig_left, self.sig_right, out)

    def scalar_part(self) -> float:
        return float(self.coeffs[0, 0])

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def isclose(self, o, atol=TOL) -> bool:
        return (self - o).max_abs() < atol

    def to_dict(self):
        return {"sig_left": [self.sig_left.p, self.sig_left.q],
                "sig_right": [self.sig_right.p, self.sig_right.q],
                "coeffs": self.coeffs.tolist()}


def _f12(sig_left):
    return Multivector.blade(sig_left, 0b11)


def gamma_embed(v, u, sig_left: Signature, sig_right: Signature | None = None) -> TensorElement:
    """``Gamma(v + u) = f1 f2 (x) v + u (x) 1`` for vectors ``v`` of R^{p,q} and ``u`` of V."""
    _check_v(sig_left)
    if not isinstance(v, Multivector):
        if sig_right is None:
            raise ValueError("sig_right required when v is given as coordinates")
        v = Multivector.vector(sig_right, v)
    if not isinstance(u, Multivector):
        u = Multivector.vector(sig_left, u)
    sig_right = v.sig
    one = Multivector.scalar(sig_right, 1.0)
    return TensorElement.pure(_f12(sig_left), v) + TensorElement.pure(u, one)


@dataclass(frozen=True)
class GammaSquareReport:
    ok: bool
    expected: float
    got: float
    residual: float

    def to_dict(self):
        return {"ok": self.ok, "expected": self.expected, "got": self.got, "residual": self.residual}


def verify_gamma_square(v, u, sig_left, sig_right=None, tol=TOL) -> GammaSquareReport:
    """``Gamma(w)^2`` against ``l1 u1^2 + l2 u2^2 - l1 l2 g(v, v)``."""
    g = gamma_embed(v, u, sig_left, sig_right)
    if not isinstance(v, Multivector):
        v = Multivector.vector(g.sig_right, v)
    if not isinstance(u, Multivector):
        u = Multivector.vector(sig_left, u)
    l1, l2 = sig_left.square(0), sig_left.square(1)
    uc = u.coeffs
    vv = (v * v).scalar_part
    expected = l1 * uc[1] ** 2 + l2 * uc[2] ** 2 - l1 * l2 * vv
    sq = g * g
    target = np.zeros_like(sq.coeffs)
    target[0, 0] = expected
    residual = float(np.max(np.abs(sq.coeffs - target)))
    return GammaSquareReport(residual < tol, float(expected), sq.scalar_part(), residual)


def target_signature(p: int, q: int, variant: str) -> Signature:
    if variant == "per1":
        return Signature(p + 1, q + 1)
    if variant == "per2":
        return Signature(q + 2, p)
    if variant == "per3":
        return Signature(q, p + 2)
    raise ValueError(f"unknown variant {variant!r}")


def _check_pq(p, q):
    if p < 0 or q < 0 or p + q == 0:
        raise ValueError("need p > 0 or q > 0")
    if p + q + 2 > 10:
        raise ValueError("p + q + 2 must not exceed 10")


@dataclass(frozen=True)
class IsoTable:
    """Images of the generators of ``source`` (positive squares first)."""

    source: Signature
    image: tuple
    checked: dict = field(compare=False, default_factory=dict)

    def to_dict(self):
        return {"source": [self.source.p, self.source.q],
                "image": [t.to_dict() for t in self.image],
                "checked": self.checked}


def _raw_images(p, q, variant):
    sig_left = VARIANTS[variant]
    sig_right = Signature(p, q)
    n = p + q
    imgs = []
    for j in range(n):
        v = np.zeros(n)
        v[j] = 1.0
        imgs.append(gamma_embed(v, np.zeros(2), sig_left, sig_right))
    for j in range(2):
        u = np.zeros(2)
        u[j] = 1.0
        imgs.append(gamma_embed(np.zeros(n), u, sig_left, sig_right))
    return imgs


def build_isomorphism(p: int, q: int, variant: str, tol: float = TOL) -> IsoTable:
    """Generator images for the chosen isomorphism, verified over all generator pairs.

    Besides squares and anticommutators, the 2^(n+2) ordered products of the image
    generators are checked to be linearly independent, so the induced map is onto.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    _check_pq(p, q)
    source = target_signature(p, q, variant)
    imgs = _raw_images(p, q, variant)
    squares = [(g * g).scalar_part() for g in imgs]
    pos = [g for g, s in zip(imgs, squares) if s > 0]
    neg = [g for g, s in zip(imgs, squares) if s < 0]
    if len(pos) != source.p or len(neg) != source.q:
        raise StructureMismatch(f"image squares {squares} do not match {source}")
    image = tuple(pos + neg)
    n = len(image)
    one = TensorElement.pure(Multivector.scalar(image[0].sig_left, 1.0),
                             Multivector.scalar(image[0].sig_right, 1.0))
    worst_sq = worst_ac = 0.0
    for i in range(n):
        r = (image[i] * image[i] - source.square(i) * one).max_abs()
        worst_sq = max(worst_sq, r)
        if r >= tol:
            raise StructureMismatch(f"generator {i} squares wrongly (residual {r:.3e})", (i, i))
        for j in range(i + 1, n):
            r = (image[i] * image[j] + image[j] * image[i]).max_abs()
            worst_ac = max(worst_ac, r)
            if r >= tol:
                raise StructureMismatch(f"generators {i},{j} do not anticommute (residual {r:.3e})", (i, j))
    # products over all blades span the full 4 * 2^(p+q) dimensional space
    rows = []
    for mask in range(1 << n):
        t = one
        for k in range(n):
            if mask >> k & 1:
                t = t * image[k]
        rows.append(t.coeffs.ravel())
    rank = int(np.linalg.matrix_rank(np.array(rows), tol=1e-8))
    if rank != 1 << n:
        raise StructureMismatch(f"image products have rank {rank} < {1 << n}")
    checked = {"squares": n, "anticommutators": n * (n - 1) // 2, "rank": rank,
               "max_square_residual": worst_sq, "max_anticommutator_residual": worst_ac}
    return IsoTable(source, image, checked)


def _alpha(eps):
    return reversion if eps == 1 else conjugation


@dataclass(frozen=True)
class TransportReport:
    ok: bool
    epsilon: int
    generator_residuals: list
    antiautomorphism_residual: float

    def to_dict(self):
        return {"ok": self.ok, "epsilon": self.epsilon,
                "generator_residuals": self.generator_residuals,
                "antiautomorphism_residual": self.antiautomorphism_residual}


def verify_involution_transport(p: int, q: int, epsilon: int, variant: str = "per1",
                                tol: float = TOL, seed: int = 0) -> TransportReport:
    """``alpha_eps`` on Cl(V) tensored with ``alpha_-eps`` on Cl(p,q) sends each generator ``g`` to ``eps g``.

    ``alpha_1`` is reversion and ``alpha_-1`` conjugation.  The combined map is also
    checked to reverse products of random tensor elements.
    """
    if epsilon not in (1, -1):
        raise ValueError("epsilon must be +1 or -1")
    _check_pq(p, q)
    gens = _raw_images(p, q, variant)
    left, right = _alpha(epsilon), _alpha(-epsilon)
    resid = [float((g.map(left, right) - epsilon * g).max_abs()) for g in gens]
    rng = np.random.default_rng(seed)
    sl, sr = gens[0].sig_left, gens[0].sig_right
    anti = 0.0
    for _ in range(3):
        x = TensorElement(sl, sr, rng.normal(size=(4, sr.dim)))
        y = TensorElement(sl, sr, rng.normal(size=(4, sr.dim)))
        lhs = (x * y).map(left, right)
        rhs = y.map(left, right) * x.map(left, right)
        anti = max(anti, (lhs - rhs).max_abs())
    ok = max(resid) < tol and anti < tol * 100
    return TransportReport(ok, epsilon, resid, float(anti))
