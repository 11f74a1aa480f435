"""Paravector model of compactified Minkowski spacetime.

Points of R^{1,3} are paravectors ``x = x0 + x1 e1 + x2 e2 + x3 e3`` of Cl(3,0),
with ``x * bar(x) = x0**2 - x1**2 - x2**2 - x3**2``.  Cl(4,1) is realised as
2x2 matrices ``[[a, c], [b, d]]`` over Cl(3,0); conformal maps are Vahlen
matrices acting by ``x -> (a x + c)(b x + d)^-1``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .clifford import (
    ATOL,
    Multivector,
    Signature,
    SignatureMismatch,
    _scatter,
    conjugation,
    grade_involution,
    reversion,
)

CL3 = Signature(3, 0)
INFINITY_TOL = 1e-12
NOT_PARAVECTOR_TOL = 1e-6


class PointAtInfinity(ArithmeticError):
    """The map sends the point to the conformal point at infinity."""


class NotParavector(ValueError):
    pass


class PinValidationError(ValueError):
    def __init__(self, report):
        failed = [k for k, v in report.conditions.items() if not v]
        super().__init__(f"Pin conditions failed: {', '.join(failed)}")
        self.report = report


# -- paravectors ----------------------------------------------------------

def paravector(coords) -> Multivector:
    """Paravector of Cl(3,0) from ``(x0, x1, x2, x3)``; passes multivectors through."""
    if isinstance(coords, Multivector):
        if coords.sig != CL3:
            raise SignatureMismatch(f"paravectors live in {CL3}, got {coords.sig}")
        return coords
    x = np.asarray(coords, dtype=float)
    if x.shape != (4,):
        raise ValueError("paravector needs 4 coordinates (x0, x1, x2, x3)")
    c = np.zeros(8)
    c[0], c[1], c[2], c[4] = x
    return Multivector(CL3, c)


def coords(x: Multivector) -> np.ndarray:
    c = x.coeffs
    return np.array([c[0], c[1], c[2], c[4]])


def para_norm(x) -> float:
    """Minkowski norm ``x bar(x)`` of a paravector (a real scalar)."""
    x = paravector(x)
    return (x * conjugation(x)).scalar_part


def is_paravector(m: Multivector, atol=ATOL) -> bool:
    return m.is_grades((0, 1), atol=atol)


def minkowski_pairing(a, b) -> float:
    """Polarised paravector norm: ``<a bar(b)>_0 = a0 b0 - a.b``."""
    return (paravector(a) * conjugation(paravector(b))).scalar_part


# -- quadric (projective) model ------------------------------------------

@dataclass(frozen=True)
class QuadricPoint:
    """Point ``(x, lam, mu)`` of R^{2,4}; on the Klein absolute when ``x bar(x) = lam mu``."""

    x: Multivector
    lam: float
    mu: float

    def __post_init__(self):
        object.__setattr__(self, "x", paravector(self.x))
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "mu", float(self.mu))
        if self.x.max_abs() == 0.0 and self.lam == 0.0 and self.mu == 0.0:
            raise ValueError("(0, 0, 0) is not a projective point")

    def klein_defect(self) -> float:
        return para_norm(self.x) - self.lam * self.mu

    def on_absolute(self, atol=ATOL) -> bool:
        return abs(self.klein_defect()) < atol

    def matrix(self) -> "ClMat2":
        return ClMat2(self.x, Multivector.scalar(CL3, self.mu),
                      Multivector.scalar(CL3, self.lam), conjugation(self.x))


def compactify(x) -> QuadricPoint:
    x = paravector(x)
    if not np.all(np.isfinite(x.coeffs)):
        raise ValueError("non-finite coordinates")
    return QuadricPoint(x, para_norm(x), 1.0)


def project(q: QuadricPoint) -> Multivector:
    if abs(q.mu) <= INFINITY_TOL:
        raise PointAtInfinity(f"mu = {q.mu:.3e}")
    return q.x / q.mu


# -- 2x2 matrices over a Clifford algebra ---------------------------------

@dataclass(frozen=True)
class ClMat2:
    """``[[a, c], [b, d]]`` with entries in one Clifford algebra (Cl(3,0) for Vahlen matrices)."""

    a: Multivector
    b: Multivector
    c: Multivector
    d: Multivector

    def __post_init__(self):
        sigs = {m.sig for m in (self.a, self.b, self.c, self.d)}
        if len(sigs) != 1:
            raise SignatureMismatch(f"entries have mixed signatures {sigs}")

    @property
    def sig(self):
        return self.a.sig

    @classmethod
    def from_scalars(cls, a, c, b, d, sig=CL3):
        """Real matrix given row-major as ``[[a, c], [b, d]]``."""
        s = lambda v: Multivector.scalar(sig, v)
        return cls(s(a), s(b), s(c), s(d))

    @classmethod
    def identity(cls, sig=CL3):
        return cls.from_scalars(1.0, 0.0, 0.0, 1.0, sig)

    def rows(self):
        return ((self.a, self.c), (self.b, self.d))

    def stack(self) -> np.ndarray:
        """Coefficients as a (2, 2, dim) array in row layout."""
        return np.array([[self.a.coeffs, self.c.coeffs], [self.b.coeffs, self.d.coeffs]])

    @classmethod
    def from_stack(cls, sig, arr) -> "ClMat2":
        return cls(a=Multivector(sig, arr[0, 0]), c=Multivector(sig, arr[0, 1]),
                   b=Multivector(sig, arr[1, 0]), d=Multivector(sig, arr[1, 1]))

    def __matmul__(self, o: "ClMat2") -> "ClMat2":
        if o.sig != self.sig:
            raise SignatureMismatch(f"{self.sig} vs {o.sig}")
        sig = self.sig
        pairs = np.einsum("ija,jkb->ikab", self.stack(), o.stack())
        return ClMat2.from_stack(sig, pairs.reshape(2, 2, -1) @ _scatter(sig))

    def __neg__(self):
        return ClMat2(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, o):
        return ClMat2(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def scale(self, s: float) -> "ClMat2":
        return ClMat2(self.a * s, self.b * s, self.c * s, self.d * s)

    def max_abs(self) -> float:
        return max(m.max_abs() for m in (self.a, self.b, self.c, self.d))

    def isclose(self, o, atol=ATOL) -> bool:
        return (self - o).max_abs() < atol


def mat_reversion(m: ClMat2) -> ClMat2:
    """Reversion of Cl(4,1) in the matrix picture: ``[[bar d, bar c], [bar b, bar a]]``."""
    return ClMat2(a=conjugation(m.d), c=conjugation(m.c), b=conjugation(m.b), d=conjugation(m.a))


def mat_conjugation(m: ClMat2) -> ClMat2:
    """Conjugation of Cl(4,1) in the matrix picture: ``[[rev d, -rev c], [-rev b, rev a]]``."""
    return ClMat2(a=reversion(m.d), c=-reversion(m.c), b=-reversion(m.b), d=reversion(m.a))


def paravector_to_matrix(alpha) -> ClMat2:
    """Matrix of ``alpha^5 + alpha^A E_A`` from the six reals ``alpha^0 .. alpha^5``."""
    a0, a1, a2, a3, a4, a5 = (float(v) for v in alpha)
    x = paravector([a5, a1, a2, a3])
    return ClMat2(a=x, c=Multivector.scalar(CL3, a4 - a0),
                  b=Multivector.scalar(CL3, a0 + a4), d=conjugation(x))


# generators of Cl(4,1) as matrices over Cl(3,0); index order matches Signature(4, 1):
# E1, E2, E3, E4 square to +1, E0 to -1
def cl41_generators() -> list[ClMat2]:
    one = Multivector.scalar(CL3, 1.0)
    zero = Multivector.zero(CL3)
    gens = []
    for k in range(3):
        e = Multivector.blade(CL3, 1 << k)
        gens.append(ClMat2(a=e, c=zero, b=zero, d=-e))
    gens.append(ClMat2(a=zero, c=one, b=one, d=zero))      # E4
    gens.append(ClMat2(a=zero, c=-one, b=one, d=zero))     # E0
    return gens


CL41 = Signature(4, 1)


def matrix_from_cl41(mv: Multivector) -> ClMat2:
    """Image of a Cl(4,1) multivector under the generator assignment of :func:`cl41_generators`."""
    if mv.sig != CL41:
        raise SignatureMismatch(f"expected {CL41}")
    gens = cl41_generators()
    total = ClMat2.from_scalars(0.0, 0.0, 0.0, 0.0)
    for mask, coef in enumerate(mv.coeffs):
        if coef == 0.0:
            continue
        blade = ClMat2.identity()
        for k in range(5):
            if mask >> k & 1:
                blade = blade @ gens[k]
        total = ClMat2(total.a + blade.a * coef, total.b + blade.b * coef,
                       total.c + blade.c * coef, total.d + blade.d * coef)
    return total


# -- Pin+(2,4) membership --------------------------------------------------

@dataclass(frozen=True)
class PinReport:
    conditions: dict
    residuals: dict

    @property
    def ok(self) -> bool:
        return all(self.conditions.values())

    def to_dict(self):
        return {"ok": self.ok,
                "conditions": dict(self.conditions),
                "residuals": {k: float(v) for k, v in self.residuals.items()}}


_GRADE3 = np.array([0, 1, 1, 2, 1, 2, 2, 3])
_OFF_MASKS = {}


def _off(m: Multivector, grades) -> float:
    """Largest coefficient of ``m`` outside ``grades`` (Cl(3,0) or Cl(0,1) entries)."""
    key = (m.sig.dim, grades)
    mask = _OFF_MASKS.get(key)
    if mask is None:
        g = _GRADE3 if m.sig.dim == 8 else np.array([bin(i).count("1") for i in range(m.sig.dim)])
        mask = _OFF_MASKS[key] = ~np.isin(g, grades)
    off = m.coeffs[mask]
    return float(np.abs(off).max()) if off.size else 0.0


def _test_paravectors(rng):
    basis = [paravector(v) for v in np.eye(4)]
    return basis + [paravector(rng.uniform(-1, 1, 4)) for _ in range(8)]


def verify_pin_conditions(m: ClMat2, tol: float = ATOL, seed: int = 0) -> PinReport:
    """Check conditions (i)-(vi) for ``[[a, c], [b, d]]`` to lie in $pin+(2,4).

    Conditions quantified over paravectors ``v`` are checked on ``1, e1, e2, e3``
    plus 8 random paravectors drawn from ``seed``.
    """
    if m.sig != CL3:
        raise SignatureMismatch("Vahlen matrices need Cl(3,0) entries")
    a, b, c, d = m.a, m.b, m.c, m.d
    bar, rev = conjugation, reversion
    vs = _test_paravectors(np.random.default_rng(seed))
    res = {}
    res["i"] = max(_off(z * bar(z), (0,)) for z in (a, b, c, d))
    res["ii"] = max(_off(a * bar(b), (0, 1)), _off(c * bar(d), (0, 1)))
    res["iii"] = max(max(_off(a * v * bar(c) + c * bar(v) * bar(a), (0,)),
                         _off(b * v * bar(d) + d * bar(v) * bar(b), (0,))) for v in vs)
    res["iv"] = max(_off(a * v * bar(d) + c * bar(v) * bar(b), (0, 1)) for v in vs)
    res["v"] = max((a * rev(c) - c * rev(a)).max_abs(), (b * rev(d) - d * rev(b)).max_abs())
    res["vi"] = (a * rev(d) - c * rev(b) - 1.0).max_abs()
    return PinReport({k: v < tol for k, v in res.items()}, res)


@dataclass(frozen=True)
class PinElement:
    """A Vahlen matrix that passed :func:`verify_pin_conditions`."""

    m: ClMat2
    report: PinReport = field(compare=False, repr=False)

    @classmethod
    def validate(cls, m: ClMat2, tol: float = ATOL) -> "PinElement":
        report = verify_pin_conditions(m, tol)
        if not report.ok:
            raise PinValidationError(report)
        return cls(m, report)


# -- conformal maps ---------------------------------------------------------

class Kind(enum.Enum):
    TRANSLATION = "translation"
    DILATION = "dilation"
    ROTATION = "rotation"
    INVERSION = "inversion"
    TRANSVECTION = "transvection"


@dataclass(frozen=True)
class ConformalMapKind:
    kind: Kind
    h: Multivector | None = None
    rho: float | None = None
    g: Multivector | None = None

    def __post_init__(self):
        k = self.kind
        if k in (Kind.TRANSLATION, Kind.TRANSVECTION):
            if self.h is None:
                raise ValueError(f"{k.value} needs a paravector h")
            h = paravector(self.h)
            if not is_paravector(h):
                raise ValueError("h must be a paravector")
            object.__setattr__(self, "h", h)
        elif k is Kind.DILATION:
            if self.rho is None or not self.rho > 0:
                raise ValueError("dilation needs rho > 0")
        elif k is Kind.ROTATION:
            if self.g is None or self.g.sig != CL3:
                raise ValueError("rotation needs a Cl(3,0) element g")
            if not (self.g * conjugation(self.g)).isclose(1.0):
                raise ValueError("rotation factor must satisfy g bar(g) = 1")

    @classmethod
    def translation(cls, h):
        return cls(Kind.TRANSLATION, h=paravector(h))

    @classmethod
    def transvection(cls, h):
        return cls(Kind.TRANSVECTION, h=paravector(h))

    @classmethod
    def dilation(cls, rho):
        return cls(Kind.DILATION, rho=float(rho))

    @classmethod
    def rotation(cls, g):
        return cls(Kind.ROTATION, g=g)

    @classmethod
    def inversion(cls):
        return cls(Kind.INVERSION)


def make_map(kind: ConformalMapKind, tol: float = ATOL) -> PinElement:
    one = Multivector.scalar(CL3, 1.0)
    zero = Multivector.zero(CL3)
    k = kind.kind
    if k is Kind.TRANSLATION:
        m = ClMat2(a=one, c=kind.h, b=zero, d=one)
    elif k is Kind.TRANSVECTION:
        m = ClMat2(a=one, c=zero, b=kind.h, d=one)
    elif k is Kind.DILATION:
        r = math.sqrt(kind.rho)
        m = ClMat2.from_scalars(r, 0.0, 0.0, 1.0 / r)
    elif k is Kind.ROTATION:
        m = ClMat2(a=kind.g, c=zero, b=zero, d=grade_involution(kind.g))
    else:
        m = ClMat2.from_scalars(0.0, -1.0, 1.0, 0.0)
    return PinElement.validate(m, tol)


def compose(g1: PinElement, g2: PinElement, tol: float = ATOL) -> PinElement:
    """``g1 after g2``; the product is revalidated, never renormalised."""
    return PinElement.validate(g1.m @ g2.m, tol)


def twisted_adjoint(g: PinElement, q: QuadricPoint) -> QuadricPoint:
    """``g b rev(g)`` on the matrix of ``q``, decoded back to ``(w, lam', mu')``."""
    r = g.m @ q.matrix() @ mat_reversion(g.m)
    w = r.a
    defect = max(_off(w, (0, 1)), _off(r.b, (0,)), _off(r.c, (0,)),
                 (r.d - conjugation(w)).max_abs())
    if defect >= NOT_PARAVECTOR_TOL:
        raise NotParavector(f"twisted adjoint left the paravector form (defect {defect:.3e})")
    w = Multivector(CL3, np.where(_GRADE3 <= 1, w.coeffs, 0.0))
    return QuadricPoint(w, r.c.scalar_part, r.b.scalar_part)


def apply_conformal(g: PinElement, x, with_delta: bool = False):
    """``x' = (a x + c)(b x + d)^-1``; returns ``(x', delta)`` when ``with_delta``."""
    x = paravector(x)
    m = g.m
    n = m.b * x + m.d
    delta = (n * conjugation(n)).scalar_part
    if abs(delta) <= INFINITY_TOL:
        raise PointAtInfinity(f"|b x + d|^2 = {delta:.3e}")
    out = (m.a * x + m.c) * conjugation(n) / delta
    return (out, delta) if with_delta else out


def center_elements() -> list[PinElement]:
    """The four elements over the identity map: ``+-1`` and ``+-e123`` on the diagonal."""
    one = Multivector.scalar(CL3, 1.0)
    zero = Multivector.zero(CL3)
    j = Multivector.blade(CL3, 0b111)
    return [PinElement.validate(ClMat2(a=s * u, c=zero, b=zero, d=s * u))
            for u in (one, j) for s in (1.0, -1.0)]


# -- Moebius maps of the plane ----------------------------------------------

CL01 = Signature(0, 1)


def _cplx(z: complex) -> Multivector:
    return Multivector(CL01, [z.real, z.imag])


def mobius_plane_apply(A, z: complex) -> tuple[complex, float]:
    """Moebius map of the plane through the Cl(0,1) matrix picture.

    ``A`` is given in the layout ``[[a, c], [b, d]]``.  The point is embedded as
    ``[[z, |z|^2], [1, bar z]]`` and sent to ``A s(z) rev(A)``, which equals
    ``omega [[z', |z'|^2], [1, bar z']]``.
    """
    (a, c), (b, d) = np.asarray(A, dtype=complex)
    z = complex(z)
    denom = b * z + d
    if abs(denom) <= INFINITY_TOL:
        raise PointAtInfinity(f"|bz + d| = {abs(denom):.3e}")
    g = ClMat2(a=_cplx(a), b=_cplx(b), c=_cplx(c), d=_cplx(d))
    s = ClMat2(a=_cplx(z), c=Multivector.scalar(CL01, abs(z) ** 2),
               b=Multivector.scalar(CL01, 1.0), d=conjugation(_cplx(z)))
    r = g @ s @ mat_reversion(g)
    omega = r.b.scalar_part
    if not r.b.is_scalar(atol=1e-9 * max(1.0, abs(omega))):
        raise ArithmeticError("lower-left entry is not real")
    w = r.a / omega
    return complex(w.coeffs[0], w.coeffs[1]), omega


# -- quasi-spheres ------------------------------------------------------------

@dataclass(frozen=True)
class QuasiSphere:
    """``a x bar(x) + <b, x> + c = 0`` with the Minkowski pairing ``<b, x>``."""

    a: float
    b: tuple
    c: float

    def __post_init__(self):
        b = tuple(float(v) for v in self.b)
        if len(b) != 4:
            raise ValueError("b needs 4 components")
        object.__setattr__(self, "b", b)
        if self.a == 0 and self.c == 0 and not any(b):
            raise ValueError("(a, b, c) must not all vanish")


def quasi_sphere_eval(s: QuasiSphere, x) -> float:
    x = paravector(x)
    return s.a * para_norm(x) + minkowski_pairing(paravector(s.b), x) + s.c


def quasi_sphere_fit(points) -> tuple[QuasiSphere, float]:
    """Least-squares quasi-sphere through ``points``; returns it with the max residual.

    Rows are normalised so the residual does not depend on the point scale.
    """
    rows = []
    for p in points:
        x = coords(paravector(p))
        r = np.array([x[0] ** 2 - x[1:] @ x[1:], x[0], -x[1], -x[2], -x[3], 1.0])
        rows.append(r / np.linalg.norm(r))
    mat = np.array(rows)
    _, _, vt = np.linalg.svd(mat)
    v = vt[-1]
    resid = float(np.max(np.abs(mat @ v)))
    return QuasiSphere(v[0], v[1:5], v[5]), resid


def sample_quasi_sphere(s: QuasiSphere, rng, k: int = 8, spread: float = 1.0) -> list:
    """``k`` points of ``s``: random ``x0, x1, x2``, then solve the quadratic for ``x3``."""
    b0, b1, b2, b3 = s.b
    pts = []
    while len(pts) < k:
        x0, x1, x2 = rng.uniform(-spread, spread, 3)
        # a(x0^2 - x1^2 - x2^2 - x3^2) + b0 x0 - b1 x1 - b2 x2 - b3 x3 + c = 0
        rest = s.a * (x0 ** 2 - x1 ** 2 - x2 ** 2) + b0 * x0 - b1 * x1 - b2 * x2 + s.c
        if abs(s.a) < 1e-12:
            if abs(b3) < 1e-12:
                continue
            x3 = rest / b3
        else:
            disc = b3 ** 2 + 4 * s.a * rest
            if disc < 0:
                continue
            x3 = (-b3 + rng.choice((-1.0, 1.0)) * math.sqrt(disc)) / (2 * s.a)
        pts.append(paravector([x0, x1, x2, x3]))
    return pts


ETA = np.diag([1.0, -1.0, -1.0, -1.0])


def jacobian(g: PinElement, x, h: float = 1e-5) -> np.ndarray:
    """Central-difference Jacobian of ``apply_conformal(g, .)`` in paravector coordinates."""
    x = coords(paravector(x))
    cols = []
    for k in range(4):
        dx = np.zeros(4)
        dx[k] = h
        plus = coords(apply_conformal(g, x + dx))
        minus = coords(apply_conformal(g, x - dx))
        cols.append((plus - minus) / (2 * h))
    return np.array(cols).T


def conformality_deviation(J: np.ndarray) -> float:
    """Relative deviation of ``J^T eta J`` from a multiple of ``eta``."""
    m = J.T @ ETA @ J
    factor = np.trace(ETA @ m) / 4.0
    return float(np.abs(m - factor * ETA).max() / abs(factor))


# -- sampling -----------------------------------------------------------------

TABLE_KINDS = tuple(Kind)


def random_rotation_factor(rng, scale: float = 0.5) -> Multivector:
    """``exp(A)`` for random ``A`` of grades 1 and 2; satisfies ``g bar(g) = 1``."""
    from .clifford import mv_exp, random_multivector
    return mv_exp(random_multivector(CL3, rng, grades=(1, 2), scale=scale))


def random_kind(rng, kind: Kind | None = None, scale: float = 0.5) -> ConformalMapKind:
    kind = TABLE_KINDS[rng.integers(len(TABLE_KINDS))] if kind is None else kind
    if kind is Kind.TRANSLATION:
        return ConformalMapKind.translation(rng.uniform(-1, 1, 4))
    if kind is Kind.TRANSVECTION:
        return ConformalMapKind.transvection(scale * rng.uniform(-1, 1, 4))
    if kind is Kind.DILATION:
        return ConformalMapKind.dilation(float(np.exp(rng.uniform(-1, 1))))
    if kind is Kind.ROTATION:
        return ConformalMapKind.rotation(random_rotation_factor(rng, scale))
    return ConformalMapKind.inversion()


def random_map(rng, kind: Kind | None = None) -> PinElement:
    return make_map(random_kind(rng, kind))


def random_composition(rng, length: int | None = None) -> PinElement:
    length = int(rng.integers(2, 5)) if length is None else length
    g = random_map(rng)
    for _ in range(length - 1):
        g = compose(random_map(rng), g)
    return g
