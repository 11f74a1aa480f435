"""Twistors as algebraic spinors of C (x) Cl(1,3) = Cl(4,1) = M(4, C).

A twistor at ``x`` is ``chi P_L U f`` with ``chi = x E4`` for a null paravector
``x`` of R + R^{4,1}.  The reference twistor is ``(1 + g5 x^mu g_mu) Pi`` with
``Pi = P_L omega = (0, xi)``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .dirac import (
    EmbedVariant,
    I4,
    SIGMA,
    Variant,
    as_variant,
    embed_E,
    gamma_matrices,
    matrix_conjugation,
)

NULL_TOL = 1e-9
INCIDENCE_TOL = 1e-9


class NotNull(ValueError):
    """Paravector off the Klein absolute where a null one is required."""


class Side(enum.Enum):
    L = "L"
    R = "R"


def _gamma5_sign(rep) -> int:
    """``s`` with ``g5 Pi = s i Pi`` on the lower block (``+1`` Weyl, ``-1`` Keller)."""
    return int(round((rep.g5[3, 3] / 1j).real))


def projector(side=Side.L, variant=Variant.WEYL) -> np.ndarray:
    """``P = (1 +- i g5) / 2`` with the sign fixed so that ``P_L`` keeps the lower block."""
    side = side if isinstance(side, Side) else Side(str(side).upper())
    rep = gamma_matrices(variant)
    s = _gamma5_sign(rep)
    sign = -s if side is Side.L else s
    return 0.5 * (I4 + sign * 1j * rep.g5)


def vec_matrix(x) -> np.ndarray:
    """``[[x0 + x3, x1 + i x2], [x1 - i x2, x0 - x3]]``: Hermitian, determinant ``x.x``."""
    x0, x1, x2, x3 = (float(v) for v in x)
    return np.array([[x0 + x3, x1 + 1j * x2], [x1 - 1j * x2, x0 - x3]])


def sigma_matrix(x) -> np.ndarray:
    """``x^mu sigma_mu`` with ``sigma_0 = I``; the complex conjugate of :func:`vec_matrix`."""
    x = np.asarray(x, dtype=float)
    return x[0] * np.eye(2) + sum(x[k + 1] * SIGMA[k] for k in range(3))


def slash_block(x, variant=Variant.WEYL) -> np.ndarray:
    """Upper-right 2x2 block of ``x^mu g_mu``: ``x0 - x.sigma`` (Weyl) or ``x0 + x.sigma`` (Keller)."""
    return gamma_matrices(variant).slash(x)[:2, 2:]


def _spinor(xi) -> np.ndarray:
    xi = np.asarray(xi, dtype=complex).ravel()
    if xi.shape != (2,) or not np.all(np.isfinite(xi)):
        raise ValueError("a Weyl spinor has two finite complex components")
    return xi


@dataclass(frozen=True, eq=False)
class Twistor:
    components: np.ndarray
    point: tuple
    xi: np.ndarray
    construction: str
    variant: Variant

    def to_dict(self):
        from .jsonio import complex_to_json
        return {"components": complex_to_json(self.components),
                "point": list(self.point),
                "xi": complex_to_json(self.xi),
                "construction": self.construction,
                "rep": self.variant.value}


def reference_twistor(x, xi, variant=Variant.WEYL) -> Twistor:
    """``(1 + g5 x) Pi`` evaluated as a 4x4 matrix product."""
    rep = gamma_matrices(variant)
    xi = _spinor(xi)
    x = tuple(float(v) for v in x)
    pi = np.concatenate([np.zeros(2), xi])
    eta = (I4 + rep.g5 @ rep.slash(x)) @ pi
    return Twistor(eta, x, xi, "reference", rep.variant)


def closed_form(x, xi, variant=Variant.WEYL) -> np.ndarray:
    """``(-i X xi, xi)`` in the Weyl rep and ``(i X xi, xi)`` in the Keller rep, X the slash block."""
    rep = gamma_matrices(variant)
    xi = _spinor(xi)
    s = _gamma5_sign(rep)
    return np.concatenate([-s * 1j * slash_block(x, variant) @ xi, xi])


# -- null paravectors of R + R^{4,1} --------------------------------------------

@dataclass(frozen=True, eq=False)
class NullParavector5:
    """``x = x0 + c0 E0 + c1 E1 + c2 E2 + c3 E3 + c4 E4`` (``c0 = alpha0``, ``c4 = alpha4``)."""

    scalar: float
    E: np.ndarray
    null: bool = False

    def __post_init__(self):
        e = np.array(self.E, dtype=float).ravel()
        if e.shape != (5,) or not np.all(np.isfinite(e)) or not np.isfinite(self.scalar):
            raise ValueError("need a finite scalar and five E-coefficients")
        e.setflags(write=False)
        object.__setattr__(self, "E", e)
        object.__setattr__(self, "scalar", float(self.scalar))
        object.__setattr__(self, "null", abs(self.norm()) < NULL_TOL)

    @classmethod
    def from_minkowski(cls, x, variant=Variant.WEYL) -> "NullParavector5":
        """Null lift of a Minkowski point.

        The scalar and E1..E3 slots carry ``x``; ``alpha0, alpha4`` are fixed by the
        gauge under which the ideal construction reproduces the reference twistor:
        ``mu = alpha4 + alpha0 = 1`` in the Weyl rep, ``lam = alpha4 - alpha0 = 1`` in the
        Keller rep.  The other one equals ``x.x``, which puts the point on the absolute.
        """
        x = np.asarray(x, dtype=float)
        n = x[0] ** 2 - x[1:] @ x[1:]
        if as_variant(variant) is Variant.WEYL:
            lam, mu = n, 1.0
        else:
            lam, mu = 1.0, n
        a4, a0 = (lam + mu) / 2, (mu - lam) / 2
        return cls(x[0], [a0, x[1], x[2], x[3], a4])

    @property
    def lam(self) -> float:
        return self.E[4] - self.E[0]

    @property
    def mu(self) -> float:
        return self.E[4] + self.E[0]

    def minkowski(self) -> np.ndarray:
        return np.array([self.scalar, *self.E[1:4]])

    def norm(self) -> float:
        """``x bar(x) = x0^2 + c0^2 - c1^2 - c2^2 - c3^2 - c4^2``."""
        e = self.E
        return self.scalar ** 2 + e[0] ** 2 - e[1:] @ e[1:]

    def scaled(self, s: float) -> "NullParavector5":
        return NullParavector5(s * self.scalar, s * self.E)

    def matrix(self, variant=Variant.WEYL) -> np.ndarray:
        es = embed_E(EmbedVariant.SEC42, variant)
        return self.scalar * I4 + sum(c * e for c, e in zip(self.E, es))

    def bar_matrix(self, variant=Variant.WEYL) -> np.ndarray:
        es = embed_E(EmbedVariant.SEC42, variant)
        return self.scalar * I4 - sum(c * e for c, e in zip(self.E, es))

    def to_dict(self):
        return {"scalar": self.scalar, "E": self.E.tolist()}


def chi(x: NullParavector5, variant=Variant.WEYL) -> np.ndarray:
    """``chi = x E4``."""
    return x.matrix(variant) @ embed_E(EmbedVariant.SEC42, variant)[4]


def idempotent_f() -> np.ndarray:
    """Matrix unit selecting the first column."""
    f = np.zeros((4, 4), dtype=complex)
    f[0, 0] = 1.0
    return f


def twistor_from_ideal(x: NullParavector5, U, variant=Variant.WEYL) -> Twistor:
    """``chi P_L U f`` read off as the first column."""
    U = np.asarray(U, dtype=complex)
    seed = projector(Side.L, variant) @ U @ idempotent_f()
    col = (chi(x, variant) @ seed)[:, 0]
    return Twistor(col, tuple(x.minkowski()), seed[2:, 0].copy(), "ideal", as_variant(variant))


def derivation_chain(x: NullParavector5, xi, variant=Variant.WEYL) -> dict:
    """Each line of the computation ``chi Pi = ... = (1 + g5 x) Pi`` as a column.

    ``lines[k]`` should all coincide; ``E4_Pi`` pairs the two sides of the lemma
    ``E4 Pi = g5 g0 Pi = -g0 g5 Pi = -s i g0 Pi`` (``s = +1`` in the Weyl rep).
    """
    rep = gamma_matrices(variant)
    g, g5 = rep.gammas, rep.g5
    E = embed_E(EmbedVariant.SEC42, variant)
    s = _gamma5_sign(rep)
    pi = np.concatenate([np.zeros(2), _spinor(xi)])
    x0, (a0, x1, x2, x3, a4) = x.scalar, x.E
    xk = (x1, x2, x3)
    bold = rep.slash(x.minkowski())
    e4pi = -s * 1j * g[0] @ pi
    lines = [
        chi(x, variant) @ pi,
        (x0 * E[4] + a0 * E[0] @ E[4] + sum(xk[k] * E[k + 1] @ E[4] for k in range(3)) + a4 * I4) @ pi,
        x0 * (E[4] @ pi) + sum(xk[k] * E[k + 1] @ (E[4] @ pi) for k in range(3))
        + a0 * E[0] @ (E[4] @ pi) + a4 * pi,
        x0 * e4pi + sum(xk[k] * (g[k + 1] @ g[0]) @ e4pi for k in range(3))
        + a0 * (1j * g[0]) @ e4pi + a4 * pi,
        -s * 1j * x0 * g[0] @ pi - s * 1j * sum(xk[k] * g[k + 1] @ pi for k in range(3))
        + s * a0 * pi + a4 * pi,
        -s * 1j * bold @ pi + pi,
        (I4 - s * 1j * bold) @ pi,
        (I4 + g5 @ bold) @ pi,
        closed_form(x.minkowski(), xi, variant),
    ]
    lemma = [E[4] @ pi, g5 @ g[0] @ pi, -g[0] @ g5 @ pi, e4pi]
    return {"lines": lines, "E4_Pi": lemma, "s": s}


def chain_defect(x: NullParavector5, xi, variant=Variant.WEYL) -> float:
    ch = derivation_chain(x, xi, variant)
    worst = 0.0
    for group in (ch["lines"], ch["E4_Pi"]):
        worst = max(worst, max(np.abs(v - group[0]).max() for v in group))
    return float(worst)


def _require_null(*xs):
    for x in xs:
        if not x.null:
            raise NotNull(f"x bar(x) = {x.norm():.3e} is not zero")


def incidence(x: NullParavector5, xp: NullParavector5, U, variant=Variant.WEYL,
              check: bool = True) -> np.ndarray:
    """``J = -bar(U) E4 bar(x) x' E4 U``.

    With ``check`` the defining form ``bar(x E4 U) x' E4 U`` is evaluated as well,
    using Clifford conjugation carried to matrices, and the two must agree.
    """
    _require_null(x, xp)
    U = np.asarray(U, dtype=complex)
    E4 = embed_E(EmbedVariant.SEC42, variant)[4]
    ubar = matrix_conjugation(U, EmbedVariant.SEC42, variant)
    J = -ubar @ E4 @ x.bar_matrix(variant) @ xp.matrix(variant) @ E4 @ U
    if check:
        direct = matrix_conjugation(x.matrix(variant) @ E4 @ U, EmbedVariant.SEC42, variant) \
            @ xp.matrix(variant) @ E4 @ U
        scale = max(1.0, np.abs(J).max())
        if np.abs(direct - J).max() > 1e-9 * scale:
            raise ArithmeticError("conjugation transport is inconsistent")
    return J


def robinson_scan(x: NullParavector5, U, samples, variant=Variant.WEYL, tol=INCIDENCE_TOL):
    """``(sample, is_incident)`` pairs; non-null samples give ``(sample, NotNull)`` instead."""
    _require_null(x)
    out = []
    for s in samples:
        try:
            J = incidence(x, s, U, variant)
        except NotNull as err:
            out.append((s, err))
            continue
        out.append((s, bool(np.abs(J).max() < tol)))
    return out
