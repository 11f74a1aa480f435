"""Dirac matrices, the conformal Lie algebra su(2,2) and spin exponentials.

Complex 4x4 matrices are plain ``numpy`` arrays of dtype ``complex128``.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .clifford import (
    ATOL,
    Multivector,
    Signature,
    commutator,
    grade_involution,
    inverse,
    metric_pairing,
    mv_exp,
    reversion,
)

ETA = np.diag([1.0, -1.0, -1.0, -1.0])
I4 = np.eye(4, dtype=complex)
SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
REL_TOL = 1e-12


class RelationError(ArithmeticError):
    pass


class Variant(enum.Enum):
    WEYL = "weyl"
    KELLER = "keller"


class EmbedVariant(enum.Enum):
    SEC34 = "sec34"
    SEC42 = "sec42"


def as_variant(v) -> Variant:
    return v if isinstance(v, Variant) else Variant(str(v).lower())


def _block(a, b, c, d):
    return np.block([[a, b], [c, d]]).astype(complex)


def mat_comm(a, b):
    return a @ b - b @ a


def clifford_defect(mats, squares) -> float:
    """Largest deviation of ``{m_i, m_j} = 2 s_i delta_ij`` over all pairs."""
    worst = 0.0
    for i, j in itertools.product(range(len(mats)), repeat=2):
        target = 2 * squares[i] * I4 if i == j else 0 * I4
        worst = max(worst, np.abs(mats[i] @ mats[j] + mats[j] @ mats[i] - target).max())
    return float(worst)


@dataclass(frozen=True, eq=False)
class GammaRep:
    """Dirac matrices ``gamma_0 .. gamma_3`` with ``{g_mu, g_nu} = 2 eta_mu_nu``."""

    variant: Variant
    gammas: tuple

    def __post_init__(self):
        d = clifford_defect(self.gammas, np.diag(ETA))
        if d > REL_TOL:
            raise RelationError(f"gamma matrices violate the Clifford relations ({d:.3e})")

    @property
    def g5(self) -> np.ndarray:
        g = self.gammas
        return g[0] @ g[1] @ g[2] @ g[3]

    def slash(self, x) -> np.ndarray:
        """``x^mu gamma_mu``."""
        return sum(float(x[m]) * self.gammas[m] for m in range(4))


@lru_cache(maxsize=None)
def gamma_matrices(variant=Variant.WEYL) -> GammaRep:
    """Weyl: ``g0 = [[0, I], [I, 0]]``, ``gk = [[0, -s_k], [s_k, 0]]``; Keller flips the spatial ones."""
    variant = as_variant(variant)
    z, one = np.zeros((2, 2)), np.eye(2)
    sign = -1.0 if variant is Variant.WEYL else 1.0
    gammas = [_block(z, one, one, z)] + [_block(z, sign * s, -sign * s, z) for s in SIGMA]
    for g in gammas:
        g.setflags(write=False)
    return GammaRep(variant, tuple(gammas))


# order E0, E1, E2, E3, E4; E0 squares to -1, the others to +1
E_SQUARES = (-1, 1, 1, 1, 1)


def embed_E(embed, variant=Variant.WEYL) -> tuple:
    embed = embed if isinstance(embed, EmbedVariant) else EmbedVariant(str(embed).lower())
    rep = gamma_matrices(variant)
    g, g5 = rep.gammas, rep.g5
    if embed is EmbedVariant.SEC34:
        es = [-1j * g[0], -1j * g[1], -1j * g[2], -1j * g[3], -1j * g5]
    else:
        es = [1j * g[0]] + [g[k] @ g[0] for k in (1, 2, 3)] + [g5 @ g[0]]
    d = clifford_defect(es, E_SQUARES)
    if d > REL_TOL:
        raise RelationError(f"E_A violate the Cl(4,1) relations ({d:.3e})")
    return tuple(es)


# -- Cl(4,1) <-> M(4, C) ---------------------------------------------------

CL41 = Signature(4, 1)


@lru_cache(maxsize=None)
def _cl41_basis(embed, variant):
    """Matrices of the 32 blades of Cl(4,1), generators in the order E1 E2 E3 E4 E0."""
    es = embed_E(embed, variant)
    gens = [es[1], es[2], es[3], es[4], es[0]]
    blades = []
    for mask in range(32):
        m = I4.copy()
        for k in range(5):
            if mask >> k & 1:
                m = m @ gens[k]
        blades.append(m)
    real = np.array([np.concatenate([b.real.ravel(), b.imag.ravel()]) for b in blades]).T
    if np.linalg.matrix_rank(real) != 32:
        raise RelationError("blade matrices are not a real basis of M(4, C)")
    return tuple(blades), np.linalg.inv(real)


def cl41_to_matrix(mv: Multivector, embed=EmbedVariant.SEC42, variant=Variant.WEYL) -> np.ndarray:
    if mv.sig != CL41:
        raise ValueError(f"expected a Cl(4,1) element, got {mv.sig}")
    blades, _ = _cl41_basis(EmbedVariant(embed), as_variant(variant))
    return sum(c * b for c, b in zip(mv.coeffs, blades))


def matrix_to_cl41(m, embed=EmbedVariant.SEC42, variant=Variant.WEYL) -> Multivector:
    _, inv = _cl41_basis(EmbedVariant(embed), as_variant(variant))
    m = np.asarray(m, dtype=complex)
    return Multivector(CL41, inv @ np.concatenate([m.real.ravel(), m.imag.ravel()]))


def matrix_conjugation(m, embed=EmbedVariant.SEC42, variant=Variant.WEYL) -> np.ndarray:
    """Clifford conjugation of Cl(4,1) carried over to 4x4 complex matrices."""
    from .clifford import conjugation
    return cl41_to_matrix(conjugation(matrix_to_cl41(m, embed, variant)), embed, variant)


# -- conformal generators ---------------------------------------------------

LABELS = tuple([f"P{m}" for m in range(4)] + [f"K{m}" for m in range(4)] + ["D"]
               + [f"M{m}{n}" for m, n in itertools.combinations(range(4), 2)])


@dataclass(frozen=True, eq=False)
class ConfGenerator:
    label: str
    matrix: np.ndarray


def _M(rep, m, n):
    g = rep.gammas
    return 0.25 * (g[m] @ g[n] - g[n] @ g[m])


def generator(label: str, variant=Variant.WEYL) -> ConfGenerator:
    """``P_mu``, ``K_mu``, ``D`` or ``M_mu_nu`` (any index order, ``M_mu_mu = 0``)."""
    rep = gamma_matrices(variant)
    g, g5 = rep.gammas, rep.g5
    label = label.strip()
    try:
        if label == "D":
            mat = 0.5j * g5
        elif label[0] in "PK" and len(label) == 2:
            m = int(label[1])
            if label[0] == "P":
                mat = 0.5 * (g[m] + 1j * g[m] @ g5)
            else:
                mat = -0.5 * (g[m] - 1j * g[m] @ g5)
        elif label[0] == "M" and len(label) == 3:
            mat = _M(rep, int(label[1]), int(label[2]))
        else:
            raise ValueError
        if any(ch.isdigit() and int(ch) > 3 for ch in label):
            raise ValueError
    except (ValueError, IndexError):
        raise ValueError(f"invalid generator label {label!r}") from None
    return ConfGenerator(label, mat)


def generator_basis(variant=Variant.WEYL) -> np.ndarray:
    return np.array([generator(lab, variant).matrix for lab in LABELS])


def _expected(variant) -> dict:
    """Commutators of all ordered generator pairs written as coefficient vectors."""
    idx = {lab: i for i, lab in enumerate(LABELS)}
    eta = np.diag(ETA)

    def vec(*terms):
        v = np.zeros(len(LABELS))
        for coef, lab in terms:
            if lab[0] == "M":
                m, n = int(lab[1]), int(lab[2])
                if m == n:
                    continue
                if m > n:
                    coef, lab = -coef, f"M{n}{m}"
            v[idx[lab]] += coef
        return v

    def g(m, n):
        return eta[m] if m == n else 0.0

    out = {}
    for m in range(4):
        for n in range(4):
            out[f"P{m}", f"P{n}"] = vec()
            out[f"K{m}", f"K{n}"] = vec()
            pk = vec((2 * g(m, n), "D"), (-2.0, f"M{m}{n}"))
            out[f"P{m}", f"K{n}"] = pk
            out[f"K{n}", f"P{m}"] = -pk
        out[f"P{m}", "D"] = vec((1.0, f"P{m}"))
        out["D", f"P{m}"] = -out[f"P{m}", "D"]
        out[f"K{m}", "D"] = vec((-1.0, f"K{m}"))
        out["D", f"K{m}"] = -out[f"K{m}", "D"]
    out["D", "D"] = vec()
    for m, n in itertools.combinations(range(4), 2):
        mn = f"M{m}{n}"
        out[mn, "D"] = out["D", mn] = vec()
        for l in range(4):
            for X in "PK":
                v = vec((-g(m, l), f"{X}{n}"), (g(n, l), f"{X}{m}"))
                out[mn, f"{X}{l}"] = v
                out[f"{X}{l}", mn] = -v
        for s, r in itertools.combinations(range(4), 2):
            out[mn, f"M{s}{r}"] = vec((g(m, r), f"M{n}{s}"), (g(n, s), f"M{m}{r}"),
                                      (-g(m, s), f"M{n}{r}"), (-g(n, r), f"M{m}{s}"))
    return out


@dataclass(frozen=True)
class TableEntry:
    coefficients: np.ndarray
    expected: np.ndarray
    residual: float        # least-squares residual of the decomposition
    deviation: float       # max |coefficients - expected|


@dataclass(frozen=True)
class CommutatorTable:
    variant: Variant
    entries: dict

    @property
    def max_residual(self) -> float:
        return max(max(e.residual, e.deviation) for e in self.entries.values())

    def ok(self, tol=1e-9) -> bool:
        return self.max_residual < tol

    def worst_pair(self):
        return max(self.entries, key=lambda k: max(self.entries[k].residual, self.entries[k].deviation))


def decompose(mat, variant=Variant.WEYL):
    """Least-squares coefficients of ``mat`` over the 15 generators, with residual."""
    basis = generator_basis(variant).reshape(15, 16).T
    a = np.vstack([basis.real, basis.imag])
    m = np.asarray(mat, dtype=complex).ravel()
    rhs = np.concatenate([m.real, m.imag])
    coef, *_ = np.linalg.lstsq(a, rhs, rcond=None)
    return coef, float(np.abs(a @ coef - rhs).max())


def commutator_table(variant=Variant.WEYL) -> CommutatorTable:
    """All ordered generator commutators decomposed onto the generator basis."""
    variant = as_variant(variant)
    mats = {lab: generator(lab, variant).matrix for lab in LABELS}
    expected = _expected(variant)
    entries = {}
    for a, b in itertools.product(LABELS, repeat=2):
        coef, res = decompose(mat_comm(mats[a], mats[b]), variant)
        exp = expected.get((a, b))
        if exp is None:
            exp = -expected[b, a]
        entries[a, b] = TableEntry(coef, exp, res, float(np.abs(coef - exp).max()))
    return CommutatorTable(variant, entries)


DUALITY = {"P": ("K", -1.0), "K": ("P", -1.0), "D": ("D", -1.0), "M": ("M", 1.0)}


def _dual(label):
    new, sign = DUALITY[label[0]]
    return new + label[1:], sign


@dataclass(frozen=True)
class DualityReport:
    ok: bool
    max_deviation: float
    worst_pair: tuple

    def to_dict(self):
        return {"ok": self.ok, "max_deviation": self.max_deviation, "worst_pair": list(self.worst_pair)}


def duality_check(variant=Variant.WEYL, tol=1e-9) -> DualityReport:
    """The table is invariant under ``P -> -K``, ``K -> -P``, ``D -> -D``, ``M -> M``.

    Writing ``phi`` for the substitution, ``[phi X, phi Y]`` must equal
    ``phi([X, Y])`` for every pair, checked on the decomposed coefficients.
    """
    table = commutator_table(variant)
    idx = {lab: i for i, lab in enumerate(LABELS)}
    perm = np.zeros((15, 15))
    for lab in LABELS:
        new, s = _dual(lab)
        perm[idx[new], idx[lab]] = s
    worst, pair = 0.0, None
    for (a, b), e in table.entries.items():
        (da, sa), (db, sb) = _dual(a), _dual(b)
        lhs = sa * sb * table.entries[da, db].coefficients
        dev = float(np.abs(lhs - perm @ e.coefficients).max())
        if pair is None or dev > worst:
            worst, pair = dev, (a, b)
    return DualityReport(worst < tol, worst, pair)


# -- spin groups --------------------------------------------------------------

def spin_exp(B: Multivector, t: float = 1.0) -> Multivector:
    """``R = exp(t B)`` for a bivector ``B``."""
    if not B.is_grades((2,), atol=ATOL):
        raise ValueError("spin_exp needs a pure bivector")
    return mv_exp(B * float(t))


def adjoint_action(R: Multivector, v: Multivector) -> Multivector:
    """``R v R^-1``."""
    return R * v * inverse(R)


def exp_ad(B: Multivector, v: Multivector, t: float = 1.0, terms: int = 60, tol: float = 1e-16) -> Multivector:
    """``exp(ad(tB)) v`` via the iterated commutator series."""
    X = B * float(t)
    term, total = v, v
    for k in range(1, terms):
        term = commutator(X, term) / k
        total = total + term
        if term.max_abs() < tol:
            break
    return total


def rotor_check(R: Multivector) -> float:
    """``max(|R rev(R) - 1|, |hat(R) - R|)``."""
    return max((R * reversion(R) - 1.0).max_abs(), (grade_involution(R) - R).max_abs())


def isometry_defect(R: Multivector, v: Multivector) -> float:
    w = adjoint_action(R, v)
    return abs(metric_pairing(w, w) - metric_pairing(v, v))
