import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from paravector import dirac
from paravector.clifford import (
    Multivector,
    Signature,
    metric_pairing,
    mv_exp,
    random_multivector,
    reversion,
)

VARIANTS = list(dirac.Variant)
CL13 = Signature(1, 3)
seeds = st.integers(0, 2 ** 32 - 1)


def gam(*idx):
    """Product of Cl(1,3) generators gamma_idx (0-based, gamma_0 = e1)."""
    out = Multivector.scalar(CL13, 1.0)
    for k in idx:
        out = out * Multivector.blade(CL13, 1 << k)
    return out


@pytest.mark.parametrize("v", VARIANTS, ids=lambda v: v.value)
def test_gamma_relations(v):
    g = dirac.gamma_matrices(v).gammas
    for m, n in itertools.product(range(4), repeat=2):
        assert np.allclose(g[m] @ g[n] + g[n] @ g[m], 2 * dirac.ETA[m, n] * np.eye(4), atol=1e-12)


def test_gamma_examples():
    w = dirac.gamma_matrices("weyl")
    k = dirac.gamma_matrices("keller")
    assert np.allclose(w.gammas[0] @ w.gammas[0], np.eye(4))
    assert np.allclose(w.gammas[1] @ w.gammas[1], -np.eye(4))
    assert np.array_equal(k.gammas[0], w.gammas[0])
    for j in (1, 2, 3):
        assert np.array_equal(k.gammas[j], -w.gammas[j])
    # the block form used in the twistor computation
    assert np.allclose(w.g5, np.diag([-1j, -1j, 1j, 1j]))


def test_bad_gammas_rejected():
    with pytest.raises(dirac.RelationError):
        dirac.GammaRep(dirac.Variant.WEYL, tuple(np.eye(4, dtype=complex) for _ in range(4)))


@pytest.mark.parametrize("v", VARIANTS, ids=lambda v: v.value)
@pytest.mark.parametrize("embed", list(dirac.EmbedVariant), ids=lambda e: e.value)
def test_embed_relations(v, embed):
    E = dirac.embed_E(embed, v)
    assert np.allclose(E[0] @ E[0], -np.eye(4), atol=1e-12)
    for a in range(1, 5):
        assert np.allclose(E[a] @ E[a], np.eye(4), atol=1e-12)
    for a, b in itertools.combinations(range(5), 2):
        assert np.allclose(E[a] @ E[b] + E[b] @ E[a], 0, atol=1e-12)


def test_e4_identities():
    rep = dirac.gamma_matrices("weyl")
    g = rep.gammas
    E = dirac.embed_E("sec42")
    assert np.allclose(E[4], rep.g5 @ g[0])
    assert np.allclose(E[4], -g[1] @ g[2] @ g[3])
    E34 = dirac.embed_E("sec34")
    assert np.allclose(E34[4], -1j * g[0] @ g[1] @ g[2] @ g[3])


@given(seeds)
def test_cl41_matrix_transport(seed):
    rng = np.random.default_rng(seed)
    A, B = (random_multivector(dirac.CL41, rng) for _ in range(2))
    mA, mB = dirac.cl41_to_matrix(A), dirac.cl41_to_matrix(B)
    assert np.allclose(dirac.cl41_to_matrix(A * B), mA @ mB, atol=1e-10)
    assert dirac.matrix_to_cl41(mA).isclose(A, atol=1e-10)


def test_matrix_conjugation_antiautomorphism(rng):
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    bar = dirac.matrix_conjugation
    assert np.allclose(bar(a @ b), bar(b) @ bar(a), atol=1e-10)
    E = dirac.embed_E("sec42")
    assert np.allclose(bar(E[4]), -E[4])


# -- generators ----------------------------------------------------------------

@pytest.mark.parametrize("v", VARIANTS, ids=lambda v: v.value)
def test_generator_examples(v):
    rep = dirac.gamma_matrices(v)
    for m in range(4):
        P = dirac.generator(f"P{m}", v).matrix
        K = dirac.generator(f"K{m}", v).matrix
        assert np.allclose(P + K, 1j * rep.gammas[m] @ rep.g5)
        assert np.allclose(P - K, rep.gammas[m])
        assert np.allclose(dirac.generator(f"M{m}{m}", v).matrix, 0)
    assert np.allclose(dirac.generator("D", v).matrix, 0.5j * rep.g5)


def test_generators_independent():
    basis = dirac.generator_basis().reshape(15, 16)
    real = np.hstack([basis.real, basis.imag])
    assert np.linalg.matrix_rank(real) == 15


def test_invalid_labels():
    for bad in ("Q0", "P4", "M1", "M45", ""):
        with pytest.raises(ValueError):
            dirac.generator(bad)


def test_m_antisymmetric():
    assert np.allclose(dirac.generator("M21").matrix, -dirac.generator("M12").matrix)


def _comm_coeffs(a, b, v="weyl"):
    m = dirac.mat_comm(dirac.generator(a, v).matrix, dirac.generator(b, v).matrix)
    return dict(zip(dirac.LABELS, dirac.decompose(m, v)[0].round(12)))


def test_table_examples():
    assert all(c == 0 for c in _comm_coeffs("P0", "P1").values())
    c = _comm_coeffs("P0", "K0")
    assert c["D"] == 2.0 and sum(abs(x) for x in c.values()) == 2.0
    c = _comm_coeffs("M12", "P1")
    assert c["P2"] == 1.0 and sum(abs(x) for x in c.values()) == 1.0


@pytest.mark.parametrize("v", VARIANTS, ids=lambda v: v.value)
def test_full_commutator_table(v):
    t = dirac.commutator_table(v)
    assert len(t.entries) == 225
    assert t.max_residual < 1e-9


def test_table_detects_wrong_convention():
    # with M_mu_nu of the opposite sign the [P, K] relation breaks
    rep = dirac.gamma_matrices("weyl")
    g = rep.gammas
    wrong = 0.25 * (g[1] @ g[0] - g[0] @ g[1])
    comm = dirac.mat_comm(dirac.generator("P0").matrix, dirac.generator("K1").matrix)
    assert not np.allclose(comm, -2 * wrong)
    assert np.allclose(comm, -2 * dirac.generator("M01").matrix)


@pytest.mark.parametrize("v", VARIANTS, ids=lambda v: v.value)
def test_duality(v):
    r = dirac.duality_check(v)
    assert r.ok and r.max_deviation < 1e-12


def test_duality_example():
    # [P0, D] = P0 maps to [-K0, -D] = -K0
    K0 = dirac.generator("K0").matrix
    D = dirac.generator("D").matrix
    assert np.allclose(dirac.mat_comm(-K0, -D), -K0)


# -- spin exponentials ------------------------------------------------------------

def test_spin_exp_examples():
    B = gam(2, 1)
    assert dirac.spin_exp(B, 0.0).isclose(1.0)
    assert dirac.spin_exp(B, math.pi / 2).isclose(B, atol=1e-12)
    t = 0.6
    C = gam(1, 0)
    assert dirac.spin_exp(C, t).isclose(math.cosh(t) + C * math.sinh(t), atol=1e-12)


def test_spin_exp_rejects_non_bivector():
    with pytest.raises(ValueError):
        dirac.spin_exp(gam(1), 1.0)


def test_adjoint_examples():
    v = gam(1)
    assert dirac.adjoint_action(Multivector.scalar(CL13, 1.0), v).isclose(v)
    R = dirac.spin_exp(gam(2, 1), math.pi / 4)
    w = dirac.adjoint_action(R, v)
    assert w.isclose(gam(2), atol=1e-12) or w.isclose(-gam(2), atol=1e-12)
    assert math.isclose(metric_pairing(w, w), metric_pairing(v, v))


@given(seeds, st.floats(-1, 1))
def test_spin_properties(seed, t):
    rng = np.random.default_rng(seed)
    B = random_multivector(CL13, rng, grades=(2,))
    v = random_multivector(CL13, rng, grades=(1,))
    R = dirac.spin_exp(B, t)
    assert dirac.rotor_check(R) < 1e-10
    w = dirac.adjoint_action(R, v)
    assert w.is_grades((1,), atol=1e-10)
    assert dirac.isometry_defect(R, v) < 1e-8
    assert (w - dirac.exp_ad(B, v, t)).max_abs() < 1e-8


@given(seeds)
def test_spin_exp_series_agrees(seed):
    rng = np.random.default_rng(seed)
    B = random_multivector(CL13, rng, grades=(2,))
    assert (dirac.spin_exp(B, 0.8) - mv_exp(B * 0.8, closed_form=False)).max_abs() < 1e-10


@given(seeds)
def test_spin_in_cl30(seed):
    rng = np.random.default_rng(seed)
    sig = Signature(3, 0)
    R = dirac.spin_exp(random_multivector(sig, rng, grades=(2,)), 1.0)
    assert (R * reversion(R) - 1.0).max_abs() < 1e-10
