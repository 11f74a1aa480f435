import numpy as np
import pytest
from hypothesis import given, strategies as st

from paravector import twistor as tw
from paravector.acceptance import random_null
from paravector.dirac import SIGMA, Variant, embed_E, gamma_matrices

VARIANTS = list(Variant)
seeds = st.integers(0, 2 ** 32 - 1)


def spinors(rng):
    return rng.normal(size=2) + 1j * rng.normal(size=2)


def random_U(rng):
    return rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))


@pytest.mark.parametrize("v", VARIANTS, ids=lambda v: v.value)
def test_projectors(v):
    L, R = tw.projector("L", v), tw.projector("R", v)
    assert np.allclose(L @ L, L, atol=1e-12)
    assert np.allclose(L + R, np.eye(4))
    assert np.allclose(L @ R, 0)
    # P_L keeps exactly the lower block, so that Pi = (0, xi)
    assert np.allclose(L @ np.array([1, 2, 3, 4]), [0, 0, 3, 4])


def test_vec_matrix_examples():
    assert np.allclose(tw.vec_matrix((1, 0, 0, 0)), np.eye(2))
    assert np.allclose(tw.vec_matrix((0, 0, 0, 1)), np.diag([1, -1]))
    m = tw.vec_matrix((0, 1, 1, 0))
    assert np.allclose(m, [[0, 1 + 1j], [1 - 1j, 0]])
    assert np.isclose(np.linalg.det(m), -2)


@given(st.lists(st.floats(-5, 5), min_size=4, max_size=4))
def test_vec_matrix_hermitian_det(x):
    m = tw.vec_matrix(x)
    assert np.allclose(m, m.conj().T)
    norm = x[0] ** 2 - x[1] ** 2 - x[2] ** 2 - x[3] ** 2
    assert np.isclose(np.linalg.det(m).real, norm, atol=1e-9)
    assert np.allclose(tw.sigma_matrix(x), m.conj())


def test_slash_blocks():
    x = np.array([0.3, -1.0, 0.5, 2.0])
    sigma_dot = sum(x[k + 1] * SIGMA[k] for k in range(3))
    assert np.allclose(tw.slash_block(x, "weyl"), x[0] * np.eye(2) - sigma_dot)
    assert np.allclose(tw.slash_block(x, "keller"), x[0] * np.eye(2) + sigma_dot)


def test_reference_examples():
    assert np.allclose(tw.reference_twistor((0, 0, 0, 0), (1, 0)).components, [0, 0, 1, 0])
    assert np.allclose(tw.reference_twistor((1, 0, 0, 0), (1, 0), "keller").components, [1j, 0, 1, 0])
    assert np.allclose(tw.reference_twistor((0, 0, 0, 1), (0, 1), "keller").components, [0, -1j, 0, 1])


@given(seeds)
def test_closed_forms_by_2x2_arithmetic(seed):
    rng = np.random.default_rng(seed)
    x, xi = rng.normal(size=4), spinors(rng)
    xdot = tw.sigma_matrix([0, *x[1:]])
    weyl = tw.reference_twistor(x, xi, "weyl").components
    keller = tw.reference_twistor(x, xi, "keller").components
    # (-i X xi, xi) with X = x0 - x.sigma, and (i X xi, xi) with X = x0 + x.sigma
    assert np.allclose(weyl[:2], -1j * (x[0] * np.eye(2) - xdot) @ xi, atol=1e-12)
    assert np.allclose(keller[:2], 1j * (x[0] * np.eye(2) + xdot) @ xi, atol=1e-12)
    assert np.allclose(weyl[2:], xi) and np.allclose(keller[2:], xi)


def test_literal_vec_matrix_on_its_subdomain(rng):
    # with x2 = 0 the vec_matrix form is x^mu sigma_mu, so (i vec(x) xi, xi) holds in the Keller rep
    x = rng.normal(size=4)
    x[2] = 0.0
    xi = spinors(rng)
    eta = tw.reference_twistor(x, xi, "keller").components
    assert np.allclose(eta[:2], 1j * tw.vec_matrix(x) @ xi)


@given(seeds)
def test_e4_pi_lemma_weyl(seed):
    rng = np.random.default_rng(seed)
    pi = np.concatenate([np.zeros(2), spinors(rng)])
    E4 = embed_E("sec42", "weyl")[4]
    g0 = gamma_matrices("weyl").gammas[0]
    assert np.allclose(E4 @ pi, -1j * g0 @ pi, atol=1e-12)


@pytest.mark.parametrize("v", VARIANTS, ids=lambda v: v.value)
def test_null_lift(v, rng):
    xm = rng.normal(size=4)
    x = tw.NullParavector5.from_minkowski(xm, v)
    assert x.null
    assert np.allclose(x.minkowski(), xm)
    if v is Variant.WEYL:
        assert np.isclose(x.mu, 1.0)
    else:
        assert np.isclose(x.lam, 1.0)
    # x bar(x) as a matrix product
    assert np.allclose(x.matrix(v) @ x.bar_matrix(v), 0, atol=1e-12)


def test_chi_examples():
    E4 = embed_E("sec42")[4]
    assert np.allclose(tw.chi(tw.NullParavector5(0, [0, 0, 0, 0, 1])), np.eye(4))
    assert np.allclose(tw.chi(tw.NullParavector5(1, [0, 0, 0, 0, 0])), E4)


@pytest.mark.parametrize("v", VARIANTS, ids=lambda v: v.value)
def test_chi_fern_identity(v, rng):
    xm = rng.normal(size=4)
    x = tw.NullParavector5.from_minkowski(xm, v)
    rep = gamma_matrices(v)
    PL = tw.projector("L", v)
    assert np.allclose(tw.chi(x, v) @ PL, (np.eye(4) + rep.g5 @ rep.slash(xm)) @ PL, atol=1e-12)


@given(seeds, st.sampled_from(VARIANTS))
def test_ideal_equals_reference(seed, v):
    rng = np.random.default_rng(seed)
    xm = rng.uniform(-1, 1, 4)
    U = random_U(rng)
    x = tw.NullParavector5.from_minkowski(xm, v)
    t = tw.twistor_from_ideal(x, U, v)
    ref = tw.reference_twistor(xm, t.xi, v)
    assert np.abs(t.components - ref.components).max() < 1e-10
    assert np.allclose(t.components[2:], t.xi)
    assert tw.chain_defect(x, t.xi, v) < 1e-10


def test_ideal_examples(rng):
    centre = tw.NullParavector5(0, [0.5, 0, 0, 0, 0.5])
    assert centre.null
    t = tw.twistor_from_ideal(centre, np.eye(4))
    # P_L f vanishes for f selecting the first column, so xi = 0
    assert np.allclose(t.components, 0) and np.allclose(t.xi, 0)
    U = random_U(rng)
    U[2:, 0] = 0
    assert np.allclose(tw.twistor_from_ideal(tw.NullParavector5.from_minkowski(rng.normal(size=4)), U).components, 0)


def test_chain_fails_off_gauge(rng):
    # alpha0 + alpha4 != 1 breaks the step (-i x + alpha0 + alpha4) Pi = (1 - i x) Pi
    xm = rng.normal(size=4)
    x = tw.NullParavector5.from_minkowski(xm, "weyl").scaled(2.0)
    assert tw.chain_defect(x, spinors(rng), "weyl") > 1e-3


# -- incidence ---------------------------------------------------------------------

def test_incidence_self_vanishes(rng):
    for _ in range(10):
        x = random_null(rng)
        for _ in range(5):
            assert np.abs(tw.incidence(x, x, random_U(rng))).max() < 1e-9


def test_incidence_generic_nonzero(rng):
    x, y = random_null(rng), random_null(rng)
    assert np.abs(tw.incidence(x, y, np.eye(4))).max() > 1e-6


def test_incidence_linear(rng):
    x, y, U = random_null(rng), random_null(rng), random_U(rng)
    assert np.allclose(tw.incidence(x.scaled(2.0), y, U), 2 * tw.incidence(x, y, U))


def test_incidence_rejects_non_null():
    x = tw.NullParavector5(1.0, [0, 0, 0, 0, 0])
    assert not x.null
    with pytest.raises(tw.NotNull):
        tw.incidence(x, x, np.eye(4))


def test_robinson_scan(rng):
    x, y, U = random_null(rng), random_null(rng), random_U(rng)
    bad = tw.NullParavector5(1.0, [0, 0, 0, 0, 0])
    out = tw.robinson_scan(x, U, [x, x.scaled(2.0), y, bad])
    assert [o[1] for o in out[:3]] == [True, True, False]
    assert isinstance(out[3][1], tw.NotNull)
