import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from indefcrit.functionals import EnergyModel, ZeroDensity
from indefcrit.oracle import dense_operator_check
from indefcrit.spectral import DomainSpec, build_basis
from indefcrit.splitting import (
    TauWeights,
    build_es_split,
    build_hs_split,
    galerkin_subspaces,
    project_pm,
    split_norm,
    tau_norm,
)

BASIS8 = build_basis(DomainSpec.interval(), 8)
SPLITS = {
    "es_equal": build_es_split(BASIS8, 1.0, 1.0),
    "es_unequal": build_es_split(BASIS8, 1.2, 0.8),
    "hs": build_hs_split(BASIS8, 0.5, 2 * math.pi, 3),
    "hs_negative": build_hs_split(BASIS8, -2.5, 2 * math.pi, 3),
}


def test_es_projection_of_first_mode():
    sp = SPLITS["es_equal"]
    N = 8
    z = np.zeros(2 * N)
    z[0] = 1.0
    zp, zm = project_pm(sp, z)
    np.testing.assert_allclose(zp[[0, N]], [0.5, 0.5], atol=1e-15)
    np.testing.assert_allclose(zm[[0, N]], [0.5, -0.5], atol=1e-15)
    assert np.count_nonzero(np.abs(zp) > 1e-15) == 2


def test_es_unequal_exponents_projection():
    sp = SPLITS["es_unequal"]
    N = 8
    z = np.zeros(2 * N)
    z[1] = 1.0
    zp, _ = project_pm(sp, z)
    assert zp[1] == pytest.approx(0.5, abs=1e-15)
    assert zp[N + 1] == pytest.approx(0.5 * 4.0**0.2, rel=1e-14)


@pytest.mark.parametrize("name", sorted(SPLITS))
def test_projector_identities(name, rng):
    sp = SPLITS[name]
    G = sp.metric
    for _ in range(100):
        z = rng.standard_normal(sp.D.shape[0])
        zp, zm = project_pm(sp, z)
        scale = 1.0 + float(z @ G @ z)
        assert np.max(np.abs(zp + zm - z)) <= 1e-13
        pp, pm = project_pm(sp, zp)
        mp, mm = project_pm(sp, zm)
        assert np.max(np.abs(pp - zp)) <= 1e-13 * math.sqrt(scale)
        assert np.max(np.abs(pm)) <= 1e-13 * math.sqrt(scale)
        assert np.max(np.abs(mp)) <= 1e-13 * math.sqrt(scale)
        assert abs(float(zp @ G @ zm)) <= 1e-12 * scale
        pyth = float(z @ G @ z) - float(zp @ G @ zp) - float(zm @ G @ zm)
        assert abs(pyth) <= 1e-12 * scale


@pytest.mark.parametrize("name", ["es_equal", "hs", "hs_negative"])
def test_l2_orthogonality_of_splitting(name):
    model = EnergyModel(SPLITS[name], ZeroDensity())
    gram = model.l2_gram()
    n = SPLITS[name].n_plus
    assert np.max(np.abs(gram[:n, n:])) <= 1e-12


def test_l2_orthogonality_fails_for_unequal_exponents():
    # only the metric orthogonality survives when s != t
    model = EnergyModel(SPLITS["es_unequal"], ZeroDensity())
    n = SPLITS["es_unequal"].n_plus
    assert np.max(np.abs(model.l2_gram()[:n, n:])) > 1e-3


def test_plus_span_has_no_minus_part(rng):
    sp = SPLITS["hs"]
    c = np.zeros(sp.dim)
    c[: sp.n_plus] = rng.standard_normal(sp.n_plus)
    _, zm = project_pm(sp, sp.from_split(c))
    assert np.max(np.abs(zm)) <= 1e-14


@pytest.mark.parametrize("name", sorted(SPLITS))
def test_coordinate_round_trip(name, rng):
    sp = SPLITS[name]
    np.testing.assert_allclose(sp.Dinv @ sp.D, np.eye(sp.dim), atol=1e-12)
    z = rng.standard_normal(sp.D.shape[0])
    np.testing.assert_allclose(sp.from_split(sp.to_split(z)), z, atol=1e-12)
    assert split_norm(sp, z) == pytest.approx(math.sqrt(float(z @ sp.metric @ z)), rel=1e-12)


@pytest.mark.parametrize("name", sorted(SPLITS))
def test_quadratic_form_diagonalises(name):
    rep = dense_operator_check(SPLITS[name])
    assert rep["form_residual"] <= 1e-10
    assert rep["max_mismatch_formula"] <= 1e-10
    assert rep["min_abs_eigenvalue"] > 0


def test_hs_block_examples():
    sp = build_hs_split(BASIS8, 0.0, 2 * math.pi, 1)
    # mode j = 1 is index 0; temporal k = 0 gives +-1, k = 1 gives +-sqrt(2)
    plus_00 = [sp.signs[i] * sp.weights_mu[i] for i, l in enumerate(sp.labels) if l == (0, 0, 0)]
    plus_01 = [sp.signs[i] * sp.weights_mu[i] for i, l in enumerate(sp.labels) if l[:2] == (0, 1)]
    assert sorted(plus_00) == pytest.approx([-1.0, 1.0], abs=1e-14)
    assert sorted(plus_01) == pytest.approx([-math.sqrt(2)] * 2 + [math.sqrt(2)] * 2, abs=1e-14)


def test_hs_spectral_law_8x8():
    sp = build_hs_split(BASIS8, 0.0, 2 * math.pi, 7)
    rep = dense_operator_check(sp)
    assert rep["max_mismatch_formula"] <= 1e-10
    assert rep["max_mismatch_split"] <= 1e-10


def test_negative_shift_moves_lowest_mode():
    pos, neg = build_hs_split(BASIS8, 0.0, 2 * math.pi, 0), build_hs_split(BASIS8, -2.5, 2 * math.pi, 0)

    def plus_dir(sp, j):
        i = [n for n, lbl in enumerate(sp.labels[: sp.n_plus]) if lbl == (j, 0, 0)][0]
        col = sp.D[:, i]
        return np.sign(col[j] * col[sp.n_raw + j])

    # lambda = 1 turns negative under V0 = -2.5; lambda = 4 stays positive
    assert plus_dir(pos, 0) == 1 and plus_dir(neg, 0) == -1
    assert plus_dir(pos, 1) == 1 and plus_dir(neg, 1) == 1


def test_hs_rejects_resonant_shift():
    with pytest.raises(ValueError, match="V2"):
        build_hs_split(BASIS8, -1.0, 2 * math.pi, 2)
    with pytest.raises(ValueError, match="V2"):
        build_hs_split(BASIS8, -4.0, 2 * math.pi, 2)


def test_es_rejects_bad_exponents():
    for s, t in ((1.5, 1.5), (0.8, 1.2), (2.0, 0.0)):
        with pytest.raises(ValueError):
            build_es_split(BASIS8, s, t)


def test_tau_norm_examples(rng):
    sp = SPLITS["hs"]
    a0 = sp.direction(sp.n_plus)
    assert tau_norm(sp, None, a0) == pytest.approx(0.5, abs=1e-14)
    c = np.zeros(sp.dim)
    c[: sp.n_plus] = rng.standard_normal(sp.n_plus)
    z = sp.from_split(c)
    assert tau_norm(sp, TauWeights.default(sp), z) == pytest.approx(split_norm(sp, z), rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(c=arrays(np.float64, SPLITS["es_equal"].dim, elements=st.floats(-1e3, 1e3).filter(lambda x: x == 0 or abs(x) > 1e-100)))
def test_tau_norm_dominated_by_norm(c):
    sp = SPLITS["es_equal"]
    z = sp.from_split(c)
    assert tau_norm(sp, None, z) <= float(np.linalg.norm(c)) * (1 + 1e-12) + 1e-300


def test_galerkin_subspaces():
    sp = SPLITS["es_equal"]
    minus, plus = galerkin_subspaces(sp, 0)
    assert list(minus) == [0] + list(range(sp.n_plus, sp.dim))
    for k in range(sp.n_plus):
        minus, plus = galerkin_subspaces(sp, k)
        assert minus.size + plus.size == sp.dim + 1
        assert set(minus) & set(plus) == {k}
    with pytest.raises(ValueError):
        galerkin_subspaces(sp, sp.n_plus)


def test_es_e_order_follows_eigenvalues():
    sp = SPLITS["es_equal"]
    assert [lbl[0] for lbl in sp.labels[: sp.n_plus]] == list(range(8))
    assert dense_operator_check(sp)["plus_mode_order"] == list(range(8))
    assert np.all(np.diff(sp.weights_mu[: sp.n_plus]) > 0)
