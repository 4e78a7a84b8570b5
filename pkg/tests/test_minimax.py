import math

import numpy as np
import pytest

from conftest import es_power_model, hs_model
from indefcrit.functionals import (
    ConcaveConvexNonlinearity,
    EnergyModel,
    SeparableDensity,
    ZeroNonlinearity,
    cerami_measure,
    eval_phi,
    grad_phi,
)
from indefcrit.minimax import (
    FlowConfig,
    _anticoercive_bound,
    _default_deltas,
    dedup_reports,
    dual_geometry_check,
    geometry_check,
    integrate_flow,
    lower_bound,
    multiplicity_sweep,
    saddle_solve,
    strong_residual,
)
from indefcrit.spectral import DomainSpec, build_basis
from indefcrit.splitting import build_es_split, galerkin_subspaces


def zero_es_model(N=16, psi_sign=-1.0):
    return EnergyModel(build_es_split(build_basis(DomainSpec.interval(), N), 1.0, 1.0), SeparableDensity(ZeroNonlinearity()), psi_sign)


# geometry ---------------------------------------------------------------


def test_es_geometry_passes(es_fixture):
    _, geos, _ = es_fixture
    for k, g in geos.items():
        assert g.passed, (k, g.reason)
        assert g.r_k < g.rho_k and g.a_k < min(0.0, g.b_k)
        assert g.a_k_bound < 0
    bks = [geos[k].b_k for k in sorted(geos)]
    assert all(a < b for a, b in zip(bks, bks[1:]))


def test_es_lower_bounds_increase():
    m = es_power_model()
    bks = [lower_bound(m, k)[1] for k in range(1, 9)]
    assert all(b > 0 for b in bks)
    assert all(a < b for a, b in zip(bks, bks[1:]))


def test_suppressed_model_fails_geometry():
    g = geometry_check(zero_es_model(), 0)
    assert not g.passed and g.reason == "a_k ≥ 0"
    assert g.a_k == pytest.approx(0.5 * g.rho_k**2, rel=1e-8)


def test_hs_geometry_passes(hs_fixture):
    _, geos, _ = hs_fixture
    for k, g in geos.items():
        assert g.passed, (k, g.reason)


@pytest.mark.parametrize("k", [0, 1, 3])
def test_hs_anticoercive_bound_on_rays(hs_fixture, rng, k):
    # Phi <= lam_max(Q/2 - delta G) |z|^2 + c_delta |Theta| on sampled X_k- rays past rho_k
    model, geos, _ = hs_fixture
    g = geos[k]
    idx, _ = galerkin_subspaces(model.split, k)
    deltas = _default_deltas(model, k)
    bounds = []
    for scale in (1.0, 2.0, 4.0, 8.0):
        rho = scale * g.rho_k
        bound, _ = _anticoercive_bound(model, idx, rho, deltas)
        bounds.append(bound)
        for _ in range(20):
            c = np.zeros(model.dim)
            c[idx] = rng.standard_normal(idx.size)
            c *= rho / np.linalg.norm(c)
            assert model.phi_c(c) <= bound + 1e-9 * abs(bound)
    assert bounds[-1] < 0
    assert bounds[-1] < bounds[0]


# flow -------------------------------------------------------------------


def test_flow_monotone_power(rng):
    m = es_power_model(N=16)
    cfg = FlowConfig(max_iter=200)
    for _ in range(20):
        z = m.split.from_split(rng.standard_normal(m.dim))
        tr = integrate_flow(m, z, cfg)
        assert np.all(np.diff(tr.phi) < 0)
        assert tr.phi[0] == pytest.approx(eval_phi(m, z), rel=1e-14)


def test_flow_odd_symmetry(rng):
    m = es_power_model(N=16)
    cfg = FlowConfig(max_iter=200)
    for _ in range(5):
        z = m.split.from_split(rng.standard_normal(m.dim))
        a, b = integrate_flow(m, z, cfg), integrate_flow(m, -z, cfg)
        assert a.points.shape == b.points.shape
        np.testing.assert_allclose(a.points, -b.points, atol=1e-10)
        np.testing.assert_array_equal(a.phi, b.phi)


def test_flow_suppressed_model_decays_to_zero():
    m = zero_es_model()
    z = m.split.direction(0)
    tr = integrate_flow(m, z, FlowConfig())
    assert tr.phi[0] == pytest.approx(0.5)
    assert np.all(np.diff(tr.phi) < 0)
    assert tr.phi[-1] < 1e-6
    # Phi drops at rate 2 along the exact flow
    i = min(5, tr.phi.size - 1)
    assert (tr.phi[0] - tr.phi[i]) / tr.times[i] == pytest.approx(2.0, rel=1e-6)


def test_flow_level_target():
    m = es_power_model(N=16)
    z = 3.0 * m.split.direction(0)
    tr = integrate_flow(m, z, FlowConfig(), level_target=-5.0)
    assert tr.status == "level" and tr.phi[-1] <= -5.0


def test_flow_rejects_nonfinite():
    m = es_power_model(N=8)
    z = np.full(m.split.D.shape[0], np.nan)
    with pytest.raises(ValueError):
        integrate_flow(m, z)


def test_flow_config_validation():
    with pytest.raises(ValueError):
        FlowConfig(step=0.0)
    with pytest.raises(ValueError):
        FlowConfig(max_iter=0)


# saddle search ----------------------------------------------------------


def test_ground_level_matches_shooting(es_fixture, oracle_values):
    _, _, reps = es_fixture
    rep = reps[0]
    assert rep.converged
    ref = oracle_values["es_power4_levels"]["k0"]
    assert abs(rep.level - ref) <= 0.01 * ref
    assert abs(rep.level - ref) <= 1e-8 * ref


@pytest.mark.parametrize("k", [2, 4])
def test_excited_levels_match_scaled_oracle(es_fixture, oracle_values, k):
    _, _, reps = es_fixture
    ref = oracle_values["es_power4_levels"][f"k{k}"]
    assert reps[k].converged
    assert reps[k].level == pytest.approx(ref, rel=1e-5)


def test_levels_above_lower_bounds(es_fixture, hs_fixture):
    for _, geos, reps in (es_fixture, hs_fixture):
        for k, rep in reps.items():
            assert rep.converged
            assert rep.level >= geos[k].b_k - 1e-8
            assert rep.sandwich_ok
            assert rep.cerami <= FlowConfig().cerami_tol
            assert cerami_measure(_model_of(es_fixture, hs_fixture, rep), rep.z) <= 1e-8


def _model_of(es_fixture, hs_fixture, rep):
    return es_fixture[0] if rep.z.size == es_fixture[0].split.D.shape[0] else hs_fixture[0]


def test_mirror_start_gives_antipode(es_fixture):
    model, geos, reps = es_fixture
    mir = saddle_solve(model, 0, FlowConfig(), mirror=True, geometry=geos[0])
    assert mir.converged
    assert mir.level == pytest.approx(reps[0].level, rel=1e-12)
    np.testing.assert_allclose(mir.z, -reps[0].z, atol=1e-8)


def test_multiplicity_and_partners(es_fixture):
    model, _, reps = es_fixture
    levels = [reps[k].level for k in (0, 2, 4)]
    assert all(a < b for a, b in zip(levels, levels[1:]))
    assert len(dedup_reports(list(reps.values()))) == 3
    for rep in reps.values():
        assert rep.level > 0 and np.linalg.norm(rep.z) > 0
        assert eval_phi(model, -rep.z) == pytest.approx(rep.level, rel=1e-14)
        assert cerami_measure(model, -rep.z) == pytest.approx(cerami_measure(model, rep.z), rel=1e-12, abs=1e-15)


def test_hs_distinct_nontrivial(hs_fixture):
    model, _, reps = hs_fixture
    distinct = dedup_reports([r for r in reps.values() if r.converged and r.level > 0])
    assert len(distinct) >= 2
    for rep in distinct:
        assert model.l2_norm_c(model.split.to_split(rep.z)) > 0.1


def test_multiplicity_sweep_small():
    m = es_power_model(N=16)
    reports, distinct = multiplicity_sweep(m, [0, 1], FlowConfig())
    assert [r.k for r in reports] == [0, 1]
    assert len(distinct) == 2 and distinct[0].level < distinct[1].level


def test_strong_residual(es_fixture, rng):
    model, _, reps = es_fixture
    ru, rv = reps[0].residuals
    assert ru <= 1e-3 and rv <= 1e-3
    assert strong_residual(model, np.zeros(model.split.D.shape[0])) == (0.0, 0.0)
    junk = rng.standard_normal(model.split.D.shape[0]) / (1 + np.arange(model.split.D.shape[0]) % 32) ** 2
    assert min(strong_residual(model, junk)) > 0.1


def test_strong_residual_rejects_hs(hs_fixture):
    model, _, reps = hs_fixture
    with pytest.raises(ValueError):
        strong_residual(model, reps[0].z)


def test_report_serialisable(es_fixture):
    _, geos, reps = es_fixture
    d = reps[0].to_dict()
    assert d["converged"] and isinstance(d["z"], list)
    assert geos[0].to_dict()["reason"] == "ok"


# dual quantities --------------------------------------------------------


def test_dual_requires_flipped_sign():
    with pytest.raises(ValueError):
        dual_geometry_check(zero_es_model(), 0, 1.0, 0.5)
    with pytest.raises(ValueError):
        dual_geometry_check(zero_es_model(psi_sign=1.0), 0, 0.5, 1.0)


def test_dual_suppressed_model_literal_values():
    # X_k- contains e_k, so sup on its r_k sphere of the pure quadratic is +r_k^2 / 2
    m = zero_es_model(psi_sign=1.0)
    rep = dual_geometry_check(m, 2, rho_k=1.0, r_k=0.5)
    assert rep.b_upper == pytest.approx(0.125, rel=1e-10)
    assert rep.a_upper == pytest.approx(0.5, rel=1e-10)
    assert rep.a_upper <= rep.sup_on_plus_sphere + 1e-12


def test_dual_concave_model_d_increases_to_zero():
    sp = build_es_split(build_basis(DomainSpec.interval(), 16), 1.0, 1.0)
    m = EnergyModel(sp, SeparableDensity(ConcaveConvexNonlinearity(4.0, 1.5, 1.0)), 1.0)
    reps = [dual_geometry_check(m, k, rho_k=0.5, r_k=0.1) for k in range(6)]
    d = [r.d_upper for r in reps]
    assert all(x <= 0 for x in d)
    assert all(a <= b for a, b in zip(d, d[1:]))
    assert d[-1] > -1e-3 * abs(d[0])
    for r in reps:
        assert r.a_upper <= r.sup_on_plus_sphere
