import ast
import math
import os

import numpy as np
import pytest

from conftest import hs_model
from indefcrit import oracle
from indefcrit.checks import gradient_models
from indefcrit.functionals import EnergyModel, QuadraticDensity, grad_phi
from indefcrit.oracle import brute_embedding, dense_operator_check, fd_gradient, shooting_ground_state
from indefcrit.spectral import DomainSpec, build_basis, embedding_constant
from indefcrit.splitting import build_hs_split


def test_shooting_ground_state(oracle_values):
    res = shooting_ground_state(4.0, math.pi)
    ref = oracle_values["shooting_p4_pi"]
    assert res.energy == pytest.approx(ref["energy"], rel=1e-10)
    assert res.boundary_residual <= 1e-10
    assert abs(res.u[0]) <= 1e-10 and np.all(res.u[1:-1] > 0)


def test_shooting_scaling_law():
    # u_{2 pi}(x) = u_pi(x / 2) / 2 for the cubic equation; the action scales by 1/8
    a = shooting_ground_state(4.0, math.pi)
    b = shooting_ground_state(4.0, 2 * math.pi)
    assert b.slope == pytest.approx(a.slope / 4.0, rel=1e-9)
    assert b.energy == pytest.approx(a.energy / 8.0, rel=1e-9)
    np.testing.assert_allclose(b.u, a.u / 2.0, atol=1e-9)


def test_shooting_rejects_linear_case():
    with pytest.raises(ValueError):
        shooting_ground_state(2.0, math.pi)


def test_frozen_scaling_ratio(oracle_values):
    assert oracle_values["shooting_p4_pi_over_3"]["ratio_to_pi"] == pytest.approx(27.0, rel=1e-9)


@pytest.mark.parametrize("name", sorted(gradient_models()))
def test_fd_gradient_matches(name, rng):
    m = gradient_models()[name]
    z = m.split.from_split(0.3 * rng.standard_normal(m.dim))
    fd = m.split.to_split(fd_gradient(m, z))
    ex = m.split.to_split(grad_phi(m, z))
    assert np.linalg.norm(fd - ex) <= 1e-6 * (1 + np.linalg.norm(ex))
    assert np.all(fd_gradient(m, np.zeros_like(z)) == 0.0)


def test_fd_gradient_exact_for_quadratic(rng):
    sp = hs_model(N=4, K=2).split
    m = EnergyModel(sp, QuadraticDensity())
    z = sp.from_split(rng.standard_normal(sp.dim))
    fd = sp.to_split(fd_gradient(m, z))
    ex = sp.to_split(grad_phi(m, z))
    assert np.max(np.abs(fd - ex)) <= 1e-10 * (1 + np.max(np.abs(ex)))


def test_dense_operator_check_8x8():
    rep = dense_operator_check(build_hs_split(build_basis(DomainSpec.interval(), 8), 0.0, 2 * math.pi, 7))
    assert rep["max_mismatch_formula"] <= 1e-10
    assert rep["min_abs_eigenvalue"] > 0


def test_dense_operator_check_rejects_resonance():
    sp = build_hs_split(build_basis(DomainSpec.interval(), 4), 0.5, 2 * math.pi, 2)
    bad = type(sp).__new__(type(sp))
    object.__setattr__(bad, "__dict__", {**sp.__dict__, "params": {**sp.params, "V0": -1.0}})
    with pytest.raises(ValueError, match="V2"):
        dense_operator_check(bad)


def test_brute_embedding_lower_bound(rng):
    b = build_basis(DomainSpec.interval(), 12)
    for k in (0, 3, 8):
        assert brute_embedding(b, 1.0, 4.0, k, seed=k) <= embedding_constant(b, 1.0, 4.0, k)[0] * (1 + 1e-12)
    last = b.size - 1
    phi = b.phi[last]
    exact = float(np.dot(b.weights, phi**4)) ** 0.25 / math.sqrt(b.eigenvalues[last])
    assert brute_embedding(b, 1.0, 4.0, last) == pytest.approx(exact, rel=1e-12)


def test_oracle_independence():
    # the oracle may not import the fractional arithmetic or the solver
    src = open(oracle.__file__, encoding="utf-8").read()
    imported = set()
    for node in ast.walk(ast.parse(src)):
        if isinstance(node, ast.ImportFrom):
            imported.add(node.module or "")
            imported.update(f"{node.module}.{a.name}" for a in node.names)
    assert not any("minimax" in m for m in imported)
    assert not any(m.endswith(("apply_fractional", "es_inner", "es_norm", "embedding_constant")) for m in imported)


def test_frozen_constants_carry_provenance(oracle_values):
    for key, entry in oracle_values.items():
        if key != "provenance":
            assert "method" in entry
    assert os.path.exists(os.path.join(os.path.dirname(__file__), "data", "generate_oracle.py"))
