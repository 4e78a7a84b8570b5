import json
import math
import os

import numpy as np
import pytest

from indefcrit.functionals import EnergyModel, PowerNonlinearity, SeparableDensity, make_density
from indefcrit.minimax import FlowConfig, geometry_check, saddle_solve
from indefcrit.spectral import DomainSpec, build_basis
from indefcrit.splitting import build_es_split, build_hs_split

DATA = os.path.join(os.path.dirname(__file__), "data")


@pytest.fixture(scope="session")
def oracle_values():
    with open(os.path.join(DATA, "oracle_values.json"), encoding="utf-8") as fh:
        return json.load(fh)


def es_power_model(N=32, p=4.0, q=4.0, s=1.0, t=1.0, psi_sign=-1.0):
    basis = build_basis(DomainSpec.interval(), N)
    split = build_es_split(basis, s, t)
    return EnergyModel(split, SeparableDensity(PowerNonlinearity(p), PowerNonlinearity(q)), psi_sign)


def hs_model(name="LOG_QUAD", N=8, K=7, V0=0.5, T=2 * math.pi, psi_sign=-1.0, **params):
    basis = build_basis(DomainSpec.interval(), N)
    split = build_hs_split(basis, V0, T, K)
    return EnergyModel(split, make_density(name, **params), psi_sign)


@pytest.fixture(scope="session")
def es_fixture():
    """Default elliptic fixture: POWER p = q = 4, N = 32, k in {0, 2, 4}, solved once."""
    model = es_power_model()
    cfg = FlowConfig()
    geos = {k: geometry_check(model, k, config=cfg) for k in (0, 2, 4)}
    reps = {k: saddle_solve(model, k, cfg, geometry=geos[k]) for k in (0, 2, 4)}
    return model, geos, reps


@pytest.fixture(scope="session")
def hs_fixture():
    """Hamiltonian fixture: LOG_QUAD, 8 x 8 modes, k in {0, 1, 3}, solved once."""
    model = hs_model()
    cfg = FlowConfig()
    geos = {k: geometry_check(model, k, config=cfg) for k in (0, 1, 3)}
    reps = {k: saddle_solve(model, k, cfg, geometry=geos[k]) for k in (0, 1, 3)}
    return model, geos, reps


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is not None and getattr(mod, "RESULTS", None):
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
