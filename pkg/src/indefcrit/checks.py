"""Property groups run by the ``check`` subcommand.

Each group returns ``{"passed": bool, ...details}``.  The mutation hook
``es_projector_sign`` flips the sign of the ``A^(t-s) v`` term in the X+
projector so the projector group can be seen to fail.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .functionals import (
    EnergyModel,
    LogPowerNonlinearity,
    LogQuadDensity,
    PowerNonlinearity,
    RadialPowerDensity,
    SeparableDensity,
    check_growth,
    grad_phi,
    liu_inequality,
)
from .oracle import dense_operator_check, fd_gradient
from .spectral import DomainSpec, build_basis
from .splitting import build_es_split, build_hs_split, project_pm

__all__ = ["run_checks", "mutate_split", "GROUPS"]


def mutate_split(split, mutation):
    if mutation in (None, "none"):
        return split
    if mutation != "es_projector_sign":
        raise ValueError(f"unknown mutation {mutation!r}")
    if split.problem != "ES":
        raise ValueError("es_projector_sign applies to the elliptic split")
    Dinv = split.Dinv.copy()
    n = split.n_raw
    Dinv[split.plus, n:] *= -1.0
    return dataclasses.replace(split, Dinv=Dinv)


def _projector_group(mutation, seed):
    rng = np.random.default_rng(seed)
    basis = build_basis(DomainSpec.interval(), 8)
    worst = {"sum": 0.0, "idempotent": 0.0, "cross": 0.0, "orthogonal": 0.0, "pythagoras": 0.0}
    for s, t in ((1.0, 1.0), (1.2, 0.8)):
        split = mutate_split(build_es_split(basis, s, t), mutation)
        for _ in range(100):
            z = rng.standard_normal(split.D.shape[0])
            zp, zm = project_pm(split, z)
            zpp, zpm = project_pm(split, zp)
            G = split.metric
            scale = 1.0 + float(z @ G @ z)
            worst["sum"] = max(worst["sum"], float(np.max(np.abs(zp + zm - z))))
            worst["idempotent"] = max(worst["idempotent"], float(np.max(np.abs(zpp - zp))) / math.sqrt(scale))
            worst["cross"] = max(worst["cross"], float(np.max(np.abs(zpm))) / math.sqrt(scale))
            worst["orthogonal"] = max(worst["orthogonal"], abs(float(zp @ G @ zm)) / scale)
            pyth = float(z @ G @ z) - float(zp @ G @ zp) - float(zm @ G @ zm)
            worst["pythagoras"] = max(worst["pythagoras"], abs(pyth) / scale)
    passed = worst["sum"] <= 1e-13 and all(worst[k] <= 1e-12 for k in ("idempotent", "cross", "orthogonal", "pythagoras"))
    return {"passed": bool(passed), **worst}


def _spectrum_group():
    basis = build_basis(DomainSpec.interval(), 8)
    out = {}
    ok = True
    for V0 in (0.0, -2.5):
        rep = dense_operator_check(build_hs_split(basis, V0, 2 * math.pi, 7))
        out[f"V0={V0}"] = {"mismatch": rep["max_mismatch_formula"], "min_abs": rep["min_abs_eigenvalue"]}
        ok &= rep["max_mismatch_formula"] <= 1e-10 and rep["min_abs_eigenvalue"] > 0
    rep = dense_operator_check(build_es_split(basis, 1.2, 0.8))
    out["ES"] = {"mismatch": rep["max_mismatch_formula"], "form": rep["form_residual"]}
    ok &= rep["max_mismatch_formula"] <= 1e-10 and rep["form_residual"] <= 1e-10
    return {"passed": bool(ok), **out}


def gradient_models(N=8, K=2):
    basis = build_basis(DomainSpec.interval(), N)
    es = build_es_split(basis, 1.0, 1.0)
    hs = build_hs_split(basis, 0.5, 2 * math.pi, K)
    return {
        "ES_POWER": EnergyModel(es, SeparableDensity(PowerNonlinearity(4), PowerNonlinearity(4))),
        "ES_LOG_POWER": EnergyModel(es, SeparableDensity(LogPowerNonlinearity())),
        "HS_POWER": EnergyModel(hs, RadialPowerDensity(4)),
        "HS_LOG_QUAD": EnergyModel(hs, LogQuadDensity()),
    }


def directional_errors(model, rng, n_points=50, h=1e-5, scale=0.5):
    """Relative errors of <grad, w> against central differences of Phi."""
    errs = []
    for _ in range(n_points):
        c = scale * rng.standard_normal(model.dim)
        w = rng.standard_normal(model.dim)
        w /= np.linalg.norm(w)
        exact = float(np.dot(model.grad_c(c), w))
        fd = (model.phi_c(c + h * w) - model.phi_c(c - h * w)) / (2 * h)
        errs.append(abs(exact - fd) / (1.0 + abs(exact)))
    return np.array(errs)


def _gradient_group(seed):
    rng = np.random.default_rng(seed)
    out = {}
    ok = True
    for name, model in gradient_models().items():
        err = float(directional_errors(model, rng).max())
        z = model.split.from_split(0.3 * rng.standard_normal(model.dim))
        full = fd_gradient(model, z)
        g = grad_phi(model, z)
        cerr = float(np.linalg.norm(model.split.to_split(full - g)) / (1 + np.linalg.norm(model.split.to_split(g))))
        out[name] = {"directional": err, "coordinate": cerr}
        ok &= err <= 1e-6 and cerr <= 1e-6
    return {"passed": bool(ok), **out}


def _liu_group(seed, n=100_000):
    rng = np.random.default_rng(seed)
    out = {}
    ok = True
    for name, nl in (("POWER3", PowerNonlinearity(3)), ("POWER4", PowerNonlinearity(4)), ("LOG_POWER", LogPowerNonlinearity())):
        u = rng.standard_normal(n) * np.exp(rng.uniform(-3, 3, n))
        v = rng.standard_normal(n) * np.exp(rng.uniform(-3, 3, n))
        s = rng.uniform(-1.0, 5.0, n)
        val = float(np.max(liu_inequality(nl, u, v, s)))
        out[name] = {"max": val}
        ok &= val <= 1e-12
    return {"passed": bool(ok), **out}


def _growth_group(seed):
    out = {}
    ok = True
    for model in (RadialPowerDensity(4), LogQuadDensity(), PowerNonlinearity(3), PowerNonlinearity(4), LogPowerNonlinearity()):
        rep = check_growth(model, n_samples=100_000, seed=seed)
        key = f"{model.name}"
        if hasattr(model, "p"):
            key += f"_{model.p:g}"
        elif hasattr(model, "mu"):
            key += f"_{model.mu:g}"
        out[key] = {
            "passed": rep.passed,
            "failures": rep.failures(),
            "sigma": model.sigma,
            "R": model.R,
            "a1_tight": rep.checks["H4_1"]["a1_tight"],
            "a2_tight": rep.checks["H4_2"]["a2_tight"],
        }
        ok &= rep.passed
    return {"passed": bool(ok), **out}


GROUPS = ("projector", "spectrum", "gradient", "liu", "growth")


def run_checks(mutation="none", seed=0, groups=GROUPS):
    results = {}
    for g in groups:
        if g == "projector":
            results[g] = _projector_group(mutation, seed)
        elif g == "spectrum":
            results[g] = _spectrum_group()
        elif g == "gradient":
            results[g] = _gradient_group(seed)
        elif g == "liu":
            results[g] = _liu_group(seed)
        elif g == "growth":
            results[g] = _growth_group(seed)
        else:
            raise ValueError(f"unknown check group {g!r}")
    return results
