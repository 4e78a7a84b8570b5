"""Nonlinearity catalogue and energy assembly.

The energy is ``Phi(z) = 0.5*|z+|^2 - 0.5*|z-|^2 - Psi(z)`` with
``Psi(z) = integral of H(z)`` over the quadrature grid.  For the elliptic
system ``H(u, v) = F(u) + G(v)``; for the Hamiltonian system ``H`` is a radial
function of ``z = (u, v)``.

``EnergyModel`` works in split coordinates internally: the metric gradient
is ``sign * c - B @ (w * H_z)`` where ``B`` holds the split directions on the
grid, which is the Galerkin form of the derivative pairing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .splitting import SplitSpace

__all__ = [
    "ScalarNonlinearity",
    "PowerNonlinearity",
    "LogPowerNonlinearity",
    "ConcaveConvexNonlinearity",
    "ZeroNonlinearity",
    "Density",
    "SeparableDensity",
    "RadialPowerDensity",
    "LogQuadDensity",
    "QuadraticDensity",
    "ZeroDensity",
    "EnergyModel",
    "eval_phi",
    "grad_phi",
    "h_tilde",
    "cerami_measure",
    "check_growth",
    "GrowthReport",
    "liu_inequality",
    "make_scalar",
    "make_density",
    "envelope_constant",
    "quadratic_deficit",
]

_SLACK = 1e-12


# ---------------------------------------------------------------------------
# scalar nonlinearities f, F = int_0^u f
# ---------------------------------------------------------------------------


class ScalarNonlinearity:
    """Odd scalar nonlinearity ``f`` with primitive ``F``.

    ``growth`` is the exponent ``p`` of ``|f| <= C (1 + |u|^(p-1))`` and
    ``sigma, a1, a2, R`` are the catalogued superquadratic constants used by
    the growth certificate.
    """

    name = "scalar"
    growth: float = 4.0
    sigma: float = 2.0
    a1: float = 0.0
    a2: float = math.inf
    R: float = 1.0
    satisfies_assumptions = True

    def evaluate(self, u):
        """Return ``(F(u), f(u), f'(u))``."""
        raise NotImplementedError

    def F(self, u):
        return self.evaluate(np.asarray(u, dtype=float))[0]

    def f(self, u):
        return self.evaluate(np.asarray(u, dtype=float))[1]

    def params(self):
        return {}

    def describe(self):
        return {"name": self.name, **self.params()}


def _flat(fn, u):
    u = np.asarray(u, dtype=float)
    out = fn(np.ascontiguousarray(u.ravel()))
    return tuple(o.reshape(u.shape) for o in out)


class PowerNonlinearity(ScalarNonlinearity):
    """``f(u) = |u|^(p-2) u``, ``F = |u|^p / p``."""

    name = "POWER"

    def __init__(self, p: float):
        if p <= 2:
            raise ValueError("POWER needs p > 2")
        self.p = float(p)
        self.growth = self.p
        # H~ = (1/2 - 1/p)|u|^p >= a1 |u|^2 on |u| >= R=1;
        # (|f|/|u|)^sigma = |u|^(sigma(p-2)) <= a2 H~ for sigma = p/(p-2)
        self.R = 1.0
        self.a1 = 0.5 - 1.0 / self.p
        self.sigma = self.p / (self.p - 2.0)
        self.a2 = 1.0 / (0.5 - 1.0 / self.p)
        self.envelope = (1.0 / self.p, 0.0)

    def evaluate(self, u):
        return _flat(lambda x: K.scalar_power(x, self.p), u)

    def params(self):
        return {"p": self.p}


class LogPowerNonlinearity(ScalarNonlinearity):
    """``f(u) = u log(1 + |u|)``: superquadratic without the (AR) condition."""

    name = "LOG_POWER"

    def __init__(self, growth: float = 3.0):
        self.growth = float(growth)
        self.R = 1.0
        # H~ = u^2 log(1+|u|)/2 - F; min of H~/u^2 over |u| >= 1 sits at |u| = 1
        Fu, fu, _ = self.evaluate(np.array([1.0]))
        self.a1 = float(0.5 * fu[0] - Fu[0]) * (1 - 1e-9)
        self.sigma = 2.0
        self.a2 = 6.0
        # F(u) <= C_F |u|^growth (no additive constant); sup F/|u|^p on a log grid
        r = np.logspace(-6, 8, 4001)
        ratio = self.evaluate(r)[0] / r**self.growth
        self.envelope = (float(ratio.max()) * (1 + 1e-6), 0.0)

    def evaluate(self, u):
        return _flat(K.scalar_logpower, u)

    def params(self):
        return {"growth": self.growth}


class ConcaveConvexNonlinearity(ScalarNonlinearity):
    """``f(u) = |u|^(p-2) u - lam |u|^(q-2) u`` with ``1 < q < 2 < p``.

    Test model for the dual geometry evaluator only; it violates the
    superquadratic assumptions near zero.
    """

    name = "CONCAVE_CONVEX"
    satisfies_assumptions = False

    def __init__(self, p: float = 4.0, q: float = 1.5, lam: float = 1.0):
        if not (1 < q < 2 < p):
            raise ValueError("need 1 < q < 2 < p")
        self.p, self.q, self.lam = float(p), float(q), float(lam)
        self.growth = self.p

    def evaluate(self, u):
        u = np.asarray(u, dtype=float)
        a = np.abs(u)
        aq = np.where(a > 0, a ** (self.q - 2.0 + (a == 0)), 0.0)
        F = a**self.p / self.p - self.lam * a**self.q / self.q
        f = a ** (self.p - 2.0) * u - self.lam * aq * u
        df = (self.p - 1.0) * a ** (self.p - 2.0) - self.lam * (self.q - 1.0) * aq
        return F, f, df

    def params(self):
        return {"p": self.p, "q": self.q, "lam": self.lam}


class ZeroNonlinearity(ScalarNonlinearity):
    """``f = 0``: suppresses the nonlinear part (debug and negative controls)."""

    name = "ZERO"
    satisfies_assumptions = False
    envelope = (0.0, 0.0)

    def evaluate(self, u):
        z = np.zeros_like(np.asarray(u, dtype=float))
        return z, z.copy(), z.copy()


def make_scalar(name: str, **params) -> ScalarNonlinearity:
    name = name.upper()
    if name == "POWER":
        return PowerNonlinearity(params.get("p", 4.0))
    if name == "LOG_POWER":
        return LogPowerNonlinearity(params.get("growth", 3.0))
    if name == "ZERO":
        return ZeroNonlinearity()
    if name == "CONCAVE_CONVEX":
        return ConcaveConvexNonlinearity(params.get("p", 4.0), params.get("q", 1.5), params.get("lam", 1.0))
    raise ValueError(f"unknown scalar nonlinearity {name!r}")


# ---------------------------------------------------------------------------
# densities H(u, v) on R^2
# ---------------------------------------------------------------------------


class Density:
    """Pointwise density ``H(u, v)`` with gradient and Hessian."""

    name = "density"
    radial = False
    sigma: float = 2.0
    a1: float = 0.0
    a2: float = math.inf
    R: float = 1.0

    def grad(self, u, v):
        """Return ``(H, H_u, H_v)``."""
        raise NotImplementedError

    def hess(self, u, v):
        """Return ``(H_uu, H_uv, H_vv)``."""
        raise NotImplementedError

    def value(self, u, v):
        return self.grad(u, v)[0]

    def h_tilde(self, u, v):
        h, hu, hv = self.grad(u, v)
        return 0.5 * (hu * u + hv * v) - h

    def describe(self):
        return {"name": self.name}


class SeparableDensity(Density):
    """``H(u, v) = F(u) + G(v)`` for the elliptic system."""

    name = "SEPARABLE"

    def __init__(self, f: ScalarNonlinearity, g: ScalarNonlinearity | None = None):
        self.f = f
        self.g = g if g is not None else f

    def grad(self, u, v):
        Fu, fu, _ = self.f.evaluate(u)
        Gv, gv, _ = self.g.evaluate(v)
        return Fu + Gv, fu, gv

    def hess(self, u, v):
        dfu = self.f.evaluate(u)[2]
        dgv = self.g.evaluate(v)[2]
        return dfu, np.zeros_like(dfu), dgv

    def describe(self):
        return {"name": self.name, "f": self.f.describe(), "g": self.g.describe()}


class RadialPowerDensity(Density):
    """``H(z) = |z|^mu / mu``, ``mu > 2``; satisfies (AR)."""

    name = "POWER"
    radial = True

    def __init__(self, mu: float = 4.0):
        if mu <= 2:
            raise ValueError("POWER needs mu > 2")
        self.mu = float(mu)
        self.R = 1.0
        self.a1 = 0.5 - 1.0 / self.mu
        self.sigma = self.mu / (self.mu - 2.0)
        self.a2 = 1.0 / (0.5 - 1.0 / self.mu)

    def grad(self, u, v):
        u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
        return _flat2(lambda a, b: K.radial_power(a, b, self.mu), u, v)

    def hess(self, u, v):
        u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
        return _flat2(lambda a, b: K.radial_power_hess(a, b, self.mu), u, v)

    def h_tilde(self, u, v):
        r = np.hypot(u, v)
        return (0.5 - 1.0 / self.mu) * r**self.mu

    def describe(self):
        return {"name": self.name, "mu": self.mu}


class LogQuadDensity(Density):
    """``H(z) = |z|^2 log(1 + |z|)``: superquadratic, (AR) fails."""

    name = "LOG_QUAD"
    radial = True

    def __init__(self, sigma: float = 2.0, R: float = 1.0, a2: float = 15.0):
        self.sigma = float(sigma)
        self.R = float(R)
        self.a1 = self.R / (2.0 * (1.0 + self.R))
        self.a2 = float(a2)

    def grad(self, u, v):
        u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
        return _flat2(K.radial_logquad, u, v)

    def hess(self, u, v):
        u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
        return _flat2(K.radial_logquad_hess, u, v)

    def h_tilde(self, u, v):
        r = np.hypot(u, v)
        return r**3 / (2.0 * (1.0 + r))

    def describe(self):
        return {"name": self.name, "sigma": self.sigma, "R": self.R, "a2": self.a2}


class QuadraticDensity(Density):
    """``H(z) = |z|^2``: a constructed failure case for (H3)."""

    name = "QUADRATIC"
    radial = True

    def grad(self, u, v):
        u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
        return u * u + v * v, 2.0 * u, 2.0 * v

    def hess(self, u, v):
        u = np.asarray(u, dtype=float)
        return np.full_like(u, 2.0), np.zeros_like(u), np.full_like(u, 2.0)


class ZeroDensity(Density):
    """``H = 0``: suppresses the nonlinear part (test hook)."""

    name = "ZERO"
    radial = True

    def grad(self, u, v):
        z = np.zeros_like(np.asarray(u, dtype=float))
        return z, z.copy(), z.copy()

    def hess(self, u, v):
        z = np.zeros_like(np.asarray(u, dtype=float))
        return z, z.copy(), z.copy()


def _flat2(fn, u, v):
    shape = np.broadcast_shapes(u.shape, v.shape)
    a = np.ascontiguousarray(np.broadcast_to(u, shape).ravel())
    b = np.ascontiguousarray(np.broadcast_to(v, shape).ravel())
    return tuple(o.reshape(shape) for o in fn(a, b))


def make_density(name: str, **params) -> Density:
    name = name.upper()
    if name == "POWER":
        return RadialPowerDensity(params.get("mu", 4.0))
    if name == "LOG_QUAD":
        return LogQuadDensity(params.get("sigma", 2.0), params.get("R", 1.0), params.get("a2", 15.0))
    if name == "QUADRATIC":
        return QuadraticDensity()
    if name == "ZERO":
        return ZeroDensity()
    raise ValueError(f"unknown Hamiltonian density {name!r}")


# ---------------------------------------------------------------------------
# energy model
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class EnergyModel:
    """Energy on a split space.

    ``psi_sign = -1`` gives ``Phi = Q - Psi`` (the superquadratic problems);
    ``psi_sign = +1`` gives the sign-flipped functional ``Q + Psi`` used by the
    dual geometry evaluator.
    """

    split: SplitSpace
    density: Density
    psi_sign: float = -1.0
    _BU: np.ndarray = field(init=False, repr=False)
    _BV: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.psi_sign not in (-1.0, 1.0):
            raise ValueError("psi_sign must be +1 or -1")
        n = self.split.n_raw
        self._BU = np.ascontiguousarray(self.split.D[:n].T @ self.split.synthesis)
        self._BV = np.ascontiguousarray(self.split.D[n:].T @ self.split.synthesis)
        self._w = self.split.quad_weights
        self._sign = self.split.signs

    @property
    def dim(self):
        return self.split.dim

    @property
    def grid_values(self):
        """Split directions on the grid, shape ``(dim, 2, n_nodes)``."""
        return np.stack([self._BU, self._BV], axis=1)

    def fields(self, c):
        """Grid values ``(U, V)`` of the point with split coordinates ``c``."""
        return c @ self._BU, c @ self._BV

    def quadratic(self, c):
        return 0.5 * float(np.dot(self._sign * c, c))

    def psi_c(self, c):
        U, V = self.fields(c)
        return float(np.dot(self._w, self.density.value(U, V)))

    def phi_c(self, c):
        return self.quadratic(c) + self.psi_sign * self.psi_c(c)

    def phi_grad_c(self, c):
        """``(Phi, grad Phi)`` in split coordinates (metric gradient)."""
        U, V = self.fields(c)
        H, Hu, Hv = self.density.grad(U, V)
        phi = self.quadratic(c) + self.psi_sign * float(np.dot(self._w, H))
        nl = self._BU @ (self._w * Hu) + self._BV @ (self._w * Hv)
        return phi, self._sign * c + self.psi_sign * nl

    def grad_c(self, c):
        return self.phi_grad_c(c)[1]

    def hess_c(self, c, frame=None):
        """Hessian in split coordinates, or ``frame.T @ H @ frame``."""
        U, V = self.fields(c)
        huu, huv, hvv = self.density.hess(U, V)
        if frame is None:
            BU, BV, lin = self._BU, self._BV, np.diag(self._sign)
        else:
            BU, BV = frame.T @ self._BU, frame.T @ self._BV
            lin = (frame.T * self._sign) @ frame
        w = self._w
        nl = (BU * (w * huu)) @ BU.T + (BV * (w * hvv)) @ BV.T
        cross = (BU * (w * huv)) @ BV.T
        nl += cross + cross.T
        return lin + self.psi_sign * nl

    def l2_gram(self, idx=None):
        """Quadrature L2 Gram matrix of the split directions."""
        BU, BV = (self._BU, self._BV) if idx is None else (self._BU[idx], self._BV[idx])
        return (BU * self._w) @ BU.T + (BV * self._w) @ BV.T

    def h_tilde_integral(self, c):
        U, V = self.fields(c)
        return float(np.dot(self._w, self.density.h_tilde(U, V)))

    def l2_norm_c(self, c):
        U, V = self.fields(c)
        return math.sqrt(float(np.dot(self._w, U * U + V * V)))

    def lr_norm_c(self, c, r):
        U, V = self.fields(c)
        return float(np.dot(self._w, np.hypot(U, V) ** r)) ** (1.0 / r)

    def describe(self):
        return {"density": self.density.describe(), "problem": self.split.problem, "psi_sign": self.psi_sign}


def eval_phi(model: EnergyModel, z) -> float:
    c = model.split.to_split(z)
    if not np.all(np.isfinite(c)):
        raise ValueError("non-finite point")
    return model.phi_c(c)


def grad_phi(model: EnergyModel, z) -> np.ndarray:
    """Metric gradient of Phi at raw point ``z``, returned as a raw point."""
    c = model.split.to_split(z)
    if not np.all(np.isfinite(c)):
        raise ValueError("non-finite point")
    return model.split.from_split(model.grad_c(c))


def h_tilde(density: Density, z):
    """``0.5 H_z(z).z - H(z)`` at pointwise values ``z = (u, v)``."""
    u, v = z
    return density.h_tilde(np.asarray(u, dtype=float), np.asarray(v, dtype=float))


def cerami_measure(model: EnergyModel, z) -> float:
    """``(1 + |z|) |grad Phi(z)|`` in the split metric."""
    c = model.split.to_split(z)
    return _cerami_c(model, c)


def _cerami_c(model, c, g=None):
    if g is None:
        g = model.grad_c(c)
    return (1.0 + float(np.linalg.norm(c))) * float(np.linalg.norm(g))


# ---------------------------------------------------------------------------
# explicit constants
# ---------------------------------------------------------------------------


def _ray_grid(r_min=1e-8, r_max=1e6, n=20001):
    return np.logspace(math.log10(r_min), math.log10(r_max), n)


def envelope_constant(model, eps, r_min=1e-8, r_max=1e6):
    """Constructive ``C(eps)`` with ``|H_z| <= eps |z| + C(eps) |z|^p``.

    ``p = (sigma+1)/(sigma-1)``.  ``delta`` is the largest grid radius below
    which ``|H_z| <= eps |z|``; then ``C = a4 / delta^p + a3`` with
    ``a4 = max_{|z| <= R} |H_z|`` and ``a3 = sup_{|z| > R} |H_z| / |z|^p``.
    Returns a dict with ``p, C, delta, a3, a4``.
    """
    p = (model.sigma + 1.0) / (model.sigma - 1.0)
    r = _ray_grid(r_min, r_max)
    _, _, hz, _ = _ray(model, r)
    inside = r <= model.R
    a4 = float(hz[inside].max()) if inside.any() else 0.0
    a3 = float(np.max(hz[~inside] / r[~inside] ** p)) if (~inside).any() else 0.0
    bad = np.flatnonzero(hz > eps * r)
    if bad.size == 0:
        delta = float(r[-1])
    elif bad[0] == 0:
        delta = 0.0
    else:
        delta = float(r[bad[0] - 1])
    C = a4 / delta**p + a3 if delta > 0 else math.inf
    return {"p": p, "C": C, "delta": delta, "a3": a3, "a4": a4}


def _sup_deficit_1d(values_fn, delta, r_max=1e4):
    # sup_{r >= 0} (delta r^2 - H(r)) on a log grid, refined around the peak
    r = np.concatenate([[0.0], _ray_grid(1e-6, r_max, 4001)])
    vals = delta * r * r - values_fn(r)
    i = int(np.argmax(vals))
    lo, hi = r[max(i - 1, 0)], r[min(i + 1, r.size - 1)]
    fine = np.linspace(lo, hi, 2001)
    return max(float(np.max(delta * fine * fine - values_fn(fine))), float(vals[i]), 0.0)


def quadratic_deficit(density, delta):
    """``c_delta = sup_z (delta |z|^2 - H(z))``, so that ``H >= delta |z|^2 - c_delta``."""
    if isinstance(density, SeparableDensity):
        cf = _sup_deficit_1d(lambda r: density.f.evaluate(r)[0], delta)
        cg = _sup_deficit_1d(lambda r: density.g.evaluate(r)[0], delta)
        return cf + cg
    return _sup_deficit_1d(lambda r: density.value(r, np.zeros_like(r)), delta)


# ---------------------------------------------------------------------------
# growth certificates
# ---------------------------------------------------------------------------


@dataclass
class GrowthReport:
    model: dict
    checks: dict
    constants: dict

    @property
    def passed(self) -> bool:
        return all(entry["passed"] for entry in self.checks.values())

    def failures(self):
        return [name for name, entry in self.checks.items() if not entry["passed"]]


def _profile(model, pts):
    """``(|z|, H, |H_z|, H~)`` at sample points for a density or scalar model."""
    if isinstance(model, ScalarNonlinearity):
        u = pts[:, 0]
        F, f, _ = model.evaluate(u)
        return np.abs(u), F, np.abs(f), 0.5 * u * f - F
    u, v = pts[:, 0], pts[:, 1]
    H, Hu, Hv = model.grad(u, v)
    return np.hypot(u, v), H, np.hypot(Hu, Hv), model.h_tilde(u, v)


def _ray(model, r):
    pts = np.stack([r, np.zeros_like(r)], axis=1)
    return _profile(model, pts)


def check_growth(model, eps_grid=(1.0, 0.1, 0.01), r_range=(1e-6, 1e6), n_samples=100_000, seed=0):
    """Certify the growth envelope and superquadratic conditions by sampling.

    Envelope: ``|H_z| <= eps |z| + C(eps) |z|^p`` with ``p = (sigma+1)/(sigma-1)``
    and the constructive ``C(eps) = a4 / delta^p + a3`` where ``delta`` is the
    radius below which ``|H_z| <= eps |z|``, ``a4 = max_{|z|<=R} |H_z|`` and
    ``a3 = sup_{|z|>=R} |H_z| / |z|^p``.  For scalar models ``|z| = |u|``.
    """
    rng = np.random.default_rng(seed)
    scalar = isinstance(model, ScalarNonlinearity)
    radii = np.exp(rng.uniform(math.log(r_range[0]), math.log(r_range[1]), n_samples))
    if scalar:
        pts = np.stack([radii * rng.choice([-1.0, 1.0], n_samples), np.zeros(n_samples)], axis=1)
    else:
        ang = rng.uniform(0.0, 2.0 * math.pi, n_samples)
        pts = np.stack([radii * np.cos(ang), radii * np.sin(ang)], axis=1)
    r, H, Hz, Ht = _profile(model, pts)

    sigma, R = model.sigma, model.R
    p = (sigma + 1.0) / (sigma - 1.0)
    checks, constants = {}, {"sigma": sigma, "R": R, "p_envelope": p, "a1": model.a1, "a2": model.a2}

    env = {}
    ok_env = True
    for eps in eps_grid:
        e = envelope_constant(model, eps, r_min=r_range[0] * 1e-2, r_max=r_range[1])
        C, pe = e["C"], e["p"]
        bound = eps * r + C * r**pe
        ratio = float(np.max(Hz / np.where(bound > 0, bound, 1.0)))
        tight = float(np.max((Hz - eps * r) / r**pe))
        passed = bool(math.isfinite(C) and np.all(Hz <= bound * (1 + _SLACK) + _SLACK))
        ok_env &= passed
        env[eps] = {**e, "max_ratio": ratio, "C_tight": max(tight, 0.0), "passed": passed}
        constants.update(a3=e["a3"], a4=e["a4"])
    constants["envelope"] = env
    checks["envelope"] = {"passed": ok_env}

    big = r >= R
    ratio1 = Ht[big] / r[big] ** 2
    checks["H4_1"] = {"passed": bool(ratio1.min() >= model.a1 - _SLACK), "a1_tight": float(ratio1.min())}
    denom = np.where(Ht[big] > 0, Ht[big], np.nan)
    ratio2 = (Hz[big] / r[big]) ** sigma / denom
    a2_tight = float(np.nanmax(ratio2)) if np.isfinite(ratio2).any() else math.inf
    checks["H4_2"] = {
        "passed": bool(np.all(np.isfinite(ratio2)) and a2_tight <= model.a2 * (1 + _SLACK)),
        "a2_tight": a2_tight,
    }

    # superquadratic growth: H/|z|^2 unbounded, sampled along decades above R
    decades = R * 10.0 ** np.arange(0, int(math.log10(r_range[1] / R)) + 1)
    _, dH, _, _ = _ray(model, decades)
    q = dH / decades**2
    h3 = bool(np.all(H[r > 0] > 0) and np.all(np.diff(q[-4:]) > 0) and q[-1] >= 2.0 * q[0])
    checks["H3"] = {"passed": h3, "H_over_r2": q.tolist()}

    small = np.logspace(-8, -4, 5)
    _, _, sHz, _ = _ray(model, small)
    rat = sHz / small
    checks["H2"] = {"passed": bool(rat[-1] < 1e-1 and rat[0] < 1e-3 and np.all(np.diff(rat) >= 0)), "Hz_over_r": rat.tolist()}

    neg = -pts
    _, Hn, Hzn, _ = _profile(model, neg)
    checks["even"] = {"passed": bool(np.array_equal(Hn, H) and np.array_equal(Hzn, Hz))}
    return GrowthReport(model.describe(), checks, constants)


# ---------------------------------------------------------------------------
# the superquadratic inequality used for Cerami boundedness
# ---------------------------------------------------------------------------


def liu_inequality(nonlinearity: ScalarNonlinearity, u, v, s):
    """``f(u)[s(s/2+1)u + (1+s)v] + F(u) - F((1+s)u + v)``; <= 0 for catalogued models."""
    u, v, s = (np.asarray(x, dtype=float) for x in np.broadcast_arrays(u, v, s))
    if np.any(s < -1):
        raise ValueError("s must be >= -1")
    Fu, fu, _ = nonlinearity.evaluate(u)
    Fw = nonlinearity.evaluate((1.0 + s) * u + v)[0]
    return fu * (s * (0.5 * s + 1.0) * u + (1.0 + s) * v) + Fu - Fw
