"""Fountain geometry, descent flow and minimax saddle search.

All internal work happens in split coordinates ``c`` (see ``splitting``):
``c[:n_plus]`` are X+ coordinates in e-order, the rest X- coordinates.  The
public entry points accept and return raw points.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.linalg
from scipy.optimize import minimize
from scipy.stats import qmc

from .functionals import (
    EnergyModel,
    SeparableDensity,
    _cerami_c,
    envelope_constant,
    quadratic_deficit,
)
from .spectral import embedding_constant, maximize_lr_on_sphere
from .splitting import galerkin_subspaces

__all__ = [
    "FlowConfig",
    "Trajectory",
    "GeometryReport",
    "SolveReport",
    "DualGeometryReport",
    "geometry_check",
    "integrate_flow",
    "saddle_solve",
    "multiplicity_sweep",
    "strong_residual",
    "dual_geometry_check",
    "dedup_reports",
    "beta_tail",
    "lower_bound",
]


@dataclass
class FlowConfig:
    """Numerical controls for the flow and the saddle search."""

    step: float = 1e-2
    max_time: float = 1e3
    ode_tol: float = 1e-6
    cerami_tol: float = 1e-8
    max_iter: int = 2000
    seed: int = 0
    n_starts: int = 8
    newton: bool = True
    mesh_size: int = 32
    max_outer: int = 400
    newton_switch: float = 1e-4
    geometry_starts: int = 6

    def __post_init__(self):
        for name in ("step", "max_time", "ode_tol", "cerami_tol", "newton_switch"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        for name in ("max_iter", "n_starts", "mesh_size", "max_outer", "geometry_starts"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")

    def to_dict(self):
        return asdict(self)


# ---------------------------------------------------------------------------
# descent flow  dc/dtau = -2 grad / |grad|^2
# ---------------------------------------------------------------------------


@dataclass
class Trajectory:
    points: np.ndarray
    phi: np.ndarray
    grad_norm: np.ndarray
    cerami: np.ndarray
    times: np.ndarray
    status: str
    near_critical: bool
    rejected: int

    @property
    def final(self):
        return self.points[-1]


def _field(g):
    gn2 = float(np.dot(g, g))
    return -2.0 * g / gn2


def _flow_c(model, c0, config, level_target=None, max_steps=None):
    c = np.array(c0, dtype=float)
    phi, g = model.phi_grad_c(c)
    pts, phis, gns, cers, ts = [c.copy()], [phi], [np.linalg.norm(g)], [_cerami_c(model, c, g)], [0.0]
    dt = config.step
    tau = 0.0
    rejected = 0
    status, near = "max_iter", False
    max_steps = max_steps or config.max_iter
    dt_min = 1e-14 * max(1.0, config.step)
    for _ in range(max_steps):
        if cers[-1] <= config.cerami_tol:
            status = "cerami"
            break
        if level_target is not None and phi <= level_target:
            status = "level"
            break
        if tau >= config.max_time:
            status = "max_time"
            break
        if gns[-1] == 0.0:
            status, near = "critical", True
            break
        f0 = _field(g)
        accepted = False
        while dt >= dt_min:
            h = min(dt, config.max_time - tau)
            ce = c + h * f0
            phe, ge = model.phi_grad_c(ce)
            if not np.isfinite(phe) or float(np.dot(ge, ge)) == 0.0:
                dt *= 0.5
                rejected += 1
                continue
            cn = c + 0.5 * h * (f0 + _field(ge))
            err = np.linalg.norm(cn - ce) / (1.0 + np.linalg.norm(c))
            phn, gnew = model.phi_grad_c(cn)
            if err <= config.ode_tol and np.isfinite(phn) and phn < phi:
                c, phi, g = cn, phn, gnew
                tau += h
                accepted = True
                fac = 0.9 * math.sqrt(config.ode_tol / max(err, 1e-300))
                dt = h * min(4.0, max(0.2, fac))
                break
            dt *= 0.5
            rejected += 1
        if not accepted:
            status, near = "step_underflow", True
            break
        pts.append(c.copy())
        phis.append(phi)
        gns.append(float(np.linalg.norm(g)))
        cers.append(_cerami_c(model, c, g))
        ts.append(tau)
    return Trajectory(np.array(pts), np.array(phis), np.array(gns), np.array(cers), np.array(ts), status, near, rejected)


def integrate_flow(model: EnergyModel, z0, config: FlowConfig | None = None, level_target: float | None = None):
    """Integrate the normalised descent field from raw point ``z0``.

    Each accepted step strictly lowers Phi; along exact solutions Phi drops at
    unit rate 2 per unit time.  Returns a ``Trajectory`` of raw points.
    """
    config = config or FlowConfig()
    c0 = model.split.to_split(z0)
    if not np.all(np.isfinite(c0)):
        raise ValueError("non-finite start")
    tr = _flow_c(model, c0, config, level_target)
    tr.points = model.split.from_split(tr.points)
    return tr


# ---------------------------------------------------------------------------
# geometry
# ---------------------------------------------------------------------------


@dataclass
class GeometryReport:
    k: int
    beta: dict
    r_k: float
    rho_k: float
    b_k: float
    a_k: float
    d_k: float
    a_k_bound: float
    bound_delta: float
    rho_history: list
    passed_A1: bool
    passed_A2: bool
    reason: str
    constants: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.passed_A1 and self.passed_A2

    def to_dict(self):
        d = asdict(self)
        d["passed"] = self.passed
        return d


def beta_tail(model: EnergyModel, k: int, r: float, n_starts: int = 8, seed: int = 0):
    """``sup |w|_r`` over unit ``w`` in the span of ``e_k, e_(k+1), ...``."""
    split = model.split
    _, plus = galerkin_subspaces(split, k)
    values = model.grid_values[plus]
    rng = np.random.default_rng(seed)
    dim = plus.size
    starts = [np.eye(dim)[0]]
    mu = split.weights_mu[plus]
    for _ in range(n_starts - 1):
        starts.append(rng.standard_normal(dim) * (mu[0] / mu))
    return maximize_lr_on_sphere(values, split.quad_weights, r, starts)[0]


def lower_bound(model: EnergyModel, k: int, n_starts: int = 8, seed: int = 0):
    """Analytic radius ``r_k`` and lower bound ``b_k`` of Phi on the X_k+ sphere.

    Elliptic system: ``F <= C_F |u|^p + D_F`` (and likewise G) together with
    tail embedding constants give, at ``|z| = rho``,
    ``Phi >= rho^2/2 - C_F b1^p (rho/sqrt2)^p - C_G b2^q (rho/sqrt2)^q - (D_F + D_G)|Omega|``;
    ``r_k = (C p beta^p)^(1/(2-p))`` with the larger exponent.

    Hamiltonian system: with ``eps = mu_k / 2`` and ``p`` the envelope
    exponent, ``c3 = 2 C(eps)/(p+1)``, ``r_k = (c3 (p+1) beta^(p+1))^(1/(1-p))``
    and ``b_k = (1/2)(1/2 - 1/(p+1)) r_k^2``.
    """
    split, dens = model.split, model.density
    if split.problem == "ES":
        if not isinstance(dens, SeparableDensity):
            raise TypeError("elliptic system needs a separable density")
        s, t = split.params["s"], split.params["t"]
        basis = split.basis
        p, q = dens.f.growth, dens.g.growth
        CF, DF = dens.f.envelope
        CG, DG = dens.g.envelope
        b1 = embedding_constant(basis, s, p, k, n_starts=n_starts, seed=seed)[0]
        b2 = embedding_constant(basis, t, q, k, n_starts=n_starts, seed=seed)[0]
        pm = max(p, q)
        beta = max(b1, b2)
        C1 = max(CF, CG)
        if C1 == 0.0:
            # no nonlinear part: Phi = |z|^2/2 on X+, every radius works
            return 1.0, 0.5, {"beta_1": b1, "beta_2": b2, "p": p, "q": q, "C_F": CF, "C_G": CG}
        r_k = (C1 * pm * beta**pm) ** (1.0 / (2.0 - pm))
        h = r_k / math.sqrt(2.0)
        b_k = 0.5 * r_k**2 - CF * b1**p * h**p - CG * b2**q * h**q - (DF + DG) * split.measure
        return r_k, b_k, {"beta_1": b1, "beta_2": b2, "p": p, "q": q, "C_F": CF, "C_G": CG}
    mu_k = split.weights_mu[k]
    eps = 0.5 * mu_k
    env = envelope_constant(dens, eps)
    p = env["p"]
    beta = beta_tail(model, k, p + 1.0, n_starts=n_starts, seed=seed)
    c3 = 2.0 * env["C"] / (p + 1.0)
    if c3 == 0.0:
        return 1.0, 0.5, {"beta": beta, "p": p, "eps": eps, "C_eps": 0.0, "c3": 0.0}
    r_k = (c3 * (p + 1.0) * beta ** (p + 1.0)) ** (1.0 / (1.0 - p))
    b_k = 0.5 * (0.5 - 1.0 / (p + 1.0)) * r_k**2
    return r_k, b_k, {"beta": beta, "p": p, "eps": eps, "C_eps": env["C"], "c3": c3}


def _sphere_max(model, idx, rho, starts, sign=1.0, ball=False, maxiter=400):
    """Max (sign=+1) or min (sign=-1) of Phi over the sphere or ball of radius rho in span(idx)."""
    dim = model.dim

    def unpack(x):
        n2 = float(np.dot(x, x))
        if ball:
            s = math.sqrt(1.0 + n2)
            return rho * x / s, s
        n = math.sqrt(n2)
        return rho * x / n, n

    def fun(x):
        y, s = unpack(x)
        c = np.zeros(dim)
        c[idx] = y
        phi, g = model.phi_grad_c(c)
        gy = g[idx]
        if ball:
            jac = rho / s * (gy - x * np.dot(x, gy) / s**2)
        else:
            xh = x / s
            jac = rho / s * (gy - xh * np.dot(xh, gy))
        return -sign * phi, -sign * jac

    best, best_y = -math.inf, None
    for x0 in starts:
        x0 = np.asarray(x0, dtype=float)
        if ball:
            # interior start at 90% radius
            x0 = x0 / np.linalg.norm(x0) * 0.9 / math.sqrt(1 - 0.81)
        res = minimize(fun, x0, jac=True, method="L-BFGS-B", options={"maxiter": maxiter, "gtol": 1e-10})
        val = -res.fun
        if val > best:
            best, best_y = val, unpack(res.x)[0]
    return sign * best, best_y


def _anticoercive_bound(model, idx, rho, deltas):
    """``min_delta lam_max(Q/2 - delta G) rho^2 + c_delta |Theta|`` over span(idx).

    Pointwise ``H >= delta |z|^2 - c_delta`` turns Phi into a quadratic form
    plus a constant; its top eigenvalue on the subspace bounds Phi on the
    sphere of radius rho.
    """
    G = model.l2_gram(idx)
    S = np.diag(0.5 * model.split.signs[idx])
    best = (math.inf, None)
    for delta in deltas:
        lam = float(scipy.linalg.eigvalsh(S - delta * G)[-1])
        cd = quadratic_deficit(model.density, delta)
        val = lam * rho * rho + cd * model.split.measure
        if val < best[0]:
            best = (val, delta)
    return best


def _default_deltas(model, k):
    mu_max = float(model.split.weights_mu[k])
    return [mu_max * f for f in (0.5, 1.0, 2.0, 4.0, 8.0, 16.0)]


def geometry_check(model: EnergyModel, k: int, deltas=None, config: FlowConfig | None = None,
                   rho_cap_factor: float = 2.0**10) -> GeometryReport:
    """Certify the fountain geometry at index ``k``.

    ``b_k`` and ``r_k`` are analytic; ``a_k`` (sup on the X_k- sphere) and
    ``d_k`` (sup on the X_k- ball) are estimated by multi-start ascent, with
    ``rho_k`` doubled from ``4 r_k`` until ``a_k < min(0, b_k)`` or the cap.
    The quadratic-minorant bound ``a_k_bound`` is reported alongside.
    """
    config = config or FlowConfig()
    split = model.split
    minus_idx, _ = galerkin_subspaces(split, k)
    deltas = list(deltas) if deltas is not None else _default_deltas(model, k)
    r_k, b_k, consts = lower_bound(model, k, seed=config.seed)
    rng = np.random.default_rng(config.seed)
    m = minus_idx.size

    def starts():
        out = [np.eye(m)[j] for j in range(min(k + 1, m))]
        out.append(np.ones(m))
        for _ in range(config.geometry_starts):
            out.append(rng.standard_normal(m))
        return out

    passed_A2 = bool(math.isfinite(b_k) and b_k > 0)
    target = min(0.0, b_k)
    rho = 4.0 * r_k
    history = []
    a_k = math.inf
    while True:
        a_k, _ = _sphere_max(model, minus_idx, rho, starts())
        bound, delta = _anticoercive_bound(model, minus_idx, rho, deltas)
        history.append({"rho": rho, "a_k": a_k, "a_k_bound": bound})
        if a_k < target or rho >= rho_cap_factor * r_k:
            break
        rho *= 2.0
    passed_A1 = bool(a_k < target and r_k < rho)
    d_k, _ = _sphere_max(model, minus_idx, rho, starts(), ball=True)
    d_k = max(d_k, a_k, 0.0)
    if passed_A1 and passed_A2:
        reason = "ok"
    elif not passed_A1:
        reason = "a_k ≥ 0" if a_k >= 0 else "a_k ≥ b_k"
    else:
        reason = "b_k not positive"
    return GeometryReport(
        k=k,
        beta={key: val for key, val in consts.items() if key.startswith("beta")},
        r_k=r_k,
        rho_k=rho,
        b_k=b_k,
        a_k=a_k,
        d_k=d_k,
        a_k_bound=bound,
        bound_delta=delta,
        rho_history=history,
        passed_A1=passed_A1,
        passed_A2=passed_A2,
        reason=reason,
        constants=consts,
    )


# ---------------------------------------------------------------------------
# minimax search
# ---------------------------------------------------------------------------


@dataclass
class SolveReport:
    k: int
    status: str
    level: float
    z: np.ndarray
    cerami: float
    grad_norm: float
    norm: float
    l2_norm: float
    flow_steps: int
    outer_iterations: int
    newton_iterations: int
    history: list
    b_k: float = math.nan
    d_k: float = math.nan
    residuals: tuple = (math.nan, math.nan)
    sandwich_ok: bool = True
    notes: list = field(default_factory=list)

    @property
    def converged(self):
        return self.status == "converged"

    def fingerprint(self):
        return (abs(self.level), self.l2_norm)

    def to_dict(self):
        d = asdict(self)
        d["z"] = self.z.tolist()
        d["residuals"] = list(self.residuals)
        d["converged"] = self.converged
        return d


def _orth(A):
    q, _ = np.linalg.qr(A)
    return q


def _sphere_mesh(dim, n, seed):
    """Low-discrepancy directions on the unit sphere in R^dim (one per antipodal pair)."""
    if dim == 1:
        return np.ones((1, 1))
    sob = qmc.Sobol(dim, scramble=True, seed=seed)
    m = int(2 ** math.ceil(math.log2(max(n, 2))))
    u = np.clip(sob.random(m), 1e-12, 1 - 1e-12)
    from scipy.special import ndtri

    x = ndtri(u)
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    # pick one representative per antipodal pair
    x *= np.where(x[:, :1] < 0, -1.0, 1.0)
    return np.vstack([np.eye(dim), x[:n]])


class _Subspace:
    """Maximisation of Phi over ``span(V) + X-`` in split coordinates."""

    def __init__(self, model, V):
        self.model = model
        self.n_plus = model.split.n_plus
        self.dim = model.dim
        self.set_frame(V)

    def set_frame(self, V):
        self.V = V
        m = V.shape[1]
        F = np.zeros((self.dim, m + self.dim - self.n_plus))
        F[: self.n_plus, :m] = V
        F[self.n_plus :, m:] = np.eye(self.dim - self.n_plus)
        self.F = F

    def point(self, x):
        return self.F @ x

    def fun(self, x):
        phi, g = self.model.phi_grad_c(self.F @ x)
        return -phi, -(self.F.T @ g)

    def hess(self, x):
        return -self.model.hess_c(self.F @ x, frame=self.F)

    def ray_max(self, theta):
        """Best multiple of ``V theta`` (with zero X- part) by a coarse 1-d scan."""
        d = self.V @ theta
        ts = np.geomspace(1e-2, 1e3, 60)
        vals = []
        for t in ts:
            c = np.zeros(self.dim)
            c[: self.n_plus] = t * d
            vals.append(self.model.phi_c(c))
        i = int(np.nanargmax(vals))
        return ts[i], vals[i]

    def maximize(self, x0, gtol=1e-11):
        res = minimize(
            self.fun, x0, jac=True, hess=self.hess, method="trust-exact",
            options={"gtol": gtol, "maxiter": 200},
        )
        return res.x, -res.fun


def _sym_solve(H, rhs, rcond=1e-6):
    """Solve ``H x = rhs`` for symmetric indefinite ``H`` through its eigendecomposition.

    Eigenvalues below ``rcond * max|eig|`` are dropped, which removes the
    null directions generated by continuous symmetries (time translation).
    """
    lam, Q = scipy.linalg.eigh(H)
    keep = np.abs(lam) > rcond * np.max(np.abs(lam))
    return Q[:, keep] @ ((Q[:, keep].T @ rhs) / lam[keep])


def _newton_polish(model, c, tol, max_iter=30):
    """Newton on grad Phi = 0 with symmetric indefinite solves and backtracking on |grad|."""
    phi, g = model.phi_grad_c(c)
    gn = np.linalg.norm(g)
    it = 0
    # iterate past the tolerance until |grad| stops shrinking (roundoff floor)
    for it in range(1, max_iter + 1):
        if gn == 0.0:
            break
        step = _sym_solve(model.hess_c(c), -g)
        a = 1.0
        while a > 1e-6:
            cn = c + a * step
            phn, gnew = model.phi_grad_c(cn)
            if np.linalg.norm(gnew) < (1 - 1e-4 * a) * gn:
                break
            a *= 0.5
        else:
            break
        c, phi, g, gn = cn, phn, gnew, np.linalg.norm(gnew)
    return c, phi, g, it, _cerami_c(model, c, g) <= tol


def saddle_solve(model: EnergyModel, k: int, config: FlowConfig | None = None, mirror: bool = False,
                 geometry: GeometryReport | None = None) -> SolveReport:
    """Approximate the minimax level ``c_k`` and a critical point at that level.

    The admissible family is represented by ``(k+1)``-planes ``V`` in X+
    (starting from ``span(e_0..e_k)``) together with all of X-.  Each outer
    iteration locates the maximiser of Phi over ``V + X-`` (seeded from a
    symmetric low-discrepancy mesh of directions in ``V``), deforms it with the
    descent flow, and rotates ``V`` toward the deformed point.  The sup over
    the plane drops monotonically; once the Cerami measure of the maximiser
    is small the point is Newton-polished on the full gradient.
    ``mirror=True`` starts from ``-V``.
    """
    config = config or FlowConfig()
    split = model.split
    if not 0 <= k < split.n_plus:
        raise ValueError(f"k={k} out of range")
    tol = config.cerami_tol
    m = k + 1
    n_minus = split.n_minus
    V = np.eye(split.n_plus)[:, :m] * (-1.0 if mirror else 1.0)
    sub = _Subspace(model, V)
    # with V -> -V every mesh point, and hence every start, is negated
    mesh = _sphere_mesh(m, config.mesh_size, config.seed)

    def relocate(x_prev=None):
        # scan the mesh by ray maxima, polish the best few by full maximisation
        scored = []
        for theta in mesh:
            t, val = sub.ray_max(theta)
            scored.append((val, t, theta))
        scored.sort(key=lambda e: -e[0])
        cands = [np.concatenate([t * th, np.zeros(n_minus)]) for _, t, th in scored[: config.n_starts]]
        if x_prev is not None:
            cands.insert(0, x_prev)
        best = (-math.inf, None)
        for x0 in cands:
            x, val = sub.maximize(x0)
            if val > best[0] + 1e-12 * max(1.0, abs(val)):
                best = (val, x)
        return best[1], best[0]

    x, top = relocate()
    history = []
    flow_steps = 0
    kappa = 0.5
    status = "unconverged"
    notes = []
    stall = 0
    outer = 0
    for outer in range(1, config.max_outer + 1):
        c = sub.point(x)
        phi, g = model.phi_grad_c(c)
        cer = _cerami_c(model, c, g)
        history.append({"iteration": outer, "phi": phi, "grad_norm": float(np.linalg.norm(g)), "cerami": cer})
        if cer <= config.newton_switch or cer <= 10 * tol or stall >= 8:
            break
        # deform the maximiser: target drop proportional to |grad|^2
        gn2 = float(np.dot(g, g))
        target = phi - kappa * gn2
        tr = _flow_c(model, c, config, level_target=target, max_steps=50)
        flow_steps += len(tr.phi) - 1
        cn = tr.points[-1]
        # rotate V: keep its part orthogonal to the top direction, add the deformed X+ part
        V = sub.V
        coef = V.T @ c[: split.n_plus]
        w_top = coef / np.linalg.norm(coef)
        rest = V - np.outer(V @ w_top, w_top)
        Q = np.linalg.svd(np.column_stack([rest, cn[: split.n_plus]]), full_matrices=False)[0][:, :m]
        old_V = sub.V
        sub.set_frame(Q)
        xw = np.concatenate([Q.T @ cn[: split.n_plus], cn[split.n_plus :]])
        if outer % 10 == 0 and m > 1:
            x_new, top_new = relocate(xw)
        else:
            x_new, top_new = sub.maximize(xw)
        if top_new < top - 1e-14 * max(1.0, abs(top)):
            x, top = x_new, top_new
            kappa = min(2.0 * kappa, 64.0)
            stall = 0
        else:
            sub.set_frame(old_V)
            kappa *= 0.25
            stall += 1
    c = sub.point(x)
    phi_flow, g = model.phi_grad_c(c)
    newton_it = 0
    if config.newton:
        cn, phn, gnew, newton_it, ok = _newton_polish(model, c, tol)
        drift = abs(phn - phi_flow) / max(1.0, abs(phi_flow))
        if ok and drift <= 1e-3:
            c, g = cn, gnew
            status = "converged"
        elif ok:
            notes.append(f"newton moved to another level (drift {drift:.3g}); flow-only result kept")
            status = "flow_only"
        else:
            notes.append("newton did not converge; flow-only result kept")
            status = "flow_only"
    if status != "converged" and _cerami_c(model, c, g) <= tol:
        status = "converged"
    phi = model.phi_c(c)
    cer = _cerami_c(model, c, g)
    rep = SolveReport(
        k=k,
        status=status,
        level=phi,
        z=split.from_split(c),
        cerami=cer,
        grad_norm=float(np.linalg.norm(g)),
        norm=float(np.linalg.norm(c)),
        l2_norm=model.l2_norm_c(c),
        flow_steps=flow_steps,
        outer_iterations=outer,
        newton_iterations=newton_it,
        history=history,
        notes=notes,
    )
    if geometry is not None:
        rep.b_k, rep.d_k = geometry.b_k, geometry.d_k
        rep.sandwich_ok = bool(geometry.b_k - 1e-8 <= phi <= geometry.d_k + 1e-8)
        if not rep.sandwich_ok:
            rep.notes.append("level outside [b_k, d_k]")
    if split.problem == "ES":
        rep.residuals = strong_residual(model, rep.z)
    return rep


def dedup_reports(reports, phi_gap=1e-3, norm_gap=1e-2):
    """Distinct critical points; +-z are identified through (|Phi|, |z|_2)."""
    out = []
    for rep in sorted(reports, key=lambda r: (r.level, r.k)):
        lv, nm = rep.fingerprint()
        dup = False
        for kept in out:
            lv2, nm2 = kept.fingerprint()
            if abs(lv - lv2) <= phi_gap * max(abs(lv), abs(lv2), 1e-300) and abs(nm - nm2) <= norm_gap * max(nm, nm2, 1e-300):
                dup = True
                break
        if not dup:
            out.append(rep)
    return out


def multiplicity_sweep(model: EnergyModel, k_list, config: FlowConfig | None = None, geometries=None):
    """Solve each ``k`` and return ``(all_reports, distinct_converged_sorted)``."""
    config = config or FlowConfig()
    reports = []
    for k in k_list:
        geo = geometries.get(k) if geometries else None
        reports.append(saddle_solve(model, k, config, geometry=geo))
    distinct = dedup_reports([r for r in reports if r.converged and r.level > 0])
    return reports, distinct


# ---------------------------------------------------------------------------
# strong-solution residual (elliptic system)
# ---------------------------------------------------------------------------


def strong_residual(model: EnergyModel, z, refine: int = 2):
    """Relative residuals ``|-Lap u - g(v)| / |Lap u|`` and ``|-Lap v - f(u)| / |Lap v|``.

    Evaluated on a grid ``refine`` times denser than the working one.
    """
    split = model.split
    if split.problem != "ES":
        raise ValueError("strong residual is defined for the elliptic system")
    dens = model.density
    basis = split.basis.refined(refine)
    u, v = split.unpack(z)
    lam = basis.eigenvalues
    lap_u, lap_v = (lam * u) @ basis.phi, (lam * v) @ basis.phi
    U, Vv = u @ basis.phi, v @ basis.phi
    gv = dens.g.evaluate(Vv)[1]
    fu = dens.f.evaluate(U)[1]
    w = basis.weights

    def rel(a, b):
        nb = math.sqrt(float(np.dot(w, b * b)))
        na = math.sqrt(float(np.dot(w, a * a)))
        return 0.0 if nb == 0.0 and na == 0.0 else na / nb if nb > 0 else math.inf

    return rel(lap_u - gv, lap_u), rel(lap_v - fu, lap_v)


# ---------------------------------------------------------------------------
# dual fountain quantities
# ---------------------------------------------------------------------------


@dataclass
class DualGeometryReport:
    k: int
    rho_k: float
    r_k: float
    a_upper: float
    sup_small_ball: float
    b_upper: float
    d_upper: float
    sup_on_plus_sphere: float
    B1_first: bool
    B1_second: bool

    def to_dict(self):
        return asdict(self)


def dual_geometry_check(model: EnergyModel, k: int, rho_k: float, r_k: float, n_starts: int = 6, seed: int = 0):
    """Evaluate the dual quantities at the supplied radii.

    ``a^k = inf`` over the X_k+ sphere of radius ``rho_k``; ``b^k = sup`` over
    the X_k- sphere of radius ``r_k``; ``d^k = inf`` over the X_k+ ball of
    radius ``rho_k``; plus the sup over the full ball of radius ``r_k``.
    """
    if model.psi_sign != 1.0:
        raise ValueError("dual evaluator needs the sign-flipped functional (psi_sign=+1)")
    if not rho_k > r_k > 0:
        raise ValueError("need rho_k > r_k > 0")
    split = model.split
    minus_idx, plus_idx = galerkin_subspaces(split, k)
    all_idx = np.arange(split.dim)
    rng = np.random.default_rng(seed)

    def starts(m):
        return [np.eye(m)[0], np.ones(m)] + [rng.standard_normal(m) for _ in range(n_starts)]

    a_k, _ = _sphere_max(model, plus_idx, rho_k, starts(plus_idx.size), sign=-1.0)
    sup_plus, _ = _sphere_max(model, plus_idx, rho_k, starts(plus_idx.size), sign=1.0)
    b_k, _ = _sphere_max(model, minus_idx, r_k, starts(minus_idx.size), sign=1.0)
    d_k, _ = _sphere_max(model, plus_idx, rho_k, starts(plus_idx.size), sign=-1.0, ball=True)
    d_k = min(d_k, a_k, 0.0)
    small, _ = _sphere_max(model, all_idx, r_k, starts(all_idx.size), sign=1.0, ball=True)
    small = max(small, 0.0)
    return DualGeometryReport(
        k=k,
        rho_k=rho_k,
        r_k=r_k,
        a_upper=a_k,
        sup_small_ball=small,
        b_upper=b_k,
        d_upper=d_k,
        sup_on_plus_sphere=sup_plus,
        B1_first=bool(a_k > max(0.0, small)),
        B1_second=bool(b_k < 0.0),
    )
