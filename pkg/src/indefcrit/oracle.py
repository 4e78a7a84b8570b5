"""Brute-force references for cross-checking the spectral machinery.

Nothing here uses the fractional-power arithmetic of ``spectral`` or the
minimax engine: eigenvalues and sines are rebuilt from the domain lengths and
mode indices, operators are assembled densely from scratch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import _kernels as K

__all__ = [
    "ShootingResult",
    "shooting_ground_state",
    "fd_gradient",
    "dense_operator_check",
    "brute_embedding",
    "DENSE_DOF_CAP",
]

DENSE_DOF_CAP = 2000


# ---------------------------------------------------------------------------
# shooting for -u'' = |u|^(p-2) u, u(0) = u(L) = 0
# ---------------------------------------------------------------------------


@dataclass
class ShootingResult:
    p: float
    length: float
    slope: float
    x: np.ndarray
    u: np.ndarray
    energy: float
    boundary_residual: float
    nsteps: int

    def to_dict(self):
        return {
            "p": self.p,
            "length": self.length,
            "slope": self.slope,
            "energy": self.energy,
            "boundary_residual": self.boundary_residual,
            "nsteps": self.nsteps,
        }


def _profile(slope, p, length, nsteps):
    h = length / nsteps
    u = np.empty(nsteps + 1)
    u[0], w = 0.0, slope

    def acc(y):
        return -abs(y) ** (p - 2.0) * y

    for i in range(nsteps):
        y = u[i]
        k1u, k1w = w, acc(y)
        k2u, k2w = w + 0.5 * h * k1w, acc(y + 0.5 * h * k1u)
        k3u, k3w = w + 0.5 * h * k2w, acc(y + 0.5 * h * k2u)
        k4u, k4w = w + h * k3w, acc(y + h * k3u)
        u[i + 1] = y + h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u)
        w = w + h / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w)
    return np.linspace(0.0, length, nsteps + 1), u


def shooting_ground_state(p: float, length: float, nsteps: int = 20000, slope_tol: float = 1e-12,
                          n_profile: int = 401) -> ShootingResult:
    """Positive solution by bisection on ``u'(0)`` with fixed-step RK4.

    The half-period of the autonomous oscillator shrinks as the amplitude
    grows, so ``u(L)`` changes sign exactly once as the slope increases.
    """
    if p <= 2:
        raise ValueError("p must exceed 2 (p = 2 is the linear resonant case)")
    if length <= 0:
        raise ValueError("length must be positive")
    if nsteps % 2:
        nsteps += 1
    p, length = float(p), float(length)

    def end(s):
        return K.shoot_rk4(s, p, length, nsteps)[0]

    lo, hi = 1e-3, 1e-3
    if end(lo) <= 0:
        raise RuntimeError("bracketing failed: small slope already crosses zero")
    for _ in range(200):
        hi *= 2.0
        if end(hi) < 0:
            break
        lo = hi
    else:
        raise RuntimeError("bracketing failed: no sign change in u(L)")
    while hi - lo > slope_tol * hi:
        mid = 0.5 * (lo + hi)
        if end(mid) > 0:
            lo = mid
        else:
            hi = mid
    slope = 0.5 * (lo + hi)
    uL, energy = K.shoot_rk4(slope, p, length, nsteps)
    stride = max(1, nsteps // (n_profile - 1))
    x, u = _profile(slope, p, length, nsteps)
    return ShootingResult(p, length, slope, x[::stride], u[::stride], float(energy), abs(float(uL)), nsteps)


# ---------------------------------------------------------------------------
# finite differences in split coordinates
# ---------------------------------------------------------------------------


def fd_gradient(model, z, h: float = 1e-5) -> np.ndarray:
    """Central differences of Phi along each split coordinate; returns a raw point."""
    if h <= 0:
        raise ValueError("h must be positive")
    split = model.split
    c = split.to_split(z)
    g = np.empty_like(c)
    for i in range(c.size):
        cp, cm = c.copy(), c.copy()
        cp[i] += h
        cm[i] -= h
        g[i] = (model.phi_c(cp) - model.phi_c(cm)) / (2.0 * h)
    return split.from_split(g)


# ---------------------------------------------------------------------------
# dense assembly of the quadratic forms
# ---------------------------------------------------------------------------


def _dirichlet_eigenvalues(domain, indices):
    idx = np.asarray(indices, dtype=float)
    lam = np.zeros(idx.shape[0])
    for ax, ell in enumerate(domain.lengths):
        lam += (idx[:, ax] * math.pi / ell) ** 2
    return lam


def _time_derivative(T, K_):
    # coefficient map of d/dt on [1, cos w1 t, sin w1 t, ...]
    n = 2 * K_ + 1
    Dt = np.zeros((n, n))
    for k in range(1, K_ + 1):
        om = 2.0 * math.pi * k / T
        c, s = 2 * k - 1, 2 * k
        Dt[c, s] = om
        Dt[s, c] = -om
    return Dt


def dense_operator_check(split) -> dict:
    """Dense spectrum of the quadratic form against the per-mode formula.

    HS: the symmetric matrix of ``L = J d/dt + J0 (-Laplace + V0)`` in the raw
    L2-orthonormal basis; its eigenvalues must be ``+-sqrt((lam+V0)^2 + w^2)``.
    ES: the generalised eigenproblem of ``int A^s u A^t v`` against the
    ``s x t`` metric; eigenvalues must be ``+-1`` and the + eigenvectors sorted
    by L2 mass reproduce the e-order.
    """
    ndof = split.D.shape[0]
    if ndof > DENSE_DOF_CAP:
        raise ValueError(f"{ndof} dof exceeds the dense cap {DENSE_DOF_CAP}")
    basis = split.basis
    lam = _dirichlet_eigenvalues(basis.domain, basis.indices)
    N = lam.size
    out = {"problem": split.problem, "ndof": ndof}
    if split.problem == "HS":
        V0, T, K_ = split.params["V0"], split.params["T"], split.params["K"]
        S = lam + V0
        if np.any(np.abs(S) < 1e-12 * max(1.0, abs(V0))):
            raise ValueError("(V2) violated: 0 in spectrum of -Laplace + V0")
        Dt = np.kron(_time_derivative(T, K_), np.eye(N))
        Sb = np.kron(np.eye(2 * K_ + 1), np.diag(S))
        Z = np.zeros_like(Sb)
        # <Lz, z> = 2 int (u_t v + grad u . grad v + V0 u v)
        L = np.block([[Z, Sb + Dt.T], [Sb + Dt, Z]])
        L = 0.5 * (L + L.T)
        eig = np.linalg.eigvalsh(L)
        formula = []
        for j in range(N):
            formula += [abs(S[j]), -abs(S[j])]
            for k in range(1, K_ + 1):
                mu = math.hypot(S[j], 2.0 * math.pi * k / T)
                formula += [mu, mu, -mu, -mu]
        formula = np.sort(np.array(formula))
        from_split = np.sort(split.signs * split.weights_mu)
        out.update(
            matrix=L,
            eigenvalues=eig,
            formula=formula,
            max_mismatch_formula=float(np.max(np.abs(eig - formula))),
            max_mismatch_split=float(np.max(np.abs(eig - from_split))),
            min_abs_eigenvalue=float(np.min(np.abs(eig))),
            form_residual=float(np.max(np.abs(split.D.T @ L @ split.D - np.diag(split.signs)))),
        )
        return out

    s, t = split.params["s"], split.params["t"]
    Lam = np.diag(lam)
    Z = np.zeros_like(Lam)
    M = np.block([[Z, Lam], [Lam, Z]])
    G = np.diag(np.concatenate([lam**s, lam**t]))
    eig, vec = scipy.linalg.eigh(M, G)
    # e-order oracle: + eigenvectors ordered by Rayleigh quotient of the L2 mass
    plus = vec[:, eig > 0]
    l2 = np.sum(plus * plus, axis=0)
    # larger L2 mass per unit metric norm means lower frequency
    order = np.argsort(-l2, kind="stable")
    dom = np.argmax(np.abs(plus[:N, order]), axis=0)
    out.update(
        matrix=M,
        eigenvalues=eig,
        max_mismatch_formula=float(np.max(np.abs(np.abs(eig) - 1.0))),
        n_plus=int(np.sum(eig > 0)),
        plus_mode_order=dom.tolist(),
        min_abs_eigenvalue=float(np.min(np.abs(eig))),
        form_residual=float(np.max(np.abs(split.D.T @ M @ split.D - np.diag(split.signs)))),
        metric_residual=float(np.max(np.abs(split.D.T @ G @ split.D - np.eye(split.dim)))),
    )
    return out


# ---------------------------------------------------------------------------
# embedding constants by random sampling
# ---------------------------------------------------------------------------


def brute_embedding(basis, s: float, r: float, k: int, n_samples: int = 10_000, seed: int = 0) -> float:
    """Lower bound for ``sup |w|_r`` over unit ``E^s`` tails by random sampling.

    Coefficients ``g_j * lam_j^(-gamma)`` with Gaussian ``g`` and a random
    decay ``gamma``, so samples range from flat to concentrated on the first
    tail mode.
    """
    lam_all = _dirichlet_eigenvalues(basis.domain, basis.indices)
    if not 0 <= k < lam_all.size:
        raise ValueError(f"tail starting at mode {k} is empty")
    idx = basis.indices[k:]
    lam = lam_all[k:]
    vals = np.ones((idx.shape[0], basis.n_nodes))
    for ax, ell in enumerate(basis.domain.lengths):
        x = basis.nodes[:, ax]
        vals *= math.sqrt(2.0 / ell) * np.sin(np.outer(idx[:, ax], x) * math.pi / ell)
    rng = np.random.default_rng(seed)
    best = 0.0
    batch = 1000
    done = 0
    while done < n_samples:
        m = min(batch, n_samples - done)
        gamma = rng.uniform(0.0, 12.0, size=(m, 1))
        c = rng.standard_normal((m, lam.size)) * (lam[0] / lam)[None, :] ** gamma
        c /= np.sqrt(np.sum(lam[None, :] ** s * c * c, axis=1, keepdims=True))
        w = c @ vals
        norms = np.sum(basis.weights * np.abs(w) ** r, axis=1) ** (1.0 / r)
        best = max(best, float(norms.max()))
        done += m
    return best
