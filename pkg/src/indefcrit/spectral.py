"""Dirichlet spectral calculus on intervals and rectangles.

Functions on the domain are stored as coefficient vectors ``a`` over the
L2-normalised Dirichlet eigenfunctions (products of sines), sorted by
eigenvalue.  Fractional powers act diagonally: ``A^s`` multiplies mode ``j``
by ``lambda_j ** (s/2)`` and ``<u, v>_s = sum lambda_j^s a_j b_j``.

Quadrature is composite Gauss-Legendre, tensorised on rectangles, with at
least ``oversample`` nodes per unit of the highest retained frequency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DomainSpec",
    "EigenBasis",
    "build_basis",
    "apply_fractional",
    "es_inner",
    "es_norm",
    "synthesize",
    "analyze",
    "embedding_constant",
    "maximize_lr_on_sphere",
    "critical_embedding_exponent",
]

PANEL_ORDER = 16


@dataclass(frozen=True)
class DomainSpec:
    kind: str
    lengths: tuple

    def __post_init__(self):
        lengths = tuple(float(x) for x in np.atleast_1d(self.lengths))
        object.__setattr__(self, "lengths", lengths)
        if self.kind == "interval":
            if len(lengths) != 1:
                raise ValueError("interval takes exactly one length")
        elif self.kind == "rectangle":
            if len(lengths) != 2:
                raise ValueError("rectangle takes exactly two lengths")
        else:
            raise ValueError(f"unsupported domain kind {self.kind!r}")
        if not all(math.isfinite(x) and x > 0 for x in lengths):
            raise ValueError("domain lengths must be positive")

    @property
    def dim(self) -> int:
        return len(self.lengths)

    @property
    def measure(self) -> float:
        return float(np.prod(self.lengths))

    @classmethod
    def interval(cls, length=math.pi):
        return cls("interval", (length,))

    @classmethod
    def rectangle(cls, lx=math.pi, ly=math.pi):
        return cls("rectangle", (lx, ly))

    def to_dict(self):
        return {"kind": self.kind, "lengths": list(self.lengths)}


@dataclass(frozen=True, eq=False)
class EigenBasis:
    """N lowest Dirichlet modes of -Laplace plus a quadrature grid.

    ``phi[j, q]`` is eigenfunction ``j`` at node ``q``; ``weights`` integrate
    over the domain.
    """

    domain: DomainSpec
    eigenvalues: np.ndarray
    indices: np.ndarray
    nodes: np.ndarray
    weights: np.ndarray
    phi: np.ndarray
    oversample: int = 8
    _axis_nodes: tuple = field(default=(), repr=False)

    @property
    def size(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def n_nodes(self) -> int:
        return self.weights.shape[0]

    def refined(self, factor: int = 2) -> "EigenBasis":
        """Same modes on a grid ``factor`` times denser."""
        return build_basis(self.domain, self.size, oversample=self.oversample * factor)

    def metadata(self):
        return {
            "domain": self.domain.to_dict(),
            "N": self.size,
            "eigenvalues": self.eigenvalues.tolist(),
            "indices": self.indices.tolist(),
            "n_nodes": self.n_nodes,
            "oversample": self.oversample,
        }


def gauss_legendre_panels(length: float, n_nodes_min: int, order: int = PANEL_ORDER):
    """Composite Gauss-Legendre rule on [0, length] with >= n_nodes_min nodes."""
    panels = max(1, math.ceil(n_nodes_min / order))
    x, w = np.polynomial.legendre.leggauss(order)
    h = length / panels
    left = np.arange(panels) * h
    nodes = (left[:, None] + 0.5 * h * (x[None, :] + 1.0)).ravel()
    weights = np.tile(0.5 * h * w, panels)
    return nodes, weights


def _sine(j, x, length):
    return math.sqrt(2.0 / length) * np.sin(j * math.pi * x / length)


def build_basis(domain: DomainSpec, N: int, oversample: int = 8) -> EigenBasis:
    """Return the ``N`` lowest Dirichlet modes with exact eigenvalues.

    Ties (rectangles) are broken lexicographically on the index tuple.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if oversample < 4:
        raise ValueError("oversample must be >= 4")
    if domain.kind == "interval":
        (ell,) = domain.lengths
        idx = np.arange(1, N + 1)[:, None]
        lam = (idx[:, 0] * math.pi / ell) ** 2
    elif domain.kind == "rectangle":
        lx, ly = domain.lengths
        # every mode among the N lowest has j <= N and k <= N
        jj, kk = np.meshgrid(np.arange(1, N + 1), np.arange(1, N + 1), indexing="ij")
        jj, kk = jj.ravel(), kk.ravel()
        lam_all = (jj * math.pi / lx) ** 2 + (kk * math.pi / ly) ** 2
        order = np.lexsort((kk, jj, lam_all))[:N]
        idx = np.stack([jj[order], kk[order]], axis=1)
        lam = lam_all[order]
    else:  # pragma: no cover - DomainSpec validates
        raise ValueError(f"unsupported domain kind {domain.kind!r}")

    axis_nodes = []
    for ax, ell in enumerate(domain.lengths):
        top = int(idx[:, ax].max())
        axis_nodes.append(gauss_legendre_panels(ell, oversample * max(top, 2)))

    if domain.kind == "interval":
        x, w = axis_nodes[0]
        nodes = x[:, None]
        weights = w
        phi = _sine(idx[:, 0][:, None], x[None, :], domain.lengths[0])
    else:
        (x, wx), (y, wy) = axis_nodes
        X, Y = np.meshgrid(x, y, indexing="ij")
        nodes = np.stack([X.ravel(), Y.ravel()], axis=1)
        weights = np.outer(wx, wy).ravel()
        px = _sine(idx[:, 0][:, None], x[None, :], domain.lengths[0])
        py = _sine(idx[:, 1][:, None], y[None, :], domain.lengths[1])
        phi = (px[:, :, None] * py[:, None, :]).reshape(N, -1)

    for arr in (lam, idx, nodes, weights, phi):
        arr.setflags(write=False)
    return EigenBasis(domain, lam, idx, nodes, weights, phi, oversample, tuple(axis_nodes))


def _check_coeffs(basis: EigenBasis, u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.shape[-1] != basis.size:
        raise ValueError(f"coefficient length {u.shape[-1]} != basis size {basis.size}")
    if not np.all(np.isfinite(u)):
        raise ValueError("non-finite coefficients")
    return u


def apply_fractional(basis: EigenBasis, s: float, u) -> np.ndarray:
    """Coefficients of ``A^s u``; negative ``s`` gives the inverse."""
    u = _check_coeffs(basis, u)
    return basis.eigenvalues ** (0.5 * s) * u


def es_inner(basis: EigenBasis, s: float, u, v) -> float:
    u = _check_coeffs(basis, u)
    v = _check_coeffs(basis, v)
    return float(np.sum(basis.eigenvalues**s * u * v))


def es_norm(basis: EigenBasis, s: float, u) -> float:
    return math.sqrt(es_inner(basis, s, u, u))


def synthesize(basis: EigenBasis, u) -> np.ndarray:
    """Grid values of the function with coefficients ``u``."""
    return _check_coeffs(basis, u) @ basis.phi


def analyze(basis: EigenBasis, g) -> np.ndarray:
    """L2 coefficients of grid function ``g`` by quadrature."""
    g = np.asarray(g, dtype=float)
    if g.shape[-1] != basis.n_nodes:
        raise ValueError(f"grid length {g.shape[-1]} != node count {basis.n_nodes}")
    return (g * basis.weights) @ basis.phi.T


def critical_embedding_exponent(space_dim: int) -> float:
    """Upper end 2(N+2)/N of the parabolic embedding range."""
    return 2.0 * (space_dim + 2) / space_dim


# ---------------------------------------------------------------------------
# sup of |w|_r over a metric unit sphere
# ---------------------------------------------------------------------------


def maximize_lr_on_sphere(values, weights, r, starts, max_iter=2000, tol=1e-14):
    """Maximise ``|sum_i c_i B_i|_r`` over unit ``c``.

    ``values`` has shape ``(dim, ncomp, nq)``: direction ``i`` evaluated at
    the nodes, vector valued with ``ncomp`` components; pointwise modulus is
    Euclidean.  The objective ``c -> |w|_r^r`` is convex for ``r >= 1``, so
    the fixed-point step ``c <- grad / |grad|`` never decreases it.

    Returns ``(best_value, best_c, values_per_start)``.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim == 2:
        values = values[:, None, :]
    dim = values.shape[0]
    flat = values.reshape(dim, -1)
    ncomp = values.shape[1]
    results = []
    best = (-np.inf, None)
    for c0 in starts:
        c = np.asarray(c0, dtype=float)
        c = c / np.linalg.norm(c)
        obj_prev = -np.inf
        for _ in range(max_iter):
            w = (c @ flat).reshape(ncomp, -1)
            mod = np.sqrt(np.sum(w * w, axis=0))
            obj = float(np.sum(weights * mod**r))
            pw = weights * mod ** (r - 2.0) if r != 2 else weights
            grad = flat @ (w * pw).ravel()
            gn = np.linalg.norm(grad)
            if gn == 0.0:
                break
            c_new = grad / gn
            if obj - obj_prev <= tol * abs(obj) and np.linalg.norm(c_new - c) < 1e-10:
                c = c_new
                break
            obj_prev = obj
            c = c_new
        w = (c @ flat).reshape(ncomp, -1)
        val = float(np.sum(weights * np.sqrt(np.sum(w * w, axis=0)) ** r)) ** (1.0 / r)
        results.append(val)
        if val > best[0]:
            best = (val, c)
    return best[0], best[1], results


def embedding_constant(basis: EigenBasis, s: float, r: float, k: int, n_starts: int = 8, seed: int = 0):
    """Estimate ``sup |w|_r`` over ``w`` in span{phi_j : j >= k} with ``|w|_s = 1``.

    Starts: the lowest tail mode plus ``n_starts - 1`` seeded random
    directions.  Returns ``(beta, coefficients_of_maximiser)``.
    """
    if r < 2:
        raise ValueError("r must be >= 2")
    if not 0 <= k < basis.size:
        raise ValueError(f"tail starting at mode {k} is empty for N={basis.size}")
    lam = basis.eigenvalues[k:]
    scale = lam ** (-0.5 * s)
    values = scale[:, None] * basis.phi[k:]
    dim = lam.shape[0]
    rng = np.random.default_rng(seed)
    starts = [np.eye(dim)[0]]
    for _ in range(n_starts - 1):
        starts.append(rng.standard_normal(dim) * (lam[0] / lam))
    beta, c, _ = maximize_lr_on_sphere(values, basis.weights, r, starts)
    coeffs = np.zeros(basis.size)
    coeffs[k:] = scale * c
    return beta, coeffs
