"""Indefinite splittings X = X- (+) X+ for the elliptic (ES) and Hamiltonian (HS) problems.

A point is a *raw* coefficient vector ``z = [u-coefficients, v-coefficients]``.
ES uses the spatial eigenbasis for each component.  HS uses products
``tau_m(t) phi_j(x)`` with the real temporal basis
``[1, cos(w_1 t), sin(w_1 t), cos(w_2 t), ...]`` (L2-normalised on [0, T]),
raw index ``m * N + j``.

Every split carries a matrix ``D`` whose columns are the X-orthonormal
eigen-directions of the quadratic form, one 2-d (or 4-d) block per mode.
Split coordinates are ``c = D^{-1} z``; the first ``n_plus`` entries are the
X+ coordinates in e-order (ascending weight, then mode label), the rest the
X- coordinates in the same order.  In these coordinates the quadratic part
of the energy is ``0.5*|c+|^2 - 0.5*|c-|^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .spectral import EigenBasis

__all__ = [
    "SplitSpace",
    "TauWeights",
    "build_es_split",
    "build_hs_split",
    "project_pm",
    "tau_norm",
    "galerkin_subspaces",
    "split_norm",
]


@dataclass(frozen=True, eq=False)
class SplitSpace:
    problem: str
    basis: EigenBasis
    D: np.ndarray
    Dinv: np.ndarray
    metric: np.ndarray
    signs: np.ndarray
    weights_mu: np.ndarray
    labels: tuple
    n_plus: int
    synthesis: np.ndarray
    quad_weights: np.ndarray
    measure: float
    params: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.D.shape[1]

    @property
    def n_raw(self) -> int:
        """Raw coefficients per component."""
        return self.D.shape[0] // 2

    @property
    def n_minus(self) -> int:
        return self.dim - self.n_plus

    @property
    def plus(self) -> slice:
        return slice(0, self.n_plus)

    @property
    def minus(self) -> slice:
        return slice(self.n_plus, self.dim)

    def to_split(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        if z.shape[-1] != self.D.shape[0]:
            raise ValueError(f"point has {z.shape[-1]} coefficients, split expects {self.D.shape[0]}")
        return z @ self.Dinv.T

    def from_split(self, c) -> np.ndarray:
        c = np.asarray(c, dtype=float)
        if c.shape[-1] != self.dim:
            raise ValueError(f"split coordinates have length {c.shape[-1]}, expected {self.dim}")
        return c @ self.D.T

    def pack(self, u, v) -> np.ndarray:
        return np.concatenate([np.ravel(u), np.ravel(v)])

    def unpack(self, z):
        z = np.asarray(z, dtype=float)
        return z[: self.n_raw], z[self.n_raw :]

    def direction(self, i: int) -> np.ndarray:
        """Raw coefficients of the i-th X-orthonormal direction."""
        return self.D[:, i].copy()

    def metadata(self):
        return {
            "problem": self.problem,
            "params": dict(self.params),
            "n_plus": self.n_plus,
            "n_minus": self.n_minus,
            "labels": [list(lab) for lab in self.labels],
            "mu": self.weights_mu.tolist(),
            "signs": self.signs.astype(int).tolist(),
            "basis": self.basis.metadata(),
        }


def _assemble(problem, basis, blocks, synthesis, quad_weights, measure, params):
    """Order block directions into split coordinates and freeze the split.

    ``blocks`` yields ``(raw_indices, vector, sign, mu, label)`` with ``vector``
    X-normalised over ``raw_indices``.
    """
    n_raw_total = 2 * synthesis.shape[0]
    entries = list(blocks)
    plus = sorted((e for e in entries if e[2] > 0), key=lambda e: (e[3], e[4]))
    minus = sorted((e for e in entries if e[2] < 0), key=lambda e: (e[3], e[4]))
    ordered = plus + minus
    if len(ordered) != n_raw_total:
        raise AssertionError("split does not span the raw space")
    D = np.zeros((n_raw_total, len(ordered)))
    for col, (rows, vec, _, _, _) in enumerate(ordered):
        D[rows, col] = vec
    signs = np.array([1.0] * len(plus) + [-1.0] * len(minus))
    mu = np.array([e[3] for e in ordered])
    labels = tuple(tuple(int(x) for x in e[4]) for e in ordered)
    return D, signs, mu, labels, len(plus)


def build_es_split(basis: EigenBasis, s: float, t: float) -> SplitSpace:
    """Splitting of E^s x E^t by ``E+- = {(u, +-A^{s-t} u)}``."""
    if not math.isclose(s + t, 2.0, rel_tol=0, abs_tol=1e-12):
        raise ValueError(f"s + t must equal 2 (got {s} + {t})")
    if not (s > 0 and t > 0):
        raise ValueError("exponents s, t must be positive")
    if s < t:
        raise ValueError("convention s >= t; swap the roles of (u, f) and (v, g)")
    N = basis.size
    lam = basis.eigenvalues

    def blocks():
        for j in range(N):
            rows = np.array([j, N + j])
            ratio = lam[j] ** (0.5 * (s - t))
            norm = math.sqrt(2.0 * lam[j] ** s)
            label = (j,)
            yield rows, np.array([1.0, ratio]) / norm, 1, lam[j], label
            yield rows, np.array([1.0, -ratio]) / norm, -1, lam[j], label

    D, signs, mu, labels, n_plus = _assemble("ES", basis, blocks(), basis.phi, basis.weights, basis.domain.measure, {})
    metric = np.diag(np.concatenate([lam**s, lam**t]))
    return SplitSpace(
        problem="ES",
        basis=basis,
        D=D,
        Dinv=D.T @ metric,
        metric=metric,
        signs=signs,
        weights_mu=mu,
        labels=labels,
        n_plus=n_plus,
        synthesis=basis.phi,
        quad_weights=basis.weights,
        measure=basis.domain.measure,
        params={"s": float(s), "t": float(t)},
    )


def temporal_basis(T: float, K: int, nt: int):
    """Nodes, weights and values (2K+1, nt) of the real trig basis on [0, T]."""
    t = np.arange(nt) * (T / nt)
    w = np.full(nt, T / nt)
    rows = [np.full(nt, 1.0 / math.sqrt(T))]
    for k in range(1, K + 1):
        om = 2.0 * math.pi * k / T
        rows.append(math.sqrt(2.0 / T) * np.cos(om * t))
        rows.append(math.sqrt(2.0 / T) * np.sin(om * t))
    return t, w, np.array(rows)


def build_hs_split(basis: EigenBasis, V0: float, T: float, K: int, nt: int | None = None) -> SplitSpace:
    """Splitting of ``L = J d/dt + J0 (-Laplace + V0)`` on T-periodic fields.

    Weights are ``mu = sqrt((lambda_j + V0)^2 + w_k^2)``, the moduli of the
    block eigenvalues of L.
    """
    if K < 0:
        raise ValueError("temporal cutoff K must be >= 0")
    if T <= 0:
        raise ValueError("period T must be positive")
    shifted = basis.eigenvalues + V0
    bad = np.flatnonzero(np.abs(shifted) < 1e-12 * max(1.0, abs(V0)))
    if bad.size:
        raise ValueError(f"(V2) violated: 0 in spectrum of -Laplace + V0 (mode {int(bad[0])})")
    N = basis.size
    nt = nt or max(8, basis.oversample * max(K, 1))
    if nt < 4 * K + 1:
        raise ValueError("temporal grid too coarse for the cutoff")
    t_nodes, t_weights, tau = temporal_basis(T, K, nt)
    # nodes ordered time-major: q = a * nq_x + b
    synthesis = np.kron(tau, basis.phi)
    quad_weights = np.kron(t_weights, basis.weights)
    n_raw = (2 * K + 1) * N

    def blocks():
        for j in range(N):
            sg = shifted[j]
            rows = np.array([j, n_raw + j])
            mu = abs(sg)
            sgn = 1.0 if sg > 0 else -1.0
            vec = np.array([1.0, sgn]) / math.sqrt(2.0 * mu)
            yield rows, vec, 1, mu, (j, 0, 0)
            yield rows, np.array([1.0, -sgn]) / math.sqrt(2.0 * mu), -1, mu, (j, 0, 0)
            for k in range(1, K + 1):
                om = 2.0 * math.pi * k / T
                mu = math.hypot(sg, om)
                ic, is_ = (2 * k - 1) * N + j, 2 * k * N + j
                rows = np.array([ic, is_, n_raw + ic, n_raw + is_])
                a, b = sg / mu, om / mu
                scale = 1.0 / math.sqrt(2.0 * mu)
                yield rows, scale * np.array([1.0, 0.0, a, -b]), 1, mu, (j, k, 0)
                yield rows, scale * np.array([0.0, 1.0, b, a]), 1, mu, (j, k, 1)
                yield rows, scale * np.array([1.0, 0.0, -a, b]), -1, mu, (j, k, 0)
                yield rows, scale * np.array([0.0, 1.0, -b, -a]), -1, mu, (j, k, 1)

    D, signs, mu, labels, n_plus = _assemble(
        "HS", basis, blocks(), synthesis, quad_weights, T * basis.domain.measure, {}
    )
    # X metric is |L| in raw coordinates: D^-T D^-1 with D^-1 = diag(mu) D^T
    Dinv = mu[:, None] * D.T
    metric = Dinv.T @ Dinv
    return SplitSpace(
        problem="HS",
        basis=basis,
        D=D,
        Dinv=Dinv,
        metric=metric,
        signs=signs,
        weights_mu=mu,
        labels=labels,
        n_plus=n_plus,
        synthesis=synthesis,
        quad_weights=quad_weights,
        measure=T * basis.domain.measure,
        params={"V0": float(V0), "T": float(T), "K": int(K), "nt": int(nt), "t_nodes": t_nodes},
    )


def split_norm(split: SplitSpace, z) -> float:
    return float(np.linalg.norm(split.to_split(z)))


def project_pm(split: SplitSpace, z):
    """Return ``(z+, z-)`` as raw coefficient vectors."""
    c = split.to_split(z)
    cp = c.copy()
    cp[split.minus] = 0.0
    zp = split.from_split(cp)
    return zp, np.asarray(z, dtype=float) - zp


@dataclass(frozen=True)
class TauWeights:
    """Enumeration (a_j) of the X- directions with weights 2^-(j+1)."""

    order: np.ndarray
    weights: np.ndarray

    @classmethod
    def default(cls, split: SplitSpace) -> "TauWeights":
        order = np.arange(split.n_plus, split.dim)
        return cls(order, 0.5 ** (np.arange(order.size) + 1.0))


def tau_norm(split: SplitSpace, order: TauWeights | None, z) -> float:
    """``max(sum_j 2^-(j+1) |<P- z, a_j>|, ||P+ z||)``."""
    order = order or TauWeights.default(split)
    c = split.to_split(z)
    weak = float(np.sum(order.weights * np.abs(c[order.order])))
    strong = float(np.linalg.norm(c[split.plus]))
    return max(weak, strong)


def galerkin_subspaces(split: SplitSpace, k: int):
    """Split-coordinate index sets of ``X_k^-`` and ``X_k^+``; they share ``e_k``."""
    if not 0 <= k < split.n_plus:
        raise ValueError(f"k={k} out of range [0, {split.n_plus})")
    minus = np.concatenate([np.arange(k + 1), np.arange(split.n_plus, split.dim)])
    plus = np.arange(k, split.n_plus)
    return minus, plus
