"""Pointwise kernels for the catalogued nonlinearities and the shooting oracle.

Every kernel exists twice: a numba ``@njit`` loop and a vectorised numpy
version.  ``INDEFCRIT_DISABLE_NUMBA=1`` (or a missing numba install) selects
the numpy path at import time.  Both variants are always importable under
``*_nb`` / ``*_np`` names so tests and the benchmark can compare them.

Inputs are 1-D contiguous float64 arrays of grid values.
"""

import math
import os

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]

        def decorator(func):
            return func

        return decorator


def _flag_disabled():
    return os.environ.get("INDEFCRIT_DISABLE_NUMBA", "").strip().lower() in (
        "1",
        "true",
        "yes",
        "on",
    )


USE_NUMBA = NUMBA_AVAILABLE and not _flag_disabled()


# ---------------------------------------------------------------------------
# radial power density  H(z) = |z|^mu / mu
# ---------------------------------------------------------------------------


def radial_power_np(u, v, mu):
    r2 = u * u + v * v
    r = np.sqrt(r2)
    rm2 = r ** (mu - 2.0)
    return r * r * rm2 / mu, rm2 * u, rm2 * v


def radial_power_hess_np(u, v, mu):
    r = np.sqrt(u * u + v * v)
    rm2 = r ** (mu - 2.0)
    safe = np.where(r > 0.0, r, 1.0)
    ux = np.where(r > 0.0, u / safe, 0.0)
    vx = np.where(r > 0.0, v / safe, 0.0)
    c = (mu - 2.0) * rm2
    return rm2 + c * ux * ux, c * ux * vx, rm2 + c * vx * vx


@njit(cache=True)
def radial_power_nb(u, v, mu):
    n = u.shape[0]
    h = np.empty(n)
    hu = np.empty(n)
    hv = np.empty(n)
    for i in range(n):
        r = math.sqrt(u[i] * u[i] + v[i] * v[i])
        rm2 = r ** (mu - 2.0)
        h[i] = r * r * rm2 / mu
        hu[i] = rm2 * u[i]
        hv[i] = rm2 * v[i]
    return h, hu, hv


@njit(cache=True)
def radial_power_hess_nb(u, v, mu):
    n = u.shape[0]
    huu = np.empty(n)
    huv = np.empty(n)
    hvv = np.empty(n)
    for i in range(n):
        r = math.sqrt(u[i] * u[i] + v[i] * v[i])
        rm2 = r ** (mu - 2.0)
        if r > 0.0:
            ux = u[i] / r
            vx = v[i] / r
        else:
            ux = 0.0
            vx = 0.0
        c = (mu - 2.0) * rm2
        huu[i] = rm2 + c * ux * ux
        huv[i] = c * ux * vx
        hvv[i] = rm2 + c * vx * vx
    return huu, huv, hvv


# ---------------------------------------------------------------------------
# radial log-quadratic density  H(z) = |z|^2 log(1 + |z|)
#   H_z = h(r) z,  h(r) = 2 log(1+r) + r/(1+r)
#   H_zz = h(r) I + h'(r) r zhat zhat^T,  h'(r) = 2/(1+r) + 1/(1+r)^2
# ---------------------------------------------------------------------------


def radial_logquad_np(u, v):
    r = np.sqrt(u * u + v * v)
    lg = np.log1p(r)
    h = 2.0 * lg + r / (1.0 + r)
    return r * r * lg, h * u, h * v


def radial_logquad_hess_np(u, v):
    r = np.sqrt(u * u + v * v)
    h = 2.0 * np.log1p(r) + r / (1.0 + r)
    dh = 2.0 / (1.0 + r) + 1.0 / (1.0 + r) ** 2
    safe = np.where(r > 0.0, r, 1.0)
    ux = np.where(r > 0.0, u / safe, 0.0)
    vx = np.where(r > 0.0, v / safe, 0.0)
    c = dh * r
    return h + c * ux * ux, c * ux * vx, h + c * vx * vx


@njit(cache=True)
def radial_logquad_nb(u, v):
    n = u.shape[0]
    out_h = np.empty(n)
    hu = np.empty(n)
    hv = np.empty(n)
    for i in range(n):
        r = math.sqrt(u[i] * u[i] + v[i] * v[i])
        lg = math.log1p(r)
        h = 2.0 * lg + r / (1.0 + r)
        out_h[i] = r * r * lg
        hu[i] = h * u[i]
        hv[i] = h * v[i]
    return out_h, hu, hv


@njit(cache=True)
def radial_logquad_hess_nb(u, v):
    n = u.shape[0]
    huu = np.empty(n)
    huv = np.empty(n)
    hvv = np.empty(n)
    for i in range(n):
        r = math.sqrt(u[i] * u[i] + v[i] * v[i])
        h = 2.0 * math.log1p(r) + r / (1.0 + r)
        dh = 2.0 / (1.0 + r) + 1.0 / ((1.0 + r) * (1.0 + r))
        if r > 0.0:
            ux = u[i] / r
            vx = v[i] / r
        else:
            ux = 0.0
            vx = 0.0
        c = dh * r
        huu[i] = h + c * ux * ux
        huv[i] = c * ux * vx
        hvv[i] = h + c * vx * vx
    return huu, huv, hvv


# ---------------------------------------------------------------------------
# scalar nonlinearities: returns (F, f, f')
# ---------------------------------------------------------------------------


def scalar_power_np(u, p):
    a = np.abs(u)
    ap2 = a ** (p - 2.0)
    return a * a * ap2 / p, ap2 * u, (p - 1.0) * ap2


@njit(cache=True)
def scalar_power_nb(u, p):
    n = u.shape[0]
    big_f = np.empty(n)
    f = np.empty(n)
    df = np.empty(n)
    for i in range(n):
        a = abs(u[i])
        ap2 = a ** (p - 2.0)
        big_f[i] = a * a * ap2 / p
        f[i] = ap2 * u[i]
        df[i] = (p - 1.0) * ap2
    return big_f, f, df


# F(u) = (a^2 - 1) log(1 + a) / 2 - a^2 / 4 + a / 2 with a = |u| cancels to
# O(a^3) near 0; below LOGPOWER_SERIES_CUT use sum_m (-1)^(m+1) a^(m+2) / (m (m+2)).
LOGPOWER_SERIES_CUT = 0.25
LOGPOWER_SERIES_TERMS = 30


def _logpower_series_np(a):
    out = np.zeros_like(a)
    for m in range(LOGPOWER_SERIES_TERMS, 0, -1):
        out = out * (-a) + 1.0 / (m * (m + 2))
    return out * a**3


def scalar_logpower_np(u):
    a = np.abs(u)
    lg = np.log1p(a)
    big_f = 0.5 * (a * a - 1.0) * lg - 0.25 * a * a + 0.5 * a
    small = a < LOGPOWER_SERIES_CUT
    big_f[small] = _logpower_series_np(a[small])
    return big_f, u * lg, lg + a / (1.0 + a)


@njit(cache=True)
def scalar_logpower_nb(u):
    n = u.shape[0]
    big_f = np.empty(n)
    f = np.empty(n)
    df = np.empty(n)
    for i in range(n):
        a = abs(u[i])
        lg = math.log1p(a)
        if a < LOGPOWER_SERIES_CUT:
            acc = 0.0
            for m in range(LOGPOWER_SERIES_TERMS, 0, -1):
                acc = acc * (-a) + 1.0 / (m * (m + 2))
            big_f[i] = acc * a * a * a
        else:
            big_f[i] = 0.5 * (a * a - 1.0) * lg - 0.25 * a * a + 0.5 * a
        f[i] = u[i] * lg
        df[i] = lg + a / (1.0 + a)
    return big_f, f, df


# ---------------------------------------------------------------------------
# shooting oracle: classical RK4 for u'' = -|u|^(p-2) u from (0, slope)
# returns (u(L), energy integral of u'^2/2 - |u|^p/p by composite Simpson)
# ---------------------------------------------------------------------------


def shoot_rk4_np(slope, p, length, nsteps):
    h = length / nsteps
    u = 0.0
    w = slope
    e_prev = 0.5 * w * w
    acc = e_prev
    for i in range(1, nsteps + 1):
        k1u = w
        k1w = -abs(u) ** (p - 2.0) * u
        u2 = u + 0.5 * h * k1u
        k2u = w + 0.5 * h * k1w
        k2w = -abs(u2) ** (p - 2.0) * u2
        u3 = u + 0.5 * h * k2u
        k3u = w + 0.5 * h * k2w
        k3w = -abs(u3) ** (p - 2.0) * u3
        u4 = u + h * k3u
        k4u = w + h * k3w
        k4w = -abs(u4) ** (p - 2.0) * u4
        u = u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        w = w + h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)
        e = 0.5 * w * w - abs(u) ** p / p
        if i == nsteps:
            acc += e
        elif i % 2 == 1:
            acc += 4.0 * e
        else:
            acc += 2.0 * e
    return u, acc * h / 3.0


shoot_rk4_nb = njit(cache=True)(shoot_rk4_np)


if USE_NUMBA:
    radial_power = radial_power_nb
    radial_power_hess = radial_power_hess_nb
    radial_logquad = radial_logquad_nb
    radial_logquad_hess = radial_logquad_hess_nb
    scalar_power = scalar_power_nb
    scalar_logpower = scalar_logpower_nb
    shoot_rk4 = shoot_rk4_nb
else:
    radial_power = radial_power_np
    radial_power_hess = radial_power_hess_np
    radial_logquad = radial_logquad_np
    radial_logquad_hess = radial_logquad_hess_np
    scalar_power = scalar_power_np
    scalar_logpower = scalar_logpower_np
    shoot_rk4 = shoot_rk4_np
