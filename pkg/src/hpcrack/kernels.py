"""Hot loops, each in a numba and a pure-numpy flavour.

The public names at the bottom dispatch on ``_accel.BACKEND``.  Both
flavours are always importable so tests can compare them directly.
"""
import math

import numpy as np

from ._accel import BACKEND, njit, prange

GUARD = 1e-9
_INV_PI = 1.0 / math.pi


# ---------------------------------------------------------------- kernel

@njit(cache=True)
def _xlogx_scalar(v):
    v = abs(v)
    if v < GUARD:
        return 0.0
    return v * math.log(v)


@njit(cache=True)
def _kernel_scalar(x, s, alpha):
    if s <= x:
        gss = -0.25 * (x - 1.0) ** 2 * (2.0 * s + x * s + 1.0)
    else:
        gss = -0.25 * (x + 1.0) ** 2 * (-2.0 * s + x * s + 1.0)
    d = abs(x - s)
    t2 = 0.0 if d < GUARD else d * d * math.log(d)
    kh = ((s * x - 1.0) * (x * x - 1.0) * 0.25 * _INV_PI
          + t2 * 0.5 * _INV_PI
          - (x - 1.0) ** 2 * (-x + 2.0 * s + s * x) * _xlogx_scalar(1.0 + s) * 0.125 * _INV_PI
          - (x + 1.0) ** 2 * (x - 2.0 * s + s * x) * _xlogx_scalar(1.0 - s) * 0.125 * _INV_PI)
    return -alpha * gss + kh


@njit(cache=True)
def kernel_matrix_numba(x, s, alpha):
    out = np.empty((x.size, s.size))
    for i in range(x.size):
        for j in range(s.size):
            out[i, j] = _kernel_scalar(x[i], s[j], alpha)
    return out


def _xlogx(v):
    v = np.abs(v)
    out = np.zeros_like(v)
    m = v >= GUARD
    out[m] = v[m] * np.log(v[m])
    return out


def hilbert_part_numpy(x, s):
    x, s = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(s, dtype=float))
    d = np.abs(x - s)
    t2 = np.zeros_like(d)
    m = d >= GUARD
    t2[m] = d[m] ** 2 * np.log(d[m])
    return ((s * x - 1) * (x * x - 1) / (4 * np.pi)
            + t2 / (2 * np.pi)
            - (x - 1) ** 2 * (-x + 2 * s + s * x) * _xlogx(1 + s) / (8 * np.pi)
            - (x + 1) ** 2 * (x - 2 * s + s * x) * _xlogx(1 - s) / (8 * np.pi))


def kernel_matrix_numpy(x, s, alpha):
    X, S = np.meshgrid(x, s, indexing="ij")
    gss = np.where(S <= X, -0.25 * (X - 1) ** 2 * (2 * S + X * S + 1),
                   -0.25 * (X + 1) ** 2 * (-2 * S + X * S + 1))
    return -alpha * gss + hilbert_part_numpy(X, S)


# ------------------------------------------------- Hilbert product rule
#
# g = f' is treated as piecewise linear on the grid; the p.v. integral of
# each hat against 1/(x_i - s) is exact.  In units of h the interior hat
# weight depends only on m = i - j; the two end columns are half hats.

@njit(cache=True)
def _mlogm(m):
    return 0.0 if m == 0.0 else m * math.log(abs(m))


@njit(cache=True)
def _hat_weight(m):
    return _mlogm(m + 1.0) - 2.0 * _mlogm(m) + _mlogm(m - 1.0)


@njit(cache=True)
def _log_abs0(m):
    return 0.0 if m == 0.0 else math.log(abs(m))


@njit(cache=True)
def _half_hat_weight(m):
    return 1.0 + (1.0 - m) * (_log_abs0(m) - _log_abs0(m - 1.0))


@njit(cache=True)
def hilbert_apply_numba(g):
    n = g.size
    # Toeplitz table for interior hats, indexed by m + n - 1
    tab = np.empty(2 * n - 1)
    for k in range(2 * n - 1):
        tab[k] = _hat_weight(float(k - (n - 1)))
    out = np.empty(n)
    for i in range(n):
        acc = _half_hat_weight(float(i)) * g[0]
        acc -= _half_hat_weight(-float(i - (n - 1))) * g[n - 1]
        for j in range(1, n - 1):
            acc += tab[i - j + n - 1] * g[j]
        out[i] = acc * _INV_PI
    return out


def _mlogm_np(m):
    out = np.zeros_like(m)
    nz = m != 0
    out[nz] = m[nz] * np.log(np.abs(m[nz]))
    return out


def _log_abs0_np(m):
    out = np.zeros_like(m)
    nz = m != 0
    out[nz] = np.log(np.abs(m[nz]))
    return out


def hilbert_weights_numpy(n):
    i = np.arange(n, dtype=float)
    m = i[:, None] - i[None, :]
    W = _mlogm_np(m + 1) - 2 * _mlogm_np(m) + _mlogm_np(m - 1)

    def half(mm):
        return 1 + (1 - mm) * (_log_abs0_np(mm) - _log_abs0_np(mm - 1))

    W[:, 0] = half(m[:, 0])
    W[:, -1] = -half(-m[:, -1])
    return W


def hilbert_apply_numpy(g):
    return hilbert_weights_numpy(g.size) @ g / np.pi


# ------------------------------------------------ Poisson panel integrals
#
# On each panel the profile is a cubic, its derivative a quadratic.  After
# re-expanding in u = s - x the integrals against y/(u^2+y^2) and
# u/(u^2+y^2) have elementary antiderivatives.

@njit(cache=True)
def _antiderivs(u, y, P, Q):
    A = math.atan2(u, y)
    r2 = u * u + y * y
    Lg = 0.5 * math.log(r2) if r2 > 0.0 else 0.0
    P[0] = A
    P[1] = y * Lg
    P[2] = y * u - y * y * A
    P[3] = 0.5 * y * u * u - y ** 3 * Lg
    Q[0] = Lg
    Q[1] = u - y * A
    Q[2] = 0.5 * u * u - y * y * Lg


@njit(cache=True, parallel=True)
def poisson_panels_numba(knots, coef, xs, ys):
    """coef[k, j]: coefficient of (s - knots[j])**(3 - k) on panel j."""
    nx, ny, npan = xs.size, ys.size, knots.size - 1
    w = np.zeros((ny, nx))
    wx = np.zeros((ny, nx))
    wy = np.zeros((ny, nx))
    # rows are independent; each node sums its panels in a fixed order
    for iy in prange(ny):
        y = ys[iy]
        Pa = np.empty(4)
        Qa = np.empty(3)
        Pb = np.empty(4)
        Qb = np.empty(3)
        a = np.empty(4)
        b = np.empty(3)
        for ix in range(nx):
            x = xs[ix]
            sw = 0.0
            swx = 0.0
            swy = 0.0
            for j in range(npan):
                d = x - knots[j]
                c3, c2, c1, c0 = coef[0, j], coef[1, j], coef[2, j], coef[3, j]
                # p(t) with t = u + d, expanded in u = s - x
                a[0] = c0 + d * (c1 + d * (c2 + d * c3))
                a[1] = c1 + d * (2.0 * c2 + 3.0 * d * c3)
                a[2] = c2 + 3.0 * d * c3
                a[3] = c3
                b[0] = a[1]
                b[1] = 2.0 * a[2]
                b[2] = 3.0 * a[3]
                _antiderivs(-d, y, Pa, Qa)
                _antiderivs(knots[j + 1] - x, y, Pb, Qb)
                for k in range(4):
                    sw += a[k] * (Pb[k] - Pa[k])
                for k in range(3):
                    swx += b[k] * (Pb[k] - Pa[k])
                    swy += b[k] * (Qb[k] - Qa[k])
            w[iy, ix] = sw * _INV_PI
            wx[iy, ix] = swx * _INV_PI
            wy[iy, ix] = swy * _INV_PI
    return w, wx, wy


def _antiderivs_np(u, y):
    A = np.arctan2(u, y)
    r2 = u * u + y * y
    Lg = np.zeros_like(r2)
    nz = r2 > 0
    Lg[nz] = 0.5 * np.log(r2[nz])
    P = (A, y * Lg, y * u - y * y * A, 0.5 * y * u * u - y ** 3 * Lg)
    Q = (Lg, u - y * A, 0.5 * u * u - y * y * Lg)
    return P, Q


def poisson_panels_numpy(knots, coef, xs, ys):
    d = xs[:, None] - knots[None, :-1]          # (nx, npan)
    e = knots[None, 1:] - xs[:, None]
    c3, c2, c1, c0 = (coef[k][None, :] for k in range(4))
    a = (c0 + d * (c1 + d * (c2 + d * c3)),
         c1 + d * (2 * c2 + 3 * d * c3),
         c2 + 3 * d * c3,
         np.broadcast_to(c3, d.shape))
    b = (a[1], 2 * a[2], 3 * a[3])
    shape = (ys.size, xs.size)
    w, wx, wy = np.zeros(shape), np.zeros(shape), np.zeros(shape)
    for iy, y in enumerate(ys):
        Pa, Qa = _antiderivs_np(-d, y)
        Pb, Qb = _antiderivs_np(e, y)
        w[iy] = sum((a[k] * (Pb[k] - Pa[k])).sum(axis=1) for k in range(4))
        wx[iy] = sum((b[k] * (Pb[k] - Pa[k])).sum(axis=1) for k in range(3))
        wy[iy] = sum((b[k] * (Qb[k] - Qa[k])).sum(axis=1) for k in range(3))
    return w / np.pi, wx / np.pi, wy / np.pi


if BACKEND == "numba":
    kernel_matrix = kernel_matrix_numba
    hilbert_apply = hilbert_apply_numba
    poisson_panels = poisson_panels_numba
else:
    kernel_matrix = kernel_matrix_numpy
    hilbert_apply = hilbert_apply_numpy
    poisson_panels = poisson_panels_numpy
