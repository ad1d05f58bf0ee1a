"""Finite-difference stencils on uniform grids.

First derivatives are fourth order everywhere, using one-sided five-point
stencils at the two nodes nearest each end.  Higher derivatives are only
filled where the centred stencil fits; other entries are NaN.
"""
import numpy as np

_END0 = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0
_END1 = np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / 12.0


def d1(f, h):
    f = np.asarray(f, dtype=float)
    g = np.empty_like(f)
    g[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)
    g[0] = _END0 @ f[:5] / h
    g[1] = _END1 @ f[:5] / h
    g[-1] = -(_END0 @ f[::-1][:5]) / h
    g[-2] = -(_END1 @ f[::-1][:5]) / h
    return g


def d2(f, h):
    f = np.asarray(f, dtype=float)
    r = np.full_like(f, np.nan)
    r[2:-2] = (-f[:-4] + 16 * f[1:-3] - 30 * f[2:-2] + 16 * f[3:-1] - f[4:]) / (12 * h * h)
    return r


def d4(f, h):
    f = np.asarray(f, dtype=float)
    r = np.full_like(f, np.nan)
    r[3:-3] = (-f[:-6] + 12 * f[1:-5] - 39 * f[2:-4] + 56 * f[3:-3]
               - 39 * f[4:-2] + 12 * f[5:-1] - f[6:]) / (6 * h ** 4)
    return r
