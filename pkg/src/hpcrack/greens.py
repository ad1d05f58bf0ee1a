"""Clamped fourth-order Green function on [-1, 1].

``G(x, tau)`` solves ``G_xxxx = delta(x - tau)`` with ``G = G_x = 0`` at
``x = +-1``.  Both branches are one polynomial ``_b(x, tau)`` evaluated
with its arguments in either order, so every derivative below is written
in terms of the partials of ``_b``.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

_DOMAIN_SLACK = 1e-12


def _check_domain(*args):
    for a in args:
        a = np.asarray(a, dtype=float)
        if a.size and (not np.all(np.isfinite(a))
                       or np.max(np.abs(a)) > 1.0 + _DOMAIN_SLACK):
            raise DomainError("Green function arguments must lie in [-1, 1]")


# _b(x, t) is the tau <= x branch; the tau >= x branch is _b(t, x).
def _b(x, t):
    return (x - 1) ** 2 * (t + 1) ** 2 * (1 + 2 * x - 2 * t - x * t) / 24


def _b_1(x, t):
    c = 1 + 2 * x - 2 * t - x * t
    return (2 * (x - 1) * (t + 1) ** 2 * c + (x - 1) ** 2 * (t + 1) ** 2 * (2 - t)) / 24


def _b_2(x, t):
    c = 1 + 2 * x - 2 * t - x * t
    return ((x - 1) ** 2 * 2 * (t + 1) * c - (x - 1) ** 2 * (t + 1) ** 2 * (2 + x)) / 24


def _b_11(x, t):
    c = 1 + 2 * x - 2 * t - x * t
    return (t + 1) ** 2 * (2 * c + 4 * (x - 1) * (2 - t)) / 24


def _b_22(x, t):
    return -0.25 * (x - 1) ** 2 * (1 + 2 * t + x * t)


def _branch(x, t, lower, upper):
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    _check_domain(x, t)
    out = np.where(t <= x, lower(x, t), upper(t, x))
    return out[()] if out.ndim == 0 else out


def green(x, tau):
    """Evaluate G(x, tau); broadcasts over array arguments."""
    return _branch(x, tau, _b, _b)


def green_x(x, tau):
    return _branch(x, tau, _b_1, _b_2)


def green_xx(x, tau):
    return _branch(x, tau, _b_11, _b_22)


def green_tau(x, tau):
    return _branch(x, tau, _b_2, _b_1)


def green_tautau(x, tau):
    return _branch(x, tau, _b_22, _b_11)


def green_dss(x, s):
    """Second derivative of G in its second argument, in the printed two-branch form.

    Identical to :func:`green_tautau`; kept separate because the Fredholm
    kernel is written in terms of this form.
    """
    x = np.asarray(x, dtype=float)
    s = np.asarray(s, dtype=float)
    _check_domain(x, s)
    out = np.where(s <= x,
                   -0.25 * (x - 1) ** 2 * (2 * s + x * s + 1),
                   -0.25 * (x + 1) ** 2 * (-2 * s + x * s + 1))
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class GreenEval:
    x: float
    tau: float
    G: float
    G_x: float
    G_xx: float
    G_tau: float
    G_tautau: float


def green_eval(x, tau):
    return GreenEval(float(x), float(tau), float(green(x, tau)), float(green_x(x, tau)),
                     float(green_xx(x, tau)), float(green_tau(x, tau)),
                     float(green_tautau(x, tau)))


def split_gauss_legendre(x, nodes=64):
    """Composite Gauss-Legendre rule on [-1, 1] split at ``x``.

    Returns ``(points, weights)``.  Integrands built from G have a jump in
    a derivative at tau = x, so each side gets its own rule.
    """
    _check_domain(x)
    g, w = np.polynomial.legendre.leggauss(nodes)
    pts, wts = [], []
    for a, b in ((-1.0, float(x)), (float(x), 1.0)):
        if b - a <= 0.0:
            continue
        pts.append(0.5 * (b - a) * g + 0.5 * (a + b))
        wts.append(0.5 * (b - a) * w)
    return np.concatenate(pts), np.concatenate(wts)


def green_identity_check(x, f, f_dd, nodes=64):
    """Return ``|int G_tautau(x, tau) f''(tau) dtau - f(x)|``.

    ``f`` and ``f_dd`` are callables; ``f`` must vanish with its first
    derivative at both ends for the identity to hold.
    """
    pts, wts = split_gauss_legendre(x, nodes)
    integral = np.sum(wts * green_tautau(x, pts) * f_dd(pts))
    return float(abs(integral - f(x)))


def green_row_integral(x, nodes=64):
    """``int_{-1}^{1} G(x, tau) dtau`` by split Gauss-Legendre quadrature."""
    pts, wts = split_gauss_legendre(x, nodes)
    return float(np.sum(wts * green(x, pts)))
