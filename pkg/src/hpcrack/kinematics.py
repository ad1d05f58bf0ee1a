"""Kinematics of a reference surface convected by a deformation.

Component conventions: tangent quantities are stored as covariant
components in the chart basis ``Y_{,a}``.  Arrays are indexed
``Y_a[a, i]``, ``Y_ab[a, b, i]``, ``Gamma[m, a, b]`` (upper index first) and
``L[a, b, d]``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, SingularChartError

RCOND_MIN = 1e-10
GEODESIC_STEP = 1e-3

# central stencils: offsets -4..4
_D1 = {2: np.array([0, 0, 0, -0.5, 0, 0.5, 0, 0, 0]),
       8: np.array([1 / 280, -4 / 105, 1 / 5, -4 / 5, 0, 4 / 5, -1 / 5, 4 / 105, -1 / 280])}
_D2 = {2: np.array([0, 0, 0, 1.0, -2.0, 1.0, 0, 0, 0]),
       8: np.array([-1 / 560, 8 / 315, -1 / 5, 8 / 5, -205 / 72, 8 / 5, -1 / 5, 8 / 315, -1 / 560])}
_OFFS = np.arange(-4, 5)
# default steps per stencil order: (first derivatives, second derivatives)
FD_STEPS = {2: (1e-5, 1e-4), 8: (1e-3, 1e-2)}


def fd_jet(fn, x0, *, order=8, steps=None):
    """Value, gradient and Hessian of a vector map by central differences.

    Returns ``(v, d1, d2)`` with ``d1[a] = dv/dx_a`` and
    ``d2[a, b] = d2v/dx_a dx_b``.  Steps are scaled by ``max(1, |x0|)``.
    """
    if order not in _D1:
        raise ValueError("order must be 2 or 8")
    h1, h2 = steps or FD_STEPS[order]
    x0 = np.asarray(x0, dtype=float)
    scale = max(1.0, float(np.max(np.abs(x0))))
    h1 *= scale
    h2 *= scale
    c1, c2 = _D1[order], _D2[order]
    used = np.flatnonzero(c1 != 0)
    used2 = np.flatnonzero(c2 != 0)
    v = np.asarray(fn(x0), dtype=float)
    m = x0.size
    eye = np.eye(m)
    d1 = np.empty((m,) + v.shape)
    d2 = np.empty((m, m) + v.shape)
    for a in range(m):
        d1[a] = sum(c1[k] * np.asarray(fn(x0 + _OFFS[k] * h1 * eye[a])) for k in used) / h1
        d2[a, a] = sum(c2[k] * np.asarray(fn(x0 + _OFFS[k] * h2 * eye[a])) for k in used2) / h2 ** 2
        for b in range(a):
            acc = 0.0
            for i in used:
                for j in used:
                    acc = acc + c1[i] * c1[j] * np.asarray(
                        fn(x0 + _OFFS[i] * h2 * eye[a] + _OFFS[j] * h2 * eye[b]))
            d2[a, b] = d2[b, a] = acc / h2 ** 2
    return v, d1, d2


@dataclass(frozen=True)
class SurfaceChart:
    """Parameterization ``theta -> Y(theta)`` of the reference surface.

    ``d1(theta)`` returns ``Y_{,a}`` as a (2, 3) array and ``d2(theta)``
    returns ``Y_{,ab}`` as (2, 2, 3); when omitted they come from
    finite differences.
    """

    embed: Callable
    d1: Optional[Callable] = None
    d2: Optional[Callable] = None
    domain: tuple = ((-np.inf, np.inf), (-np.inf, np.inf))
    fd_order: int = 8

    def contains(self, theta):
        return all(lo <= t <= hi for t, (lo, hi) in zip(theta, self.domain))

    def jet(self, theta):
        theta = np.asarray(theta, dtype=float)
        if not self.contains(theta):
            raise DomainError(f"chart point {theta} outside {self.domain}")
        if self.d1 is not None and self.d2 is not None:
            return (np.asarray(self.embed(theta), float), np.asarray(self.d1(theta), float),
                    np.asarray(self.d2(theta), float))
        return fd_jet(self.embed, theta, order=self.fd_order)


@dataclass(frozen=True)
class DeformationMap:
    """Deformation ``X -> chi(X)`` of 3-space.

    ``grad(X)[i, j] = d chi_i / d X_j`` and ``hess(X)[i, j, k]`` the second
    partials; finite differences when omitted.
    """

    chi: Callable
    grad: Optional[Callable] = None
    hess: Optional[Callable] = None
    fd_order: int = 8

    def jet(self, X):
        X = np.asarray(X, dtype=float)
        if self.grad is not None and self.hess is not None:
            F = np.asarray(self.grad(X), float)
            H = np.asarray(self.hess(X), float)
        else:
            _, d1, d2 = fd_jet(self.chi, X, order=self.fd_order)
            F = d1.T                            # d1[j, i] -> F[i, j]
            H = np.moveaxis(d2, 2, 0)           # d2[j, k, i] -> H[i, j, k]
        if np.linalg.det(F) <= 0:
            raise DomainError("deformation is not orientation preserving here")
        return np.asarray(self.chi(X), float), F, H

    def composed_with_rigid(self, Q, c):
        """``X -> Q chi(X) + c`` with the same derivative mode."""
        Q = np.asarray(Q, float)
        c = np.asarray(c, float)
        if self.grad is None or self.hess is None:
            return DeformationMap(lambda X: Q @ self.chi(X) + c, fd_order=self.fd_order)
        return DeformationMap(lambda X: Q @ self.chi(X) + c,
                              lambda X: Q @ self.grad(X),
                              lambda X: np.einsum("il,ljk->ijk", Q, self.hess(X)))


def identity_deformation() -> DeformationMap:
    return DeformationMap(lambda X: np.array(X, float), lambda X: np.eye(3),
                          lambda X: np.zeros((3, 3, 3)))


@dataclass(frozen=True)
class SurfaceState:
    Y_a: np.ndarray
    Y_ab: np.ndarray
    y_a: np.ndarray
    y_ab: np.ndarray
    Y_dual: np.ndarray
    y_dual: np.ndarray
    G: np.ndarray
    g: np.ndarray
    N: np.ndarray
    n: np.ndarray
    B: np.ndarray
    b: np.ndarray
    Gamma: np.ndarray
    gamma: np.ndarray
    E: np.ndarray
    K: np.ndarray
    L: np.ndarray

    @property
    def G_inv(self):
        return np.linalg.inv(self.G)

    @property
    def g_inv(self):
        return np.linalg.inv(self.g)


def _metric_checks(M, what):
    w = np.linalg.eigvalsh(0.5 * (M + M.T))
    if w[0] <= 0 or w[0] / w[-1] < RCOND_MIN:
        raise SingularChartError(f"{what} metric is degenerate (eigenvalues {w})")


def _frame(a_vecs, ab_vecs, what):
    M = a_vecs @ a_vecs.T
    _metric_checks(M, what)
    Minv = np.linalg.inv(M)
    dual = Minv @ a_vecs
    nrm = np.cross(a_vecs[0], a_vecs[1])
    nrm /= np.linalg.norm(nrm)
    second = ab_vecs @ nrm
    christ = np.einsum("mi,abi->mab", dual, ab_vecs)
    return M, dual, nrm, second, christ


def surface_state_from_jets(Y_a, Y_ab, y_a, y_ab) -> SurfaceState:
    """Build every convected-surface tensor from reference and deformed jets."""
    Y_a, Y_ab, y_a, y_ab = (np.asarray(v, dtype=float) for v in (Y_a, Y_ab, y_a, y_ab))
    G, Yd, N, B, Gam = _frame(Y_a, Y_ab, "reference")
    g, yd, n, b, gam = _frame(y_a, y_ab, "deformed")
    E = 0.5 * (g - G)
    K = b - B
    L = np.einsum("mbd,ma->abd", gam - Gam, g)
    return SurfaceState(Y_a, Y_ab, y_a, y_ab, Yd, yd, G, g, N, n, B, b, Gam, gam, E, K, L)


def compute_surface_state(chart: SurfaceChart, deform: DeformationMap, theta) -> SurfaceState:
    Y, Y_a, Y_ab = chart.jet(theta)
    _, F, H = deform.jet(Y)
    y_a = Y_a @ F.T
    y_ab = np.einsum("ijk,aj,bk->abi", H, Y_a, Y_a) + Y_ab @ F.T
    return surface_state_from_jets(Y_a, Y_ab, y_a, y_ab)


def _unit_tangent(state, T):
    T = np.asarray(T, dtype=float)
    norm = float(np.sqrt(T @ state.G @ T))
    if norm == 0.0:
        raise DomainError("tangent vector is zero")
    if abs(norm - 1.0) > 1e-12:
        warnings.warn("tangent was not unit length; normalized", UserWarning, stacklevel=3)
        T = T / norm
    return T


def stretch_of_convected_curve(state: SurfaceState, T) -> float:
    """``nu = 2 E[T, T]`` for the chart-component tangent ``T``."""
    T = _unit_tangent(state, T)
    return float(2.0 * T @ state.E @ T)


def geodesic_distortion_rate(state: SurfaceState, T) -> float:
    """``2 L[T, T, T]``: the arc-length rate of ``|z'|^2`` along the convected geodesic."""
    T = _unit_tangent(state, T)
    return float(2.0 * np.einsum("abd,a,b,d->", state.L, T, T, T))


def geodesic_defect(state: SurfaceState, T) -> np.ndarray:
    """``L[U, T, T]`` for the G-unit coordinate directions ``U``."""
    T = _unit_tangent(state, T)
    scale = 1.0 / np.sqrt(np.diag(state.G))
    return scale * np.einsum("abd,b,d->a", state.L, T, T)


def convected_geodesic_test(state: SurfaceState, T, tol=1e-10) -> bool:
    return bool(np.max(np.abs(geodesic_defect(state, T))) <= tol)


# --------------------------------------------------------------- geodesics

def _geodesic_rhs(chart, theta, v):
    _, Y_a, Y_ab = chart.jet(theta)
    G = Y_a @ Y_a.T
    Gam = np.einsum("mi,abi->mab", np.linalg.solve(G, Y_a), Y_ab)
    return v, -np.einsum("mab,a,b->m", Gam, v, v)


def integrate_geodesic(chart: SurfaceChart, theta0, T0, length, step=GEODESIC_STEP):
    """Classical RK4 for ``theta'' + Gamma(theta', theta') = 0``.

    Returns ``(s, theta, theta_dot)``; a negative ``length`` runs backward.
    """
    nsteps = max(1, int(round(abs(length) / step)))
    h = length / nsteps
    th = np.asarray(theta0, dtype=float).copy()
    v = np.asarray(T0, dtype=float).copy()
    out_t = [th.copy()]
    out_v = [v.copy()]
    for _ in range(nsteps):
        k1x, k1v = _geodesic_rhs(chart, th, v)
        k2x, k2v = _geodesic_rhs(chart, th + 0.5 * h * k1x, v + 0.5 * h * k1v)
        k3x, k3v = _geodesic_rhs(chart, th + 0.5 * h * k2x, v + 0.5 * h * k2v)
        k4x, k4v = _geodesic_rhs(chart, th + h * k3x, v + h * k3v)
        th = th + h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x)
        v = v + h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)
        out_t.append(th.copy())
        out_v.append(v.copy())
    return np.linspace(0.0, length, nsteps + 1), np.array(out_t), np.array(out_v)


def convected_speed_squared(chart, deform, theta, theta_dot):
    state = compute_surface_state(chart, deform, theta)
    return float(theta_dot @ state.g @ theta_dot)


def stretching_rate_fd(chart, deform, theta0, T0, ds, step=GEODESIC_STEP):
    """Centred difference in arc length of ``|z'|^2`` along the reference geodesic."""
    out = []
    for sgn in (1.0, -1.0):
        _, th, v = integrate_geodesic(chart, theta0, T0, sgn * ds, step=min(step, ds))
        out.append(convected_speed_squared(chart, deform, th[-1], v[-1]))
    return (out[0] - out[1]) / (2 * ds)


def convected_acceleration_fd(chart, deform, theta0, T0, ds, step=GEODESIC_STEP):
    """``y_a . z''`` at ``theta0`` from a second difference of ``z(s) = chi(Y(theta(s)))``."""
    pts = []
    for sgn in (1.0, -1.0):
        _, th, _ = integrate_geodesic(chart, theta0, T0, sgn * ds, step=min(step, ds))
        pts.append(deform.chi(chart.embed(th[-1])))
    z0 = deform.chi(chart.embed(np.asarray(theta0, float)))
    acc = (pts[0] - 2 * z0 + pts[1]) / ds ** 2
    state = compute_surface_state(chart, deform, theta0)
    return state.y_a @ acc


# ----------------------------------------------------------------- examples

def planar_chart(domain=((-1.0, 1.0), (0.0, np.pi))) -> SurfaceChart:
    """The plane X3 = 0 in flat coordinates."""
    return SurfaceChart(lambda t: np.array([t[0], t[1], 0.0]),
                        lambda t: np.array([[1.0, 0, 0], [0, 1.0, 0]]),
                        lambda t: np.zeros((2, 2, 3)), domain)


def exponential_deformation() -> DeformationMap:
    """``(X1, X2, X3) -> (e^X1 cos X2, e^X1 sin X2, X3)``."""
    def chi(X):
        r = np.exp(X[0])
        return np.array([r * np.cos(X[1]), r * np.sin(X[1]), X[2]])

    def grad(X):
        r = np.exp(X[0])
        c, s = np.cos(X[1]), np.sin(X[1])
        return np.array([[r * c, -r * s, 0], [r * s, r * c, 0], [0, 0, 1.0]])

    def hess(X):
        r = np.exp(X[0])
        c, s = np.cos(X[1]), np.sin(X[1])
        H = np.zeros((3, 3, 3))
        H[0, :2, :2] = [[r * c, -r * s], [-r * s, -r * c]]
        H[1, :2, :2] = [[r * s, r * c], [r * c, -r * s]]
        return H

    return DeformationMap(chi, grad, hess)


def exponential_example(domain=((-1.0, 1.0), (0.0, np.pi))):
    return planar_chart(domain), exponential_deformation()
