"""Quadratic surface energies, flat-chart stress resultants and linearized strains."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .kinematics import SurfaceChart, SurfaceState, fd_jet, surface_state_from_jets


@dataclass(frozen=True)
class EnergyModuli:
    lambda_s: float
    mu_s: float
    zeta: float
    eta: float
    lam: float = 0.0
    mu: float = 1.0

    def __post_init__(self):
        if not (self.mu_s > 0 and self.zeta > 0 and self.eta > 0 and self.mu > 0):
            raise DomainError("mu_s, zeta, eta and mu must be positive")
        if self.lambda_s < 0 or self.lam < 0:
            raise DomainError("lambda_s and lambda must be non-negative")


def _membrane(E, Ginv, m: EnergyModuli):
    trE = np.einsum("ab,ab->", Ginv, E)
    EE = np.einsum("ab,ac,bd,cd->", E, Ginv, Ginv, E)
    return 0.5 * m.lambda_s * trE ** 2 + m.mu_s * EE


def _bending_K(K, Ginv, m: EnergyModuli):
    trK = np.einsum("ab,ab->", Ginv, K)
    KK = np.einsum("ab,ac,bd,cd->", K, Ginv, Ginv, K)
    return 0.5 * m.zeta * trK ** 2 + m.eta * KK


def _bending_L(L, Ginv, ginv, m: EnergyModuli):
    trL = np.einsum("mab,ab->m", L, Ginv)                       # L_m a^a
    LL = np.einsum("mn,mab,ac,bd,ncd->", ginv, L, Ginv, Ginv, L)
    return 0.5 * m.zeta * trL @ ginv @ trL + m.eta * LL


def energy_from_tensors(E, K, L, G, moduli: EnergyModuli, *, model="HP"):
    """Surface energy density from (E, K, L) and the reference metric.

    The deformed metric follows as ``g = G + 2E``.
    """
    G = np.asarray(G, float)
    Ginv = np.linalg.inv(G)
    U = _membrane(E, Ginv, moduli) + _bending_K(K, Ginv, moduli)
    if model == "HP":
        U += _bending_L(L, Ginv, np.linalg.inv(G + 2 * np.asarray(E)), moduli)
    elif model != "SO":
        raise ValueError("model must be 'HP' or 'SO'")
    return float(U)


def energy_hp(state: SurfaceState, moduli: EnergyModuli) -> float:
    return energy_from_tensors(state.E, state.K, state.L, state.G, moduli, model="HP")


def energy_so(state: SurfaceState, moduli: EnergyModuli) -> float:
    return energy_from_tensors(state.E, state.K, state.L, state.G, moduli, model="SO")


# ------------------------------------------------------------- flat chart

_FLAT_Y_A = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])


def flat_state(y_a, y_ab) -> SurfaceState:
    """State of the plane X3 = 0 in flat coordinates deformed to the given jet."""
    return surface_state_from_jets(_FLAT_Y_A, np.zeros((2, 2, 3)), y_a, y_ab)


def energy_hp_flat_direct(y_a, y_ab, moduli: EnergyModuli) -> float:
    """Flat-coordinate form written with the deformed jet only."""
    y_a = np.asarray(y_a, float)
    y_ab = np.asarray(y_ab, float)
    E = 0.5 * (y_a @ y_a.T - np.eye(2))
    lap = y_ab[0, 0] + y_ab[1, 1]
    return float(0.5 * moduli.lambda_s * np.trace(E) ** 2 + moduli.mu_s * np.sum(E * E)
                 + 0.5 * moduli.zeta * lap @ lap + moduli.eta * np.sum(y_ab * y_ab))


@dataclass(frozen=True)
class StressResultants:
    T: np.ndarray   # T[a] is the 3-vector T^a
    M: np.ndarray   # M[a, b] is the 3-vector M^{ab}


def stress_resultants_hp_flat(y_a, y_ab, moduli: EnergyModuli) -> StressResultants:
    y_a = np.asarray(y_a, float)
    y_ab = np.asarray(y_ab, float)
    E = 0.5 * (y_a @ y_a.T - np.eye(2))
    S = moduli.lambda_s * np.trace(E) * np.eye(2) + 2 * moduli.mu_s * E
    return StressResultants(S @ y_a, _bending_resultant(y_ab, moduli))


def linearized_resultants_flat(u_a, u_ab, moduli: EnergyModuli) -> StressResultants:
    """Small-displacement counterparts ``t^a`` and ``m^{ab}`` on a flat chart."""
    u_a = np.asarray(u_a, float)
    u_ab = np.asarray(u_ab, float)
    eps = 0.5 * (_FLAT_Y_A @ u_a.T + u_a @ _FLAT_Y_A.T)
    S = moduli.lambda_s * np.trace(eps) * np.eye(2) + 2 * moduli.mu_s * eps
    return StressResultants(S @ _FLAT_Y_A, _bending_resultant(u_ab, moduli))


def _bending_resultant(y_ab, moduli):
    lap = y_ab[0, 0] + y_ab[1, 1]
    M = 2 * moduli.eta * np.array(y_ab, float)
    M[0, 0] += moduli.zeta * lap
    M[1, 1] += moduli.zeta * lap
    return M


def energy_gradient_fd(y_a, y_ab, moduli: EnergyModuli, step=1e-5):
    """Central differences of ``energy_hp`` in each entry of the flat jet.

    ``y_{,12}`` and ``y_{,21}`` are perturbed as independent entries.
    """
    y_a = np.asarray(y_a, float)
    y_ab = np.asarray(y_ab, float)

    def U(a, ab):
        return energy_hp(flat_state(a, ab), moduli)

    gT = np.empty_like(y_a)
    for idx in np.ndindex(y_a.shape):
        p, q = y_a.copy(), y_a.copy()
        p[idx] += step
        q[idx] -= step
        gT[idx] = (U(p, y_ab) - U(q, y_ab)) / (2 * step)
    gM = np.empty_like(y_ab)
    for idx in np.ndindex(y_ab.shape):
        p, q = y_ab.copy(), y_ab.copy()
        p[idx] += step
        q[idx] -= step
        gM[idx] = (U(y_a, p) - U(y_a, q)) / (2 * step)
    return StressResultants(gT, gM)


# ------------------------------------------------------------ ellipticity

def ellipticity_form(moduli: EnergyModuli, G, n, a, b, model="HP") -> float:
    """Acoustic form ``a_a a_b b . C^{abdg} a_d a_g b`` in closed form."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    if not np.any(a) or not np.any(b):
        raise DomainError("a and b must be nonzero")
    q = float(a @ np.linalg.solve(np.asarray(G, float), a))
    if model == "HP":
        bb = float(b @ b)
    elif model == "SO":
        bb = float(np.dot(n, b)) ** 2
    else:
        raise ValueError("model must be 'HP' or 'SO'")
    return (moduli.zeta + 2 * moduli.eta) * q * q * bb


def acoustic_form_fd(moduli: EnergyModuli, a, b, y_a=None, y_ab=None, model="HP") -> float:
    """The same form on a flat chart, from the energy itself.

    The energy is quadratic in ``y_{,ab}``, so the second difference along
    ``y_{,ab} -> y_{,ab} + t a_a a_b b`` at ``t = 1`` is exact.
    """
    y_a = _FLAT_Y_A if y_a is None else np.asarray(y_a, float)
    y_ab = np.zeros((2, 2, 3)) if y_ab is None else np.asarray(y_ab, float)
    d = np.einsum("a,b,i->abi", np.asarray(a, float), np.asarray(a, float), np.asarray(b, float))
    f = energy_hp if model == "HP" else energy_so

    def U(t):
        return f(flat_state(y_a, y_ab + t * d), moduli)

    return U(1.0) - 2 * U(0.0) + U(-1.0)


# ------------------------------------------------------------- hemitropy

def rotate_tensors(E, K, L, R):
    """Push (E, K, L) forward by a rotation ``R`` of an orthonormal tangent frame."""
    R = np.asarray(R, float)
    return (R @ E @ R.T, R @ K @ R.T, np.einsum("ai,bj,dk,ijk->abd", R, R, R, L))


def rotation2(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


def hemitropy_defect(state: SurfaceState, moduli: EnergyModuli, R, model="HP") -> float:
    """``|U(E, K, L) - U(R E R^T, R K R^T, R L)|`` on an orthonormal flat chart."""
    if not np.allclose(state.G, np.eye(2), atol=1e-14):
        raise DomainError("hemitropy check needs an orthonormal reference frame")
    U0 = energy_from_tensors(state.E, state.K, state.L, state.G, moduli, model=model)
    E, K, L = rotate_tensors(state.E, state.K, state.L, R)
    return abs(U0 - energy_from_tensors(E, K, L, state.G, moduli, model=model))


# ------------------------------------------------------------- linearized

@dataclass(frozen=True)
class LinearizedSurfaceStrain:
    eps: np.ndarray   # (2, 2)
    k: np.ndarray     # (2, 2)
    l: np.ndarray     # (2, 2, 2)
    G: np.ndarray


def linearized_strains(chart: SurfaceChart, u, theta, *, u_jet=None) -> LinearizedSurfaceStrain:
    """Strains of a displacement ``u(theta)`` (a 3-vector field on the chart).

    ``u_jet(theta)`` may return ``(u, u_a, u_ab)`` analytically; otherwise
    the chart-coordinate derivatives are taken by finite differences.
    """
    theta = np.asarray(theta, float)
    _, Y_a, Y_ab = chart.jet(theta)
    if u_jet is not None:
        _, u_a, u_ab = (np.asarray(v, float) for v in u_jet(theta))
    else:
        _, u_a, u_ab = fd_jet(u, theta, order=chart.fd_order)
    G = Y_a @ Y_a.T
    Yd = np.linalg.solve(G, Y_a)
    N = np.cross(Y_a[0], Y_a[1])
    N /= np.linalg.norm(N)
    B = Y_ab @ N
    Gam = np.einsum("mi,abi->mab", Yd, Y_ab)
    u_cov = u_ab - np.einsum("mab,mi->abi", Gam, u_a)      # u_{;ab}
    eps = 0.5 * (Y_a @ u_a.T + u_a @ Y_a.T)
    k = u_cov @ N
    l = np.einsum("ai,bdi->abd", Y_a, u_cov) + np.einsum("a,bd->abd", u_a @ N, B)
    return LinearizedSurfaceStrain(eps, k, l, G)


def energy_quadratic_linearized(strain: LinearizedSurfaceStrain, moduli: EnergyModuli) -> float:
    Ginv = np.linalg.inv(strain.G)
    return float(_membrane(strain.eps, Ginv, moduli) + _bending_K(strain.k, Ginv, moduli)
                 + _bending_L(strain.l, Ginv, Ginv, moduli))
