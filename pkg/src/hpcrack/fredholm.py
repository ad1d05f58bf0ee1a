"""Crack-opening solver.

The boundary profile ``f`` solves ``beta f'''' - alpha f'' + H f' = gamma`` on
(-1, 1) with ``f = f' = 0`` at the tips.  Folding the fourth-order operator
into its Green function gives a second-kind Fredholm equation

    beta f(x) + int K(x, s) f(s) ds = gamma (1 - x^2)^2 / 24,

which is discretized by the trapezoidal Nystrom method.  A Galerkin
minimizer of the quadratic energy over C1 Hermite cubics serves as an
independent oracle.
"""
from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import fft as sfft
from scipy import linalg
from scipy.interpolate import CubicSpline

from . import kernels
from ._fd import d1, d2, d4
from .errors import (DomainError, IllConditioningWarning, IndefiniteFormError,
                     ResolutionError, SolverError)
from .hilbert import GridFunction, hilbert_of_derivative

DEFAULT_N = 513
MIN_N = 33
COND_LIMIT = 1e12
RESIDUAL_TOL = 1e-3
INTERIOR = 0.9
N_WEAK_TESTS = 10


@dataclass(frozen=True)
class CrackParams:
    alpha: float
    beta: float
    gamma: float
    physical: dict | None = None

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v!r}")
        if self.alpha <= 0 or self.beta <= 0:
            raise DomainError("alpha and beta must be positive")

    def scaled(self, c: float) -> "CrackParams":
        return CrackParams(self.alpha, self.beta, c * self.gamma, self.physical)

    def as_tuple(self):
        return (self.alpha, self.beta, self.gamma)


def nondimensionalize(mu, mu_s, zeta, eta, ell, sigma) -> CrackParams:
    """Dimensionless (alpha, beta, gamma) from bulk/surface moduli, crack half-length and load."""
    if not (mu > 0 and ell > 0):
        raise DomainError("mu and ell must be positive")
    phys = dict(mu=mu, mu_s=mu_s, zeta=zeta, eta=eta, ell=ell, sigma=sigma)
    return CrackParams(alpha=mu_s / (mu * ell), beta=(zeta + 2 * eta) / (mu * ell ** 3),
                       gamma=sigma / mu, physical=phys)


def grid(n: int) -> np.ndarray:
    return np.linspace(-1.0, 1.0, n)


def trapezoid_weights(n: int) -> np.ndarray:
    h = 2.0 / (n - 1)
    w = np.full(n, h)
    w[0] = w[-1] = 0.5 * h
    return w


def _check_n(n):
    if not isinstance(n, (int, np.integer)) or n < MIN_N or n % 2 == 0:
        raise ResolutionError(f"n must be an odd integer >= {MIN_N}, got {n!r}")


@dataclass(frozen=True)
class FredholmSystem:
    x: np.ndarray
    weights: np.ndarray
    kernel: np.ndarray
    matrix: np.ndarray
    rhs: np.ndarray


def assemble_fredholm(params: CrackParams, n: int = DEFAULT_N) -> FredholmSystem:
    _check_n(n)
    x = grid(n)
    w = trapezoid_weights(n)
    K = kernels.kernel_matrix(x, x, float(params.alpha))
    A = K * w[None, :]
    A[np.diag_indices(n)] += params.beta
    rhs = params.gamma / 24.0 * (1.0 - x * x) ** 2
    return FredholmSystem(x, w, K, A, rhs)


# ------------------------------------------------------------- diagnostics

def _weak_test_functions(x, count=N_WEAK_TESTS):
    """(1 - x^2)^2 P_k(x) for Legendre P_k: values, second and fourth derivatives."""
    out = []
    for k in range(count):
        p = np.polynomial.Legendre.basis(k).convert(kind=np.polynomial.Polynomial)
        g = np.polynomial.Polynomial([1, 0, -2, 0, 1]) * p
        out.append((g(x), g.deriv(2)(x), g.deriv(4)(x)))
    return out


def _trap(v, h):
    return h * (v.sum() - 0.5 * (v[0] + v[-1]))


@dataclass(frozen=True)
class BoundaryProfile:
    """Crack opening on the uniform grid, with derivatives and residuals.

    ``strong_residual`` is NaN where the difference stencils do not fit.
    ``weak_residual[k]`` is the weak-form defect against the k-th test
    function divided by ``int |g_k|``.
    """

    params: CrackParams
    f: GridFunction
    df: np.ndarray
    d2f: np.ndarray
    d4f: np.ndarray
    hilbert_df: np.ndarray
    strong_residual: np.ndarray
    weak_residual: np.ndarray
    condition: float = float("nan")
    energy: float = float("nan")

    @property
    def x(self):
        return self.f.x

    @property
    def n(self):
        return self.f.n

    @property
    def values(self):
        return self.f.values

    def interior_residual(self, interior=INTERIOR) -> float:
        """Max strong residual on |x| < interior, relative to |gamma| when gamma != 0."""
        m = np.abs(self.x) < interior
        r = float(np.nanmax(np.abs(self.strong_residual[m])))
        g = abs(self.params.gamma)
        return r / g if g > 0 else r

    def tip_slopes(self):
        return float(self.df[0]), float(self.df[-1])

    def spline(self) -> CubicSpline:
        return CubicSpline(self.x, self.values)

    def max_slope_near_tips(self, start=INTERIOR, samples=4001) -> float:
        """max |f'| over start <= |x| <= 1 from a cubic-spline interpolant."""
        cs = self.spline()
        t = np.linspace(start, 1.0, samples)
        return float(max(np.max(np.abs(cs(t, 1))), np.max(np.abs(cs(-t, 1)))))


def make_profile(params: CrackParams, values, condition=float("nan"),
                 energy=None) -> BoundaryProfile:
    f = GridFunction(values)
    h = f.h
    v = f.values
    df = d1(v, h)
    d2f = d2(v, h)
    d4f = d4(v, h)
    hf = hilbert_of_derivative(f).values
    a, b, g = params.alpha, params.beta, params.gamma
    strong = b * d4f - a * d2f + hf - g
    # Weak form with the derivatives moved onto the polynomial test functions;
    # the boundary terms vanish because f = f' = 0 at the tips.
    weak = np.empty(N_WEAK_TESTS)
    for k, (gv, gdd, g4) in enumerate(_weak_test_functions(f.x)):
        lhs = _trap(v * (b * g4 - a * gdd) + hf * gv, h)
        scale = _trap(np.abs(gv), h) * max(abs(g), 1.0)
        weak[k] = (lhs - g * _trap(gv, h)) / scale
    if energy is None:
        energy = -0.5 * g * _trap(v, h)
    return BoundaryProfile(params, f, df, d2f, d4f, hf, strong, weak,
                           float(condition), float(energy))


# ------------------------------------------------------------------ Nystrom

@dataclass
class SolveReport:
    profile: BoundaryProfile
    max_abs_f: float
    max_abs_df: float
    tip_slopes: tuple
    energy: float
    residual: float
    residual_tol: float
    flagged: bool
    timings: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    convergence: "ConvergenceTable | None" = None

    @property
    def params(self):
        return self.profile.params

    @property
    def condition(self):
        return self.profile.condition


def condition_estimate(lu_piv, anorm):
    lu, _ = lu_piv
    rcond, info = linalg.lapack.dgecon(lu, anorm, norm="1")
    if info != 0:
        raise SolverError(f"condition estimate failed (info={info})")
    return math.inf if rcond == 0 else 1.0 / rcond


def solve_nystrom(params: CrackParams, n: int = DEFAULT_N, *,
                  residual_tol: float = RESIDUAL_TOL) -> SolveReport:
    """Trapezoidal Nystrom solve with strong- and weak-form diagnostics.

    The report is flagged when the interior strong residual, relative to
    ``|gamma|``, exceeds ``residual_tol``.
    """
    t0 = time.perf_counter()
    sysm = assemble_fredholm(params, n)
    t1 = time.perf_counter()
    caught = []
    with warnings.catch_warnings():
        warnings.simplefilter("error", linalg.LinAlgWarning)
        try:
            lu_piv = linalg.lu_factor(sysm.matrix, check_finite=True)
        except (linalg.LinAlgWarning, ValueError) as exc:
            raise SolverError(f"LU factorization failed: {exc}") from exc
    if np.any(np.diag(lu_piv[0]) == 0):
        raise SolverError("Nystrom matrix is singular")
    cond = condition_estimate(lu_piv, np.linalg.norm(sysm.matrix, 1))
    if cond > COND_LIMIT:
        msg = f"condition estimate {cond:.3e} exceeds {COND_LIMIT:.0e}"
        warnings.warn(msg, IllConditioningWarning, stacklevel=2)
        caught.append(msg)
    f = linalg.lu_solve(lu_piv, sysm.rhs)
    if not np.all(np.isfinite(f)):
        raise SolverError("Nystrom solution is not finite")
    t2 = time.perf_counter()
    prof = make_profile(params, f, condition=cond)
    t3 = time.perf_counter()
    res = prof.interior_residual()
    return SolveReport(
        profile=prof,
        max_abs_f=float(np.max(np.abs(f))),
        max_abs_df=float(np.max(np.abs(prof.df))),
        tip_slopes=prof.tip_slopes(),
        energy=prof.energy,
        residual=res,
        residual_tol=residual_tol,
        flagged=bool(res > residual_tol),
        timings={"assemble": t1 - t0, "solve": t2 - t1, "diagnostics": t3 - t2},
        warnings=caught,
    )


def limiting_profile(x):
    """The large-beta limit shape ``(1 - x^2)^2 / 24`` (multiply by gamma/beta)."""
    x = np.asarray(x, dtype=float)
    return (1 - x * x) ** 2 / 24.0


@dataclass(frozen=True)
class ConvergenceTable:
    ns: tuple
    differences: tuple     # ||f_n - f_{2n-1}||_inf on the coarse grid
    orders: tuple          # log2 of successive difference ratios

    @property
    def min_order(self):
        return min(self.orders) if self.orders else float("nan")


def convergence_study(params: CrackParams, ns=(129, 257, 513, 1025)) -> ConvergenceTable:
    """Self-convergence of the Nystrom solution under grid doubling.

    Each ``n`` must be ``2 m - 1`` for the previous ``m`` so that coarse
    nodes are fine nodes.
    """
    ns = tuple(int(v) for v in ns)
    for a, b in zip(ns, ns[1:]):
        if b != 2 * a - 1:
            raise ResolutionError("grid sizes must satisfy n_{k+1} = 2 n_k - 1")
    sols = [solve_nystrom(params, n).profile.values for n in ns]
    diffs = tuple(float(np.max(np.abs(c - f[::2]))) for c, f in zip(sols, sols[1:]))
    orders = tuple(math.log2(a / b) if b > 0 else math.inf for a, b in zip(diffs, diffs[1:]))
    return ConvergenceTable(ns, diffs, orders)


@dataclass(frozen=True)
class TipStudy:
    alpha: float
    betas: tuple
    ns: tuple
    slopes: np.ndarray     # slopes[i, j]: beta i, grid j

    def refinement_spread(self):
        """Relative change of the tip slope between the two finest grids, per beta."""
        a, b = self.slopes[:, -2], self.slopes[:, -1]
        return np.abs(b - a) / np.abs(b)

    def increasing_as_beta_decreases(self, column=-1):
        col = self.slopes[:, column]
        return bool(np.all(np.diff(col) > 0))


def tip_behavior_study(alpha, betas=(1e-2, 1e-4, 1e-6), ns=(513, 1025, 2049),
                       gamma=1.0) -> TipStudy:
    betas = tuple(float(b) for b in betas)
    if any(b <= 0 for b in betas) or any(a <= b for a, b in zip(betas, betas[1:])):
        raise DomainError("betas must be positive and strictly decreasing")
    slopes = np.empty((len(betas), len(ns)))
    for i, b in enumerate(betas):
        for j, n in enumerate(ns):
            prof = solve_nystrom(CrackParams(alpha, b, gamma), n).profile
            slopes[i, j] = prof.max_slope_near_tips()
    return TipStudy(float(alpha), betas, tuple(ns), slopes)


# ----------------------------------------------------------------- Galerkin
#
# Unknowns are nodal values and slopes of a C1 Hermite cubic at the m-1
# interior element nodes.  The membrane and bending terms use Gauss
# quadrature per element; the Hilbert term <H phi_i', phi_j> uses the
# Fourier symbol on a fine periodic grid.

def _hermite(t):
    H = np.stack([2 * t**3 - 3 * t**2 + 1, t**3 - 2 * t**2 + t,
                  -2 * t**3 + 3 * t**2, t**3 - t**2])
    dH = np.stack([6 * t**2 - 6 * t, 3 * t**2 - 4 * t + 1,
                   -6 * t**2 + 6 * t, 3 * t**2 - 2 * t])
    d2H = np.stack([12 * t - 6, 6 * t - 4, -12 * t + 6, 6 * t - 2])
    return H, dH, d2H


class _HermiteSpace:
    def __init__(self, m):
        self.m = m
        self.he = 2.0 / m
        self.ndof = 2 * (m - 1)
        self.scale = np.array([1.0, self.he, 1.0, self.he])
        # element e touches nodes e, e+1; node k (0<k<m) owns dofs 2(k-1), 2(k-1)+1
        e = np.arange(m)
        left = np.where(e > 0, 2 * (e - 1), -1)
        right = np.where(e + 1 < m, 2 * e, -1)
        self.dofs = np.stack([left, np.where(left >= 0, left + 1, -1),
                              right, np.where(right >= 0, right + 1, -1)], axis=1)

    def locate(self, x):
        e = np.clip(((x + 1.0) / self.he).astype(int), 0, self.m - 1)
        return e, (x + 1.0) / self.he - e

    def basis_matrix(self, x):
        e, t = self.locate(x)
        H, _, _ = _hermite(t)
        Phi = np.zeros((x.size, self.ndof))
        rows = np.arange(x.size)
        for k in range(4):
            d = self.dofs[e, k]
            ok = d >= 0
            Phi[rows[ok], d[ok]] += H[k, ok] * self.scale[k]
        return Phi


@dataclass(frozen=True)
class GalerkinSolution:
    m: int
    coefficients: np.ndarray
    energy: float
    space: _HermiteSpace

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.space.basis_matrix(x.ravel()) @ self.coefficients


def galerkin_minimize(params: CrackParams, m: int = 128, *, fine_h=1 / 512,
                      period=32.0) -> GalerkinSolution:
    if m < 8:
        raise ResolutionError("Galerkin basis needs m >= 8 elements")
    sp = _HermiteSpace(m)
    gx, gw = np.polynomial.legendre.leggauss(6)
    t = 0.5 * (gx + 1.0)
    wq = 0.5 * gw * sp.he
    H, dH, d2H = _hermite(t)
    B0 = H * sp.scale[:, None]
    B1 = dH * sp.scale[:, None] / sp.he
    B2 = d2H * sp.scale[:, None] / sp.he ** 2
    ke = params.beta * (B2 * wq) @ B2.T + params.alpha * (B1 * wq) @ B1.T
    fe = params.gamma * (B0 * wq).sum(axis=1)

    K = np.zeros((sp.ndof, sp.ndof))
    F = np.zeros(sp.ndof)
    for e in range(m):
        d = sp.dofs[e]
        ok = d >= 0
        np.add.at(F, d[ok], fe[ok])
        K[np.ix_(d[ok], d[ok])] += ke[np.ix_(ok, ok)]

    N = int(round(period / fine_h))
    xs = -1.0 + fine_h * np.arange(int(round(2.0 / fine_h)) + 1)
    Phi = sp.basis_matrix(xs)
    A = sfft.rfft(Phi, n=N, axis=0)
    xi = sfft.rfftfreq(N, d=fine_h)
    sym = 2.0 * (2 * np.pi * xi)       # doubled: rfft stores half the spectrum
    sym[0] = 0.0
    if N % 2 == 0:
        sym[-1] *= 0.5
    Hm = fine_h / N * np.real((A.conj() * sym[:, None]).T @ A)
    I = fine_h * (Phi.sum(axis=0) - 0.5 * (Phi[0] + Phi[-1]))
    Hm += np.pi / (3 * period ** 2) * np.outer(I, I)
    K += 0.5 * (Hm + Hm.T)

    try:
        c_f = linalg.cho_factor(K)
    except linalg.LinAlgError as exc:
        raise IndefiniteFormError("Galerkin energy form is not positive definite") from exc
    c = linalg.cho_solve(c_f, F)
    return GalerkinSolution(m, c, float(-0.5 * c @ F), sp)


def solve_galerkin_oracle(params: CrackParams, m: int = 128,
                          n: int = DEFAULT_N) -> BoundaryProfile:
    """Galerkin minimizer sampled on the n-point Nystrom grid."""
    sol = galerkin_minimize(params, m)
    return make_profile(params, sol(grid(n)), energy=sol.energy)
