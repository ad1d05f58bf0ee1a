"""Acceptance suite: one check per numbered criterion, with runtimes.

Run under pytest (the PASS/FAIL lines are repeated in the terminal
summary) or directly with ``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from _oracles import pv_quad  # noqa: E402
from hpcrack.field import (dtn_check, default_axes, harmonicity_residual,  # noqa: E402
                           reconstruct_field, strain_bound_report)
from hpcrack.fredholm import (CrackParams, convergence_study, limiting_profile,  # noqa: E402
                              solve_galerkin_oracle, solve_nystrom, tip_behavior_study)
from hpcrack.greens import green, green_row_integral, green_x  # noqa: E402
from hpcrack.hilbert import (GridFunction, hilbert_of_derivative,  # noqa: E402
                             hilbert_spectral_oracle, kernel_hilbert_part)
from hpcrack.kinematics import (DeformationMap, SurfaceChart,  # noqa: E402
                                compute_surface_state, exponential_example,
                                geodesic_distortion_rate, stretching_rate_fd)
from hpcrack.surface_energy import (EnergyModuli, acoustic_form_fd,  # noqa: E402
                                    ellipticity_form, energy_gradient_fd, flat_state,
                                    hemitropy_defect, rotation2, stress_resultants_hp_flat)

CRITERIA: dict[int, tuple] = {}


def criterion(num, title, limit=None):
    def deco(fn):
        CRITERIA[num] = (title, fn, limit)
        return fn
    return deco


def bag(beta, alpha, gamma):
    return CrackParams(alpha=alpha, beta=beta, gamma=gamma)


@criterion(1, "Green identities", limit=1.0)
def green_identities():
    xs = np.linspace(-1, 1, 101)
    row = max(abs(green_row_integral(x) - (1 - x * x) ** 2 / 24) for x in xs)
    X, T = np.meshgrid(xs, xs, indexing="ij")
    sym = np.max(np.abs(green(X, T) - green(T, X)))
    bc = max(np.max(np.abs(green(e, xs))) for e in (-1.0, 1.0))
    bc_x = max(np.max(np.abs(green_x(e, xs))) for e in (-1.0, 1.0))
    ok = row <= 1e-12 and sym <= 1e-12 and bc <= 1e-12 and bc_x <= 1e-12
    return ok, f"row {row:.1e}, symmetry {sym:.1e}, G(+-1) {bc:.1e}, G_x(+-1) {bc_x:.1e}"


@criterion(2, "kernel closed form vs p.v. quadrature", limit=5.0)
def kernel_closed_form():
    rng = np.random.default_rng(20240601)
    worst = 0.0
    for x, s in rng.uniform(-1, 1, size=(20, 2)):
        ref = pv_quad(x, s)
        worst = max(worst, abs(kernel_hilbert_part(x, s) - ref) / abs(ref))
    s = np.linspace(-1, 1, 401)
    ends = max(np.max(np.abs(kernel_hilbert_part(e, s))) for e in (-1.0, 1.0))
    return worst <= 1e-6 and ends <= 1e-12, f"max rel {worst:.1e}, |K(+-1, s)| {ends:.1e}"


@criterion(3, "Hilbert quadrature vs spectral oracle, n = 2049", limit=5.0)
def hilbert_vs_spectral():
    f = GridFunction.from_callable(lambda x: (1 - x * x) ** 2, 2049)
    a = hilbert_of_derivative(f).values
    b = hilbert_spectral_oracle(f).values
    err = np.max(np.abs(a - b)) / np.max(np.abs(b))
    return err <= 1e-4, f"L-inf rel {err:.2e}"


@criterion(4, "limiting profile at (beta, alpha, gamma) = (1e3, 1, 1e3)", limit=10.0)
def limiting():
    prof = solve_nystrom(bag(1e3, 1, 1e3), 513).profile
    err = np.max(np.abs(prof.values - limiting_profile(prof.x)))
    return err <= 1e-3, f"||f - f_inf|| {err:.2e}"


@criterion(5, "Nystrom vs Galerkin minimizer", limit=60.0)
def oracle_equivalence():
    parts = []
    worst = 0.0
    for b, a, g in ((1, 1, 1), (5, 1, 5), (10, 1, 10)):
        ny = solve_nystrom(bag(b, a, g), 513).profile.values
        ga = solve_galerkin_oracle(bag(b, a, g), m=128, n=513).values
        d = float(np.max(np.abs(ny - ga)))
        worst = max(worst, d)
        parts.append(f"({b},{a},{g}) {d:.1e}")
    return worst <= 1e-3, ", ".join(parts)


@criterion(6, "self-convergence order", limit=60.0)
def self_convergence():
    tab = convergence_study(bag(1, 1, 1), ns=(129, 257, 513, 1025))
    orders = ", ".join(f"{o:.3f}" for o in tab.orders)
    return tab.min_order >= 1.8, f"orders {orders}"


@criterion(7, "tip conditions and parity")
def tips_and_parity():
    ok = True
    parts = []
    for p in (bag(1, 1, 1), bag(1e-2, 1e-2, 1)):
        slopes, tip_vals, odd = [], 0.0, 0.0
        for n in (129, 257, 513):
            prof = solve_nystrom(p, n).profile
            v = prof.values
            tip_vals = max(tip_vals, abs(v[0]), abs(v[-1]))
            odd = max(odd, float(np.max(np.abs(v - v[::-1]))))
            slopes.append(max(abs(s) for s in prof.tip_slopes()))
        rates = np.log2(np.array(slopes[:-1]) / np.array(slopes[1:]))
        ok &= tip_vals <= 1e-10 and odd <= 1e-12 and bool(np.all(rates >= 1.0))
        parts.append(f"beta={p.beta:g}: |f(+-1)| {tip_vals:.1e}, parity {odd:.1e}, "
                     f"slope rates {np.array2string(rates, precision=2)}")
    return ok, "; ".join(parts)


@criterion(8, "bounded-strain contrast at alpha = 1e-2", limit=120.0)
def bounded_strain_contrast():
    study = tip_behavior_study(1e-2, betas=(1e-2, 1e-4, 1e-6), ns=(513, 1025, 2049))
    spread = study.refinement_spread()
    ok = bool(np.all(spread <= 1e-2)) and study.increasing_as_beta_decreases()
    slopes = ", ".join(f"{s:.4f}" for s in study.slopes[:, -1])
    return ok, f"slopes {slopes}; refinement spread max {np.max(spread):.1e}"


@criterion(9, "half-plane field checks")
def field_checks():
    p = bag(1, 1, 1)
    prof = solve_nystrom(p, 513).profile
    res = []
    for nx in (151, 301, 601):
        xs, ys = default_axes(shape=(nx, nx))
        res.append(harmonicity_residual(reconstruct_field(prof, xs, ys), y_min=0.5))
    ratios = np.array(res[:-1]) / np.array(res[1:])
    trace = reconstruct_field(prof, prof.x, np.array([0.0, 0.1]))
    trace_err = float(np.max(np.abs(trace.w[0] - prof.values)))
    xs = np.linspace(-3, 3, 301)
    dtn = dtn_check(prof, reconstruct_field(prof, xs, np.array([0.0, 1e-3, 2e-3])))
    far = float(np.max(reconstruct_field(prof, xs, np.array([20.0])).gradient_norm))
    xs, ys = default_axes()
    r1 = strain_bound_report(reconstruct_field(prof, xs, ys), p)
    inv = 0.0
    for c in (2.5, -4.0):
        pc = p.scaled(c)
        rc = strain_bound_report(reconstruct_field(solve_nystrom(pc, 513).profile, xs, ys), pc)
        inv = max(inv, abs(rc - r1) / r1)
    ok = (bool(np.all(ratios >= 3.5)) and trace_err <= 1e-15 and dtn <= 5e-3
          and far <= 1e-3 and inv <= 1e-10)
    return ok, (f"harmonicity ratios {np.array2string(ratios, precision=2)}, trace {trace_err:.0e}, "
                f"DtN {dtn:.1e}, far field {far:.1e}, strain-bound drift {inv:.0e}")


def _cylinder():
    return SurfaceChart(
        lambda t: np.array([np.cos(t[0]), np.sin(t[0]), t[1]]),
        lambda t: np.array([[-np.sin(t[0]), np.cos(t[0]), 0.0], [0.0, 0.0, 1.0]]),
        lambda t: np.array([[[-np.cos(t[0]), -np.sin(t[0]), 0.0], np.zeros(3)],
                            [np.zeros(3), np.zeros(3)]]))


@criterion(10, "kinematics")
def kinematics():
    chart, chi = exponential_example()
    worst = 0.0
    for x1 in np.linspace(-1, 1, 9):
        for x2 in (0.0, np.pi / 3, np.pi):
            st_ = compute_surface_state(chart, chi, np.array([x1, x2]))
            e = np.exp(2 * x1)
            L = np.zeros((2, 2, 2))
            L[0, 0, 0] = L[1, 0, 1] = L[1, 1, 0] = e
            L[0, 1, 1] = -e
            worst = max(worst, np.max(np.abs(st_.E - 0.5 * (e - 1) * np.eye(2))),
                        np.max(np.abs(st_.K)), np.max(np.abs(st_.L - L)))
    warp = DeformationMap(lambda X: np.array([X[0] + 0.1 * X[1] ** 2,
                                              X[1] + 0.05 * X[0] * X[2],
                                              X[2] + 0.1 * X[0] ** 2 + 0.02 * X[1] ** 3]))
    th0 = np.array([0.4, 0.3])
    T0 = np.array([np.cos(0.7), np.sin(0.7)])
    exact = geodesic_distortion_rate(compute_surface_state(_cylinder(), warp, th0), T0)
    errs = np.array([abs(stretching_rate_fd(_cylinder(), warp, th0, T0, ds) - exact)
                     for ds in (0.04, 0.02, 0.01)])
    orders = np.log2(errs[:-1] / errs[1:])
    ok = worst <= 1e-12 and bool(np.all((orders > 1.8) & (orders < 2.2)))
    return ok, (f"example max err {worst:.1e}; rate-of-stretching FD orders "
                f"{np.array2string(orders, precision=3)}")


@criterion(11, "surface energy")
def energy():
    mod = EnergyModuli(lambda_s=0.7, mu_s=1.3, zeta=0.4, eta=0.9)
    rng = np.random.default_rng(11)
    e3 = np.array([0.0, 0.0, 1.0])
    min_form, closed = np.inf, 0.0
    for _ in range(10_000):
        A = rng.normal(size=(2, 2))
        G = A @ A.T + 0.1 * np.eye(2)
        a, b = rng.normal(size=2), rng.normal(size=3)
        n = rng.normal(size=3)
        n /= np.linalg.norm(n)
        v = ellipticity_form(mod, G, n, a, b)
        q = a @ np.linalg.solve(G, a)
        min_form = min(min_form, v)
        closed = max(closed, abs(v - (mod.zeta + 2 * mod.eta) * q * q * (b @ b)) / v)
    so = 0.0
    for _ in range(1000):
        a, b = rng.normal(size=2), np.append(rng.normal(size=2), 0.0)
        so = max(so, abs(ellipticity_form(mod, np.eye(2), e3, a, b, model="SO")),
                 abs(acoustic_form_fd(mod, a, b, model="SO")))
    grad = 0.0
    hemi = 0.0
    for _ in range(100):
        y_a = np.eye(2, 3) + 0.2 * rng.normal(size=(2, 3))
        y_ab = 0.2 * rng.normal(size=(2, 2, 3))
        y_ab[1, 0] = y_ab[0, 1]
        res = stress_resultants_hp_flat(y_a, y_ab, mod)
        fd = energy_gradient_fd(y_a, y_ab, mod)
        scale = max(np.max(np.abs(res.T)), np.max(np.abs(res.M)))
        grad = max(grad, np.max(np.abs(res.T - fd.T)) / scale,
                   np.max(np.abs(res.M - fd.M)) / scale)
        hemi = max(hemi, hemitropy_defect(flat_state(y_a, y_ab), mod,
                                          rotation2(rng.uniform(0, 2 * np.pi))))
    ok = min_form > 0 and closed <= 1e-12 and so == 0.0 and grad <= 1e-6 and hemi <= 1e-12
    return ok, (f"min HP form {min_form:.1e} (>0), closed form {closed:.0e}, SO(b.n=0) {so:.0e}, "
                f"resultants {grad:.0e}, hemitropy {hemi:.0e}")


def evaluate(num):
    title, fn, limit = CRITERIA[num]
    t0 = time.perf_counter()
    ok, detail = fn()
    dt = time.perf_counter() - t0
    if limit is not None:
        detail += f"; runtime limit {limit:g} s"
        if dt >= limit:
            ok = False
    line = f"criterion {num:2d} {'PASS' if ok else 'FAIL'} [{dt:7.2f} s] {title}: {detail}"
    print(line)
    return ok, line


@pytest.mark.acceptance
@pytest.mark.parametrize("num", sorted(CRITERIA))
def test_criterion(num, record_property):
    ok, line = evaluate(num)
    record_property("acceptance", line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(k)[0] for k in sorted(CRITERIA)]
    raise SystemExit(0 if all(results) else 1)
