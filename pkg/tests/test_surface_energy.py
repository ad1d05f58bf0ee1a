import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hpcrack.errors import DomainError
from hpcrack.kinematics import fd_jet, planar_chart
from hpcrack.surface_energy import (EnergyModuli, acoustic_form_fd, ellipticity_form,
                                    energy_from_tensors, energy_gradient_fd, energy_hp,
                                    energy_hp_flat_direct, energy_quadratic_linearized,
                                    energy_so, flat_state, hemitropy_defect,
                                    linearized_resultants_flat, linearized_strains, rotation2,
                                    stress_resultants_hp_flat)

MOD = EnergyModuli(lambda_s=0.7, mu_s=1.3, zeta=0.4, eta=0.9)
E3 = np.array([0.0, 0.0, 1.0])
seeds = st.integers(0, 2 ** 31 - 1)


def random_jet(rng, scale=0.2):
    y_a = np.array([[1.0, 0, 0], [0, 1.0, 0]]) + scale * rng.normal(size=(2, 3))
    y_ab = scale * rng.normal(size=(2, 2, 3))
    y_ab[1, 0] = y_ab[0, 1]
    return y_a, y_ab


@settings(max_examples=30)
@given(seeds)
def test_flat_energy_matches_direct_form(seed):
    y_a, y_ab = random_jet(np.random.default_rng(seed))
    assert energy_hp(flat_state(y_a, y_ab), MOD) == pytest.approx(
        energy_hp_flat_direct(y_a, y_ab, MOD), rel=1e-12)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_resultants_are_energy_gradients(seed):
    y_a, y_ab = random_jet(np.random.default_rng(seed))
    res = stress_resultants_hp_flat(y_a, y_ab, MOD)
    fd = energy_gradient_fd(y_a, y_ab, MOD)
    scale = max(np.max(np.abs(res.T)), np.max(np.abs(res.M)))
    assert np.max(np.abs(res.T - fd.T)) <= 1e-6 * scale
    assert np.max(np.abs(res.M - fd.M)) <= 1e-6 * scale


def test_hp_ellipticity_positive_and_closed_form():
    rng = np.random.default_rng(2024)
    for _ in range(10_000):
        A = rng.normal(size=(2, 2))
        G = A @ A.T + 0.1 * np.eye(2)
        a, b = rng.normal(size=2), rng.normal(size=3)
        n = rng.normal(size=3)
        n /= np.linalg.norm(n)
        v = ellipticity_form(MOD, G, n, a, b)
        q = a @ np.linalg.solve(G, a)
        assert v > 0
        assert v == pytest.approx((MOD.zeta + 2 * MOD.eta) * q * q * (b @ b), rel=1e-12)


@settings(max_examples=50)
@given(seeds)
def test_acoustic_form_from_energy(seed):
    rng = np.random.default_rng(seed)
    a, b = rng.normal(size=2), rng.normal(size=3)
    y_a, y_ab = random_jet(rng, 0.0)
    fd = acoustic_form_fd(MOD, a, b, y_a, y_ab)
    assert fd == pytest.approx(ellipticity_form(MOD, np.eye(2), E3, a, b), rel=1e-10)
    fd_so = acoustic_form_fd(MOD, a, b, y_a, y_ab, model="SO")
    assert fd_so == pytest.approx(ellipticity_form(MOD, np.eye(2), E3, a, b, model="SO"),
                                  rel=1e-10, abs=1e-14)


@settings(max_examples=50)
@given(seeds)
def test_so_form_vanishes_for_tangential_b(seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=2)
    b = np.append(rng.normal(size=2), 0.0)
    assert ellipticity_form(MOD, np.eye(2), E3, a, b, model="SO") == 0.0
    assert acoustic_form_fd(MOD, a, b, model="SO") == 0.0


def test_hemitropy_under_random_rotations():
    rng = np.random.default_rng(11)
    y_a, y_ab = random_jet(rng)
    state = flat_state(y_a, y_ab)
    for _ in range(100):
        R = rotation2(rng.uniform(0, 2 * np.pi))
        assert hemitropy_defect(state, MOD, R) <= 1e-12
        assert hemitropy_defect(state, MOD, R, model="SO") <= 1e-12


def test_so_drops_l_terms():
    rng = np.random.default_rng(3)
    y_a, y_ab = random_jet(rng)
    st_ = flat_state(y_a, y_ab)
    assert energy_so(st_, MOD) < energy_hp(st_, MOD)
    zero_L = energy_from_tensors(st_.E, st_.K, 0 * st_.L, st_.G, MOD)
    assert energy_so(st_, MOD) == pytest.approx(zero_L, rel=1e-14)


def test_small_strain_limit():
    rng = np.random.default_rng(5)
    chart = planar_chart()
    c = rng.normal(size=(3, 6))

    def u(t):
        x, y = t
        mon = np.array([x, y, x * x, x * y, y * y, x * x * y])
        return c @ mon

    th = np.array([0.2, 0.7])
    lin = linearized_strains(chart, u, th)
    q = energy_quadratic_linearized(lin, MOD)
    errs = []
    for eps in (1e-2, 5e-3):
        y_a, y_ab = np.eye(2, 3), np.zeros((2, 2, 3))
        _, du, ddu = fd_jet(u, th)
        st_ = flat_state(y_a + eps * du, y_ab + eps * ddu)
        np.testing.assert_allclose(st_.E / eps, lin.eps, atol=5 * eps)
        np.testing.assert_allclose(st_.K / eps, lin.k, atol=5 * eps)
        errs.append(abs(energy_hp(st_, MOD) - eps ** 2 * q))
    assert errs[0] / errs[1] == pytest.approx(8.0, rel=0.15)


def test_linearized_resultants_match_full_at_small_strain():
    rng = np.random.default_rng(9)
    du, ddu = rng.normal(size=(2, 3)), rng.normal(size=(2, 2, 3))
    ddu[1, 0] = ddu[0, 1]
    eps = 1e-6
    full = stress_resultants_hp_flat(np.eye(2, 3) + eps * du, eps * ddu, MOD)
    lin = linearized_resultants_flat(du, ddu, MOD)
    np.testing.assert_allclose(full.T / eps, lin.T, atol=1e-5)
    np.testing.assert_allclose(full.M / eps, lin.M, atol=1e-9)


@pytest.mark.parametrize("kw", [dict(mu_s=0), dict(zeta=-1), dict(lambda_s=-0.1)])
def test_bad_moduli(kw):
    base = dict(lambda_s=1.0, mu_s=1.0, zeta=1.0, eta=1.0)
    with pytest.raises(DomainError):
        EnergyModuli(**{**base, **kw})


def test_ellipticity_rejects_zero_vectors():
    with pytest.raises(DomainError):
        ellipticity_form(MOD, np.eye(2), E3, np.zeros(2), np.ones(3))


def test_identity_is_stress_and_energy_free():
    st_ = flat_state(np.eye(2, 3), np.zeros((2, 2, 3)))
    assert energy_hp(st_, MOD) == 0.0 and energy_so(st_, MOD) == 0.0
    res = stress_resultants_hp_flat(np.eye(2, 3), np.zeros((2, 2, 3)), MOD)
    assert not np.any(res.T) and not np.any(res.M)


@given(st.floats(-0.5, 0.5))
def test_uniform_stretch_resultant(e):
    y_a = (1 + e) * np.eye(2, 3)
    res = stress_resultants_hp_flat(y_a, np.zeros((2, 2, 3)), MOD)
    Et = e + e * e / 2
    expected = (2 * MOD.lambda_s * Et + 2 * MOD.mu_s * Et) * y_a
    np.testing.assert_allclose(res.T, expected, atol=1e-14)


@settings(max_examples=30)
@given(seeds)
def test_so_tangential_deformation_has_no_bending(seed):
    rng = np.random.default_rng(seed)
    y_a, y_ab = random_jet(rng)
    y_a[:, 2] = 0.0
    y_ab[..., 2] = 0.0
    st_ = flat_state(y_a, y_ab)
    membrane = energy_from_tensors(st_.E, 0 * st_.K, 0 * st_.L, st_.G, MOD, model="SO")
    assert np.max(np.abs(st_.K)) < 1e-15
    assert energy_so(st_, MOD) == pytest.approx(membrane, rel=1e-14)
