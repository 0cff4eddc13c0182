import math

import numpy as np
import pytest

from dmxy import BathParams, SystemParams, ZeroFrequency, build_rates, spectral_rate, spectrum
from dmxy.rates import bose, coefficients, generator_matrix

from conftest import FIG12, random_draws

# 1 / (e - 1), evaluated with mpmath at 40 digits
BOSE_1_1 = 0.58197670686932642439


def test_spectral_rate_vacuum():
    assert spectral_rate(1.0, 0.02, 0.0) == 0.0
    assert spectral_rate(-1.0, 0.02, 0.0) == 0.02


def test_spectral_rate_bose_value():
    assert spectral_rate(1.0, 1.0, 1.0) == pytest.approx(BOSE_1_1, rel=1e-15)


def test_spectral_rate_zero_frequency():
    with pytest.raises(ZeroFrequency):
        spectral_rate(0.0, 1.0, 1.0)


@pytest.mark.parametrize("w", [1e-6, 0.3, 2.0, 50.0, 800.0])
@pytest.mark.parametrize("T", [0.0, 0.1, 1.0, 30.0])
def test_emission_exceeds_absorption_by_gamma(w, T):
    up, down = spectral_rate(w, 0.7, T), spectral_rate(-w, 0.7, T)
    # the subtraction itself loses digits when n(w) is large
    assert down - up == pytest.approx(0.7, abs=4 * np.finfo(float).eps * down)


def test_bose_overflow_guard():
    assert bose(1000.0, 1.0) == 0.0
    assert bose(1.0, 0.0) == 0.0


def test_bath_params():
    b = BathParams.from_mean(1.5, 0.5, 0.02)
    assert (b.T1, b.T2) == (1.75, 1.25)
    assert b.TM == 1.5 and b.dT == 0.5
    assert b.swapped() == BathParams(0.02, 0.02, 1.25, 1.75)
    with pytest.raises(ValueError):
        BathParams.from_mean(0.5, 2.0, 0.02)
    with pytest.raises(ValueError):
        BathParams(-0.1, 0.02, 1, 1)


def test_symmetric_coefficients():
    p = SystemParams(J=0.8, chi=0, B=1.5, b=0, D=0.4)
    np.testing.assert_allclose(coefficients(spectrum(p), p), 0.5, atol=1e-15)


def test_coefficient_formula_fig12():
    a = coefficients(spectrum(FIG12), FIG12)
    xe = math.sqrt(2) * math.sqrt(4.81)
    assert a[0, 0] == pytest.approx((xe + 0.9 - 2) / (2 * xe), rel=1e-14)
    assert a[1, 0] == pytest.approx((xe + 0.9 + 2) / (2 * xe), rel=1e-14)


def _sigma_x(j):
    sx = np.array([[0, 1], [1, 0]])
    return np.kron(sx, np.eye(2)) if j == 0 else np.kron(np.eye(2), sx)


@pytest.mark.parametrize("seed", range(5))
def test_coefficients_are_sigma_x_matrix_elements(seed):
    (p, _), = random_draws(1, seed)
    s = spectrum(p)
    a = coefficients(s, p)
    U = s.basis
    for j in range(2):
        m = np.abs(U.conj().T @ _sigma_x(j) @ U) ** 2
        for mu, (k, l) in enumerate(((0, 2), (0, 3), (1, 2), (1, 3))):
            assert a[j, mu] == pytest.approx(m[k, l], abs=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_coefficient_structure(seed):
    (p, _), = random_draws(1, seed)
    a = coefficients(spectrum(p), p)
    np.testing.assert_allclose(a[:, 0], a[:, 3])
    np.testing.assert_allclose(a[:, 1], a[:, 2])
    np.testing.assert_allclose(a[:, 0] + a[:, 1], 1.0, atol=1e-15)


def test_fig12_rates_positive_and_conserving():
    r = build_rates(spectrum(FIG12), FIG12, BathParams(0.02, 0.02, 2.0, 1.0))
    assert min(r.X1_plus, r.X1_minus, r.Y2_plus, r.Y2_minus) > 0
    np.testing.assert_allclose(r.generator.sum(axis=0), 0.0, atol=1e-14)


def test_generator_layout():
    B = generator_matrix(1.0, 2.0, 3.0, 4.0)
    expected = np.array([
        [-(2 + 4), 0, 1, 3],
        [0, -(1 + 3), 4, 2],
        [2, 3, -(1 + 4), 0],
        [4, 1, 0, -(2 + 3)],
    ])
    np.testing.assert_array_equal(B, expected)


def test_equal_temperature_ratio():
    T = 1.3
    r = build_rates(spectrum(FIG12), FIG12, BathParams(0.02, 0.03, T, T))
    e1 = math.exp(r.omega1 / T)
    e2 = math.exp(r.omega2 / T)
    # downward (-) over total: the sign of the paper's ratio follows its label choice
    assert r.X1_minus / r.X1 == pytest.approx(e1 / (e1 + 1), rel=1e-12)
    assert r.Y2_minus / r.Y2 == pytest.approx(e2 / (e2 + 1), rel=1e-12)


def test_vacuum_baths_only_decay():
    r = build_rates(spectrum(FIG12), FIG12, BathParams(0.02, 0.02, 0, 0))
    assert r.omega1 < 0 or r.X1_plus == 0
    assert r.Y2_plus == 0 and r.Y2_minus > 0


def test_vacuum_channel_direction_follows_frequency_sign():
    p = SystemParams(J=1, chi=0.3, B=0.5, b=1.0, D=1.0)  # xi > eta: omega1 > 0
    r = build_rates(spectrum(p), p, BathParams(0.02, 0.02, 0, 0))
    assert r.omega1 > 0
    assert r.X1_plus == 0 and r.Y2_plus == 0


@pytest.mark.parametrize("seed", range(10))
def test_single_bath_detailed_balance(seed):
    (p, b), = random_draws(1, seed)
    baths = BathParams(b.gamma1, 0.0, max(b.T1, 0.3), 0.0)
    r = build_rates(spectrum(p), p, baths)
    T = baths.T1
    assert r.X1_minus / r.X1_plus == pytest.approx(math.exp(r.omega1 / T), rel=1e-12)
    assert r.Y2_minus / r.Y2_plus == pytest.approx(math.exp(r.omega2 / T), rel=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_field_sign_bath_swap_covariance(seed):
    (p, b), = random_draws(1, seed)
    r = build_rates(spectrum(p), p, b)
    q = p.with_(b=-p.b)
    s = build_rates(spectrum(q), q, b.swapped())
    for name in ("X1_plus", "X1_minus", "Y2_plus", "Y2_minus"):
        assert getattr(s, name) == pytest.approx(getattr(r, name), rel=1e-12, abs=1e-15)


def test_closed_system_rates_vanish():
    r = build_rates(spectrum(FIG12), FIG12, BathParams(0, 0, 1, 1))
    assert r.X1 == 0 and r.Y2 == 0
