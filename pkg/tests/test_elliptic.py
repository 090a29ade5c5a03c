import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special

from cnoidal.elliptic import (
    K_ONE_GUARD,
    EllipticArgs,
    carlson_rd,
    carlson_rf,
    complementary_modulus,
    complete_E,
    complete_E_derivative,
    complete_K,
    complete_K_derivative,
    heuman_lambda,
    incomplete_E,
    incomplete_F,
    jacobi,
)
from cnoidal.errors import DomainError
from cnoidal.numerics import derivative

moduli = st.floats(min_value=1e-3, max_value=0.999)
angles = st.floats(min_value=0.0, max_value=math.pi / 2)


def quad(f, a, b):
    return integrate.quad(f, a, b, epsabs=1e-13, epsrel=1e-13, limit=200)[0]


def test_complete_limits_at_zero():
    assert complete_K(0.0) == pytest.approx(math.pi / 2, abs=1e-15)
    assert complete_E(0.0) == pytest.approx(math.pi / 2, abs=1e-15)


def test_complete_K_reference_value():
    assert complete_K(0.5) == pytest.approx(1.6857503548125961, rel=1e-13)


@pytest.mark.parametrize("k", [0.1 * i for i in range(1, 10)])
def test_complete_against_quadrature(k):
    K = quad(lambda t: 1.0 / math.sqrt(1.0 - (k * math.sin(t)) ** 2), 0.0, math.pi / 2)
    E = quad(lambda t: math.sqrt(1.0 - (k * math.sin(t)) ** 2), 0.0, math.pi / 2)
    assert complete_K(k) == pytest.approx(K, rel=1e-10)
    assert complete_E(k) == pytest.approx(E, rel=1e-10)


@settings(max_examples=200, deadline=None)
@given(moduli)
def test_complete_against_scipy(k):
    assert complete_K(k) == pytest.approx(special.ellipk(k * k), rel=1e-13)
    assert complete_E(k) == pytest.approx(special.ellipe(k * k), rel=1e-13)


@settings(max_examples=100, deadline=None)
@given(moduli)
def test_legendre_relation(k):
    kp = complementary_modulus(k)
    K, E, Kp, Ep = complete_K(k), complete_E(k), complete_K(kp), complete_E(kp)
    assert E * Kp + Ep * K - K * Kp == pytest.approx(math.pi / 2, rel=1e-12)


@pytest.mark.parametrize("k", [0.2, 0.5, 0.8, 0.95])
def test_complete_derivatives_match_differences(k):
    h = min(1e-2, 0.25 * (1 - k))
    dK, _ = derivative(complete_K, k, h, 4)
    dE, _ = derivative(complete_E, k, h, 4)
    assert complete_K_derivative(k) == pytest.approx(dK, rel=1e-8)
    assert complete_E_derivative(k) == pytest.approx(dE, rel=1e-8)


def test_incomplete_trivial_modulus():
    for phi in (0.0, 0.3, 1.0, math.pi / 2):
        assert incomplete_F(phi, 0.0) == pytest.approx(phi, abs=1e-15)
        assert incomplete_E(phi, 0.0) == pytest.approx(phi, abs=1e-15)


def test_incomplete_reference_value():
    k, phi = 0.86603, 0.66132
    oracle = quad(lambda t: 1.0 / math.sqrt(1.0 - (k * math.sin(t)) ** 2), 0.0, phi)
    assert incomplete_F(phi, k) == pytest.approx(oracle, rel=1e-12)
    assert incomplete_F(phi, k) == pytest.approx(0.6997, abs=1e-4)


@settings(max_examples=200, deadline=None)
@given(angles, moduli)
def test_incomplete_against_scipy(phi, k):
    assert incomplete_F(phi, k) == pytest.approx(special.ellipkinc(phi, k * k), rel=1e-12, abs=1e-300)
    assert incomplete_E(phi, k) == pytest.approx(special.ellipeinc(phi, k * k), rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("k", [0.3, 0.7, 0.95])
def test_incomplete_at_right_angle_is_complete(k):
    assert incomplete_F(math.pi / 2, k) == pytest.approx(complete_K(k), rel=1e-13)
    assert incomplete_E(math.pi / 2, k) == pytest.approx(complete_E(k), rel=1e-13)


def test_carlson_known_values():
    # Carlson (1995), table of test values.
    assert carlson_rf(1.0, 2.0, 0.0) == pytest.approx(1.3110287771461, rel=1e-13)
    assert carlson_rf(2.0, 3.0, 4.0) == pytest.approx(0.58408284167715, rel=1e-13)
    assert carlson_rd(0.0, 2.0, 1.0) == pytest.approx(1.7972103521034, rel=1e-13)
    assert carlson_rd(2.0, 3.0, 4.0) == pytest.approx(0.16510527294261, rel=1e-13)


def test_carlson_domain():
    with pytest.raises(DomainError):
        carlson_rf(0.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        carlson_rd(1.0, 1.0, 0.0)


def test_jacobi_grid_identities():
    rng = np.random.default_rng(7)
    for u, k in zip(rng.uniform(-20, 20, 100), rng.uniform(0.01, 0.99, 100)):
        sn, cn, dn = jacobi(float(u), float(k))
        assert abs(sn * sn + cn * cn - 1.0) <= 1e-12
        assert abs(dn * dn + k * k * sn * sn - 1.0) <= 1e-12


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=-50, max_value=50), moduli)
def test_jacobi_against_scipy(u, k):
    sn, cn, dn, _ = special.ellipj(u, k * k)
    ours = jacobi(u, k)
    assert ours == pytest.approx((sn, cn, dn), abs=1e-11)


def test_jacobi_trigonometric_limit():
    for u in (-2.0, 0.0, 0.4, 3.0):
        assert jacobi(u, 0.0) == pytest.approx((math.sin(u), math.cos(u), 1.0), abs=1e-15)
    sn, cn, dn = jacobi(0.4, 1e-9)
    assert (sn, cn) == pytest.approx((math.sin(0.4), math.cos(0.4)), abs=1e-12)


@pytest.mark.parametrize("k", [0.2, 0.5, 0.9])
def test_jacobi_quarter_period(k):
    assert jacobi(complete_K(k), k) == pytest.approx((1.0, 0.0, complementary_modulus(k)), abs=1e-12)


def test_jacobi_sample_point():
    sn, cn, dn = jacobi(0.8428, 0.5)
    assert sn * sn + cn * cn == pytest.approx(1.0, abs=1e-14)


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=-10, max_value=10), moduli)
def test_jacobi_periodicity(u, k):
    period = 4.0 * complete_K(k)
    a, b = jacobi(u, k), jacobi(u + period, k)
    assert b == pytest.approx(a, abs=1e-10)


@pytest.mark.parametrize("u,k", [(0.3, 0.2), (1.1, 0.5), (2.5, 0.8), (-0.7, 0.95)])
def test_jacobi_derivatives(u, k):
    h = 1e-3

    def d(i):
        return (-jacobi(u + 2 * h, k)[i] + 8 * jacobi(u + h, k)[i] - 8 * jacobi(u - h, k)[i]
                + jacobi(u - 2 * h, k)[i]) / (12 * h)

    sn, cn, dn = jacobi(u, k)
    assert d(0) == pytest.approx(cn * dn, abs=1e-8)
    assert d(1) == pytest.approx(-sn * dn, abs=1e-8)
    assert d(2) == pytest.approx(-k * k * sn * cn, abs=1e-8)


@pytest.mark.parametrize("k", [0.05, 0.5, 0.9, 0.999])
def test_heuman_lambda_right_angle_is_one(k):
    assert heuman_lambda(math.pi / 2, k) == pytest.approx(1.0, abs=1e-13)


def test_heuman_lambda_small_modulus_is_sine():
    for beta in (0.2, 0.66132, 1.3):
        assert heuman_lambda(beta, 1e-8) == pytest.approx(math.sin(beta), abs=1e-9)


def test_heuman_lambda_reference_value():
    k, beta = 0.5, 0.66132
    kp = math.sqrt(1 - k * k)
    F = quad(lambda t: 1.0 / math.sqrt(1.0 - (kp * math.sin(t)) ** 2), 0.0, beta)
    E = quad(lambda t: math.sqrt(1.0 - (kp * math.sin(t)) ** 2), 0.0, beta)
    K, Ek = special.ellipk(k * k), special.ellipe(k * k)
    oracle = 2 / math.pi * (Ek * F + K * E - K * F)
    assert heuman_lambda(beta, k) == pytest.approx(oracle, rel=1e-12)
    assert heuman_lambda(beta, k) == pytest.approx(0.5752, abs=1e-4)


@pytest.mark.parametrize("k", [0.1, 0.5, 0.9])
def test_heuman_lambda_monotone_in_angle(k):
    values = [heuman_lambda(b, k) for b in np.linspace(0.0, math.pi / 2, 200)]
    assert all(b > a for a, b in zip(values, values[1:]))
    assert values[0] == 0.0 and 0.0 <= min(values) and max(values) <= 1.0 + 1e-14


def test_heuman_lambda_sine_reading_is_a_substitution():
    z, k = 0.8, 0.6
    assert heuman_lambda(z, k, argument="sine") == pytest.approx(heuman_lambda(math.asin(z), k), rel=1e-15)
    with pytest.raises(DomainError):
        heuman_lambda(1.2, k, argument="sine")
    with pytest.raises(ValueError):
        heuman_lambda(0.5, k, argument="degrees")


@pytest.mark.parametrize("k", [-0.1, 1.0, K_ONE_GUARD, float("nan")])
def test_modulus_domain(k):
    with pytest.raises(DomainError):
        complete_K(k)
    with pytest.raises(DomainError):
        jacobi(0.3, k)


def test_amplitude_domain():
    with pytest.raises(DomainError):
        incomplete_F(-0.1, 0.5)
    with pytest.raises(DomainError):
        incomplete_E(2.0, 0.5)
    with pytest.raises(DomainError):
        heuman_lambda(1.7, 0.5)


def test_elliptic_args():
    args = EllipticArgs(0.6)
    assert args.k ** 2 + args.kprime ** 2 == pytest.approx(1.0, abs=1e-16)
    with pytest.raises(DomainError):
        EllipticArgs(1.5)
