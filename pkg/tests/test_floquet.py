import math

import numpy as np
import pytest

from cnoidal.errors import DegenerateThetaError, DomainError, PremiseViolation, UnresolvedZeroError
from cnoidal.floquet import (
    HillProblem,
    classify_index,
    count_zeros,
    floquet_defect,
    matrix_eigenvalue_from_scalar,
    spectral_summary,
    theta_L1,
    theta_L2,
    theta_residual,
)
from cnoidal.wave import params_from_k, phi, phi_dx


@pytest.fixture(scope="module")
def wave8():
    return params_from_k(8.0, 0.5)


def test_theta_L1_reference(wave8):
    r = theta_L1(wave8)
    assert r.y_prime_end == pytest.approx(-32.7368, abs=1e-2)
    assert r.theta == pytest.approx(13.7883, abs=1e-2)
    assert r.index == (2, 1) and r.p_zeros == 2
    assert (r.n_negative, r.kernel_dim) == (2, 1)


def test_theta_L2_reference(wave8):
    r = theta_L2(wave8)
    assert r.y_end == pytest.approx(-13.1854, abs=2e-3)
    assert r.theta == pytest.approx(-10.4602, abs=1e-2)
    assert r.index == (1, 1)


@pytest.mark.parametrize(
    "which,L,k,expected",
    [("L1", 7.0, 0.5, 8.08), ("L1", 20.0, 0.9, 598.25), ("L2", 4 * math.pi, 0.3, -25.21), ("L2", 100.0, 0.99, -12878.20)],
)
def test_table_entries(which, L, k, expected):
    fn = theta_L1 if which == "L1" else theta_L2
    assert fn(params_from_k(L, k)).theta == pytest.approx(expected, rel=5e-3)


@pytest.mark.parametrize("which", ["L1", "L2"])
def test_residual_oracle(wave8, which):
    assert theta_residual(wave8, which) <= 1e-6


def test_residual_detects_a_wrong_theta(wave8):
    assert theta_residual(wave8, "L1", theta=13.0) > 1e-2


def test_defect_of_periodic_function_is_zero(wave8):
    xs = np.linspace(0.0, 8.0, 33)
    p = phi(wave8, xs)
    assert floquet_defect(p, phi(wave8, xs + 8.0), 0.0, p) <= 1e-12


def test_potential_is_even_and_periodic(wave8):
    prob = HillProblem("L1", wave8)
    xs = np.linspace(0, 8, 17)
    assert np.allclose(prob.potential(xs), prob.potential(-xs), atol=1e-13)
    assert np.allclose(prob.potential(xs), prob.potential(xs + 8.0), atol=1e-10)
    assert HillProblem("L2", wave8).coeff == 1.0
    with pytest.raises(ValueError):
        HillProblem("L3", wave8)


def test_zero_counts(wave8):
    assert count_zeros(lambda x: phi(wave8, x), 8.0) == 2
    assert count_zeros(lambda x: phi_dx(wave8, x), 8.0) == 2
    assert count_zeros(lambda x: np.sin(2 * np.pi * x / 8.0), 8.0) == 2
    assert count_zeros(lambda x: np.sin(6 * np.pi * x / 8.0), 8.0) == 6


def test_zero_counting_rejects_double_zero():
    with pytest.raises(UnresolvedZeroError):
        count_zeros(lambda x: np.sin(np.pi * x / 8.0) ** 2, 8.0, n_grid=64)


def test_classification_rules():
    assert classify_index(0.5, 2) == (2, 1)
    assert classify_index(-0.5, 2) == (1, 1)
    assert classify_index(-0.5, 4) == (3, 1)
    with pytest.raises(DegenerateThetaError):
        classify_index(1e-9, 2)
    with pytest.raises(PremiseViolation):
        classify_index(1.0, 3)


def test_matrix_eigenvalue_map():
    assert matrix_eigenvalue_from_scalar(0.0, 0.6) == 0.0
    assert matrix_eigenvalue_from_scalar(-2.5, 0.0) == pytest.approx(-2.5, rel=1e-15)
    lam = matrix_eigenvalue_from_scalar(-1.0, 0.6)
    assert lam == pytest.approx(-0.8361, abs=1e-4)
    assert lam * (1 - 0.36 / (lam - 1)) == pytest.approx(-1.0, abs=1e-12)
    for c in (0.0, 0.3, 0.9):
        values = [matrix_eigenvalue_from_scalar(g, c) for g in np.linspace(-50, 0, 101)]
        assert all(b > a for a, b in zip(values, values[1:]))
    with pytest.raises(DomainError):
        matrix_eigenvalue_from_scalar(0.1, 0.5)
    with pytest.raises(DomainError):
        matrix_eigenvalue_from_scalar(-1.0, 1.0)


def test_spectral_summary(wave8):
    assert spectral_summary(wave8, "qnls") == (3, 1)
    assert spectral_summary(params_from_k(8.0, 0.5, "qkg"), "qkg") == (3, 1)
    with pytest.raises(DomainError):
        spectral_summary(params_from_k(8.0, 0.9), "qkg")
