"""Cnoidal waves of the quintic Klein-Gordon and Schrodinger equations:
elliptic special functions, Floquet theta-criterion, convexity and the
orbital-instability parity verdict."""

from .elliptic import (
    complete_E,
    complete_K,
    heuman_lambda,
    incomplete_E,
    incomplete_F,
    jacobi,
)
from .errors import (
    BracketError,
    CnoidalError,
    DegenerateThetaError,
    DomainError,
    IntegrationError,
    NumericalError,
    PremiseViolation,
    QuadratureError,
    UnresolvedZeroError,
)
from .floquet import count_zeros, matrix_eigenvalue_from_scalar, spectral_summary, theta_L1, theta_L2, theta_residual
from .stability import (
    critical_constants,
    ddprime_kg,
    ddprime_nls,
    find_kstar,
    find_L0,
    mass_closed_form,
    mass_curve,
    verdict,
)
from .wave import WaveParams, k_from_omega, params_from_k, phi, phi_dx, phi_dxx

__version__ = "0.1.0"
