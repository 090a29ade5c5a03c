"""Convexity of the action along the cnoidal family and the parity verdict.

The mass of a wave, R(k) = int_0^L phi^2 dx, depends on k only and has the
closed form

    R(k) = -2 pi (Lambda0(beta, k) - 1) / sqrt(s + 1) * sqrt(k^2 + s + 1) * sqrt(2 - k^2 + s)

with beta = asin(1 / sqrt(1 - q)).  From it

    Klein-Gordon:  d''(c) = -R(k) + 2 c^2 R'(k) / omega'(k)      (omega = 1 - c^2)
    Schrodinger:   d''(omega) = R'(k) / (2 omega'(k))

and the wave is orbitally unstable (on even perturbations) when
n(L_e) - p(d'') is odd, with n(L_e) = 3 from the Floquet analysis.

Every function that touches R takes ``argument`` ("amplitude" or "sine"),
forwarded to :func:`cnoidal.elliptic.heuman_lambda`.  Only "amplitude" makes
the closed form equal to the integral; "sine" reproduces the constants
obtained when beta is handed to an ``EllipticF(z, k)``-style routine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy import optimize as _spo

from .elliptic import complete_K, heuman_lambda, jacobi
from .errors import BracketError, DomainError
from .floquet import spectral_summary
from .numerics import RootBracket, derivative, find_root, quadrature
from .wave import (
    EQUATIONS,
    domega_dk,
    k_from_omega,
    k_upper_qkg,
    omega_floor,
    params_from_k,
    phi,
    scaled_omega,
    scaled_omega_dk,
    shape_q,
    shape_s,
)

__all__ = [
    "MassCurve",
    "KGConvexity",
    "CriticalConstants",
    "StabilityReport",
    "heuman_angle",
    "mass_closed_form",
    "mass_quadrature",
    "mass_reduced_quadrature",
    "mass_derivative",
    "mass_curve",
    "kg_convexity",
    "kg_convexity_at_k",
    "ddprime_kg",
    "dprime_kg",
    "ddprime_nls",
    "ddprime_nls_fd",
    "find_kstar",
    "c_star_fit",
    "sup_ddprime_kg",
    "find_L0",
    "critical_constants",
    "verdict",
]

DERIV_STEP = 1e-4
DERIV_LEVELS = 2
L0_SCAN_POINTS = 512
# Lowest modulus scanned when R' has no sign change (no k* to start from).
K_SCAN_FLOOR = 0.01
K_SCAN_CEIL = 0.999


@dataclass(frozen=True)
class MassCurve:
    k: float
    R: float
    dR_dk: float
    domega_dk: float


@dataclass(frozen=True)
class KGConvexity:
    L: float
    c: float
    k: float
    omega: float
    R: float
    dR_dk: float
    domega_dk: float
    d1: float
    d2: float
    alpha: float
    beta_coeff: float


@dataclass(frozen=True)
class CriticalConstants:
    L: float
    k_star: Optional[float]
    omega_star: Optional[float]
    omega_star_L2: Optional[float]
    c_star: Optional[float]
    c_star_fit: Optional[float]
    L0: Optional[float]
    argument: str


@dataclass(frozen=True)
class StabilityReport:
    equation: str
    L: float
    parameter: float
    k: float
    d2: float
    n_Le: int
    p_d2: int
    parity: int
    verdict: str
    argument: str


def heuman_angle(k: float) -> float:
    """beta = asin(1 / sqrt(1 - q(k)))."""
    return math.asin(1.0 / math.sqrt(1.0 - shape_q(k)))


def mass_closed_form(k: float, *, argument: str = "amplitude") -> float:
    """R(k) through Heuman's Lambda; the period L cancels out."""
    s = shape_s(k)
    lam = heuman_lambda(heuman_angle(k), k, argument=argument)
    return (-2.0 * math.pi * (lam - 1.0) / math.sqrt(s + 1.0)
            * math.sqrt(k * k + s + 1.0) * math.sqrt(2.0 - k * k + s))


def mass_quadrature(L: float, k: float, tol: float = 1e-13) -> float:
    """int_0^L phi(x)^2 dx by adaptive Gauss-Kronrod, split at the quarter periods."""
    wave = params_from_k(L, k)
    f = lambda x: float(phi(wave, x)) ** 2  # noqa: E731
    return sum(quadrature(f, L * i / 4.0, L * (i + 1) / 4.0, tol) for i in range(4))


def mass_reduced_quadrature(L: float, k: float, tol: float = 1e-13) -> float:
    """(a^2 L / K) int_0^K cn^2 / (1 - q sn^2) du, the quarter-period reduction."""
    wave = params_from_k(L, k)
    K = complete_K(k)

    def f(u):
        sn, cn, _ = jacobi(u, k)
        return cn * cn / (1.0 - wave.q * sn * sn)

    return wave.a ** 2 * L / K * quadrature(f, 0.0, K, tol)


def _step_for(k, h0):
    return min(h0, 0.25 * k, 0.25 * (1.0 - k))


@lru_cache(maxsize=4096)
def mass_derivative(k: float, *, argument: str = "amplitude") -> float:
    """R'(k) by Richardson-extrapolated central differences of the closed form."""
    value, _ = derivative(
        lambda t: mass_closed_form(t, argument=argument), k, _step_for(k, DERIV_STEP), DERIV_LEVELS
    )
    return value


def mass_curve(L: float, k: float, *, argument: str = "amplitude") -> MassCurve:
    return MassCurve(
        k=k,
        R=mass_closed_form(k, argument=argument),
        dR_dk=mass_derivative(k, argument=argument),
        domega_dk=domega_dk(L, k),
    )


def _kg_data(L, k, c, omega, argument):
    R = mass_closed_form(k, argument=argument)
    dR = mass_derivative(k, argument=argument)
    dw = domega_dk(L, k)
    # (d omega / dk)^-1 = Q(k) L^2 with Q = 1 / (d(omega L^2)/dk).
    return KGConvexity(
        L=L,
        c=c,
        k=k,
        omega=omega,
        R=R,
        dR_dk=dR,
        domega_dk=dw,
        d1=-c * R,
        d2=-R + 2.0 * c * c * dR / dw,
        alpha=2.0 * dR / scaled_omega_dk(k),
        beta_coeff=R + 2.0 * omega * dR / dw,
    )


def kg_convexity_at_k(L: float, k: float, *, argument: str = "amplitude") -> KGConvexity:
    """Klein-Gordon convexity data parametrised by the modulus (needs omega(k; L) < 1)."""
    wave = params_from_k(L, k, "qkg")
    return _kg_data(L, k, wave.c, wave.omega, argument)


def _check_kg(L, c):
    if not (math.isfinite(c) and 0.0 < abs(c) < 1.0):
        raise DomainError(f"wave speed must satisfy 0 < |c| < 1, got {c!r}")
    if not L > 2.0 * math.pi:
        raise DomainError(f"Klein-Gordon waves need L > 2 pi, got L={L!r}")
    omega = 1.0 - c * c
    if not omega > omega_floor(L):
        raise DomainError(
            f"c={c!r} gives omega={omega!r} <= 4 pi^2 / L^2 = {omega_floor(L)!r}: no cnoidal wave"
        )
    return omega


def kg_convexity(L: float, c: float, *, argument: str = "amplitude") -> KGConvexity:
    """d'(c), d''(c) and the alpha L^2 - beta split at speed ``c``."""
    omega = _check_kg(L, c)
    return _kg_data(L, k_from_omega(L, omega), c, omega, argument)


def ddprime_kg(L: float, c: float, *, argument: str = "amplitude") -> float:
    """d''(c) = -R(k) + 2 c^2 R'(k) (d omega/dk)^-1 at k = k(1 - c^2; L)."""
    return kg_convexity(L, c, argument=argument).d2


def dprime_kg(L: float, c: float, *, argument: str = "amplitude") -> float:
    """d'(c) = -c R(k)."""
    return kg_convexity(L, c, argument=argument).d1


def ddprime_nls(L: float, omega: float, *, argument: str = "amplitude") -> float:
    """d''(omega) = R'(k) / (2 d omega/dk) at k = k(omega; L)."""
    k = k_from_omega(L, omega)
    return 0.5 * mass_derivative(k, argument=argument) / domega_dk(L, k)


def ddprime_nls_fd(L: float, omega: float, *, argument: str = "amplitude") -> float:
    """Cross-check: (1/2) d/d omega of the mass, differentiated directly in omega."""
    floor = omega_floor(L)
    h = min(1e-3 * omega, 0.25 * (omega - floor))
    value, _ = derivative(
        lambda w: mass_closed_form(k_from_omega(L, w), argument=argument), omega, h, 3
    )
    return 0.5 * value


def find_kstar(*, argument: str = "amplitude", lo: float = 0.4, hi: float = 0.8, tol: float = 1e-12) -> float:
    """Root of R'(k) on [lo, hi] (L-independent).

    Raises BracketError when R' keeps one sign on the interval.
    """
    f = lambda k: mass_derivative(k, argument=argument)  # noqa: E731
    bracket = RootBracket.from_function(f, lo, hi)
    return find_root(f, bracket, tol)


def c_star_fit(L: float) -> Optional[float]:
    """The rounded closed-form fit 0.65 sqrt(-99.87 + 2.33 L^2) / L (None where the radicand is negative)."""
    radicand = -99.87 + 2.33 * L * L
    if radicand < 0.0:
        return None
    return 0.65 * math.sqrt(radicand) / L


def _kg_d2_from_parts(L, k, argument):
    # d'' written in k: -R + 2 (L^2 - omega L^2) R' / (d(omega L^2)/dk).
    return -mass_closed_form(k, argument=argument) + 2.0 * (L * L - scaled_omega(k)) * mass_derivative(
        k, argument=argument
    ) / scaled_omega_dk(k)


def _k_scan_range(L, argument, k_lo):
    if k_lo is None:
        try:
            k_lo = find_kstar(argument=argument)
        except BracketError:
            k_lo = K_SCAN_FLOOR
    k_hi = min(K_SCAN_CEIL, k_upper_qkg(L) * (1.0 - 1e-9))
    return k_lo, k_hi


def sup_ddprime_kg(
    L: float,
    *,
    argument: str = "amplitude",
    k_lo: Optional[float] = None,
    n_scan: int = L0_SCAN_POINTS,
) -> tuple[float, float]:
    """(k, d'') at the largest value of d'' over admissible moduli in [k_lo, k_hi(L)].

    ``k_lo`` defaults to k* when R' changes sign, else to a small floor.  The
    maximum on an ``n_scan`` grid is polished by bounded Brent/golden search
    between the neighbouring grid nodes.
    """
    k_lo, k_hi = _k_scan_range(L, argument, k_lo)
    if not k_hi > k_lo:
        raise DomainError(f"no admissible Klein-Gordon moduli in [{k_lo!r}, {k_hi!r}] at L={L!r}")
    ks = np.linspace(k_lo, k_hi, n_scan)
    vals = np.array([_kg_d2_from_parts(L, float(k), argument) for k in ks])
    i = int(np.argmax(vals))
    if 0 < i < n_scan - 1:
        res = _spo.minimize_scalar(
            lambda k: -_kg_d2_from_parts(L, k, argument),
            bounds=(float(ks[i - 1]), float(ks[i + 1])),
            method="bounded",
            options={"xatol": 1e-10},
        )
        if -res.fun > vals[i]:
            return float(res.x), float(-res.fun)
    return float(ks[i]), float(vals[i])


def find_L0(
    *,
    argument: str = "amplitude",
    L_start: float = 7.0,
    L_step: float = 1.0,
    L_max: float = 400.0,
    tol: float = 1e-6,
) -> float:
    """Smallest period at which d''(c) stops being negative for every admissible c.

    Scans L upward from ``L_start`` for the first sign change of
    L -> max_k d''(k; L), then refines with Brent's method.
    """
    k_lo, _ = _k_scan_range(L_start, argument, None)

    def g(L):
        return sup_ddprime_kg(L, argument=argument, k_lo=k_lo)[1]

    lo, g_lo = L_start, g(L_start)
    if g_lo >= 0.0:
        raise BracketError(f"max d'' already non-negative at L={L_start!r}")
    L = lo
    while L < L_max:
        L = min(L + L_step, L_max)
        g_L = g(L)
        if g_L >= 0.0:
            return find_root(g, RootBracket(lo, L, g_lo, g_L if g_L > 0 else 1e-300), tol)
        lo, g_lo = L, g_L
    raise BracketError(f"max d'' stays negative up to L={L_max!r}")


@lru_cache(maxsize=8)
def _L0_cached(argument):
    return find_L0(argument=argument)


def critical_constants(L: float, *, argument: str = "amplitude") -> CriticalConstants:
    """k*, omega*(L), c*(L), the c* fit and L0.

    Entries that do not exist (no sign change of R', omega* >= 1, no zero
    crossing of max d'') are None.
    """
    if not L > 0.0:
        raise DomainError(f"period L must be positive, got {L!r}")
    try:
        k_star = find_kstar(argument=argument)
    except BracketError:
        k_star = None
    omega_star = omega_star_L2 = c_star = None
    if k_star is not None:
        omega_star_L2 = scaled_omega(k_star)
        omega_star = omega_star_L2 / (L * L)
        if omega_star < 1.0:
            c_star = math.sqrt(1.0 - omega_star)
    try:
        L0 = _L0_cached(argument)
    except BracketError:
        L0 = None
    return CriticalConstants(
        L=L,
        k_star=k_star,
        omega_star=omega_star,
        omega_star_L2=omega_star_L2,
        c_star=c_star,
        c_star_fit=c_star_fit(L) if L > 2.0 * math.pi else None,
        L0=L0,
        argument=argument,
    )


def verdict(equation: str, L: float, parameter: float, *, argument: str = "amplitude") -> StabilityReport:
    """Parity verdict n(L_e) - p(d'') for a wave speed c (qkg) or frequency omega (qnls)."""
    if equation not in EQUATIONS:
        raise ValueError(f"equation must be one of {EQUATIONS}, got {equation!r}")
    if equation == "qkg":
        omega = _check_kg(L, parameter)
        k = k_from_omega(L, omega)
        d2 = ddprime_kg(L, parameter, argument=argument)
    else:
        k = k_from_omega(L, parameter)
        d2 = ddprime_nls(L, parameter, argument=argument)
    n_Le, _ = spectral_summary(params_from_k(L, k, equation), equation)
    p_d2 = 1 if d2 > 0.0 else 0
    parity = n_Le - p_d2
    return StabilityReport(
        equation=equation,
        L=L,
        parameter=parameter,
        k=k,
        d2=d2,
        n_Le=n_Le,
        p_d2=p_d2,
        parity=parity,
        verdict="orbitally-unstable" if parity % 2 else "indeterminate",
        argument=argument,
    )
