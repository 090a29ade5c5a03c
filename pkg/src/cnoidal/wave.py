"""The cnoidal family of L-periodic solutions of -phi'' + omega phi - phi^5 = 0.

    phi(x) = a cn(b x, k) / sqrt(1 - q sn^2(b x, k)),   b = 4 K(k) / L

with, writing s = sqrt(k^4 - k^2 + 1),

    q = k^2 - 1 - s
    a = (2 / L) [K^2 q (-k^2 - 1 - s) L^2]^(1/4)
    omega = -16 K^2 ((1 - k^2) s + k^4 - k^2 + 1) / ((k^2 - 1 - s) L^2)

The last expression collapses to omega L^2 = 16 K^2 s, which is what the
analytic derivative uses.  For the Klein-Gordon reading omega = 1 - c^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .elliptic import K_ONE_GUARD, complete_K, complete_K_derivative, jacobi
from .errors import DomainError
from .numerics import RootBracket, find_root

__all__ = [
    "EQUATIONS",
    "WaveParams",
    "shape_s",
    "shape_q",
    "amplitude",
    "omega_of_k",
    "scaled_omega",
    "scaled_omega_dk",
    "domega_dk",
    "omega_first_line",
    "omega_floor",
    "params_from_k",
    "k_from_omega",
    "k_upper_qkg",
    "phi",
    "phi_dx",
    "phi_dxx",
]

EQUATIONS = ("qkg", "qnls")

# Largest modulus handed to the root finder when inverting omega(k).
_K_TOP = K_ONE_GUARD - 1e-15


@dataclass(frozen=True)
class WaveParams:
    """One member of the cnoidal family.

    ``c`` is set (non-negative) only for the Klein-Gordon reading, where
    omega = 1 - c^2; negate it explicitly if the negative speed is wanted.
    """

    L: float
    k: float
    a: float
    q: float
    omega: float
    b: float
    c: Optional[float] = None

    @property
    def phi_dd0(self) -> float:
        """phi''(0) = omega a - a^5."""
        return self.omega * self.a - self.a ** 5

    def with_speed_sign(self, sign: int) -> "WaveParams":
        if self.c is None:
            raise DomainError("wave speed is only defined for the Klein-Gordon reading")
        return replace(self, c=math.copysign(self.c, sign))


def _check_L(L):
    if not (math.isfinite(L) and L > 0.0):
        raise DomainError(f"period L must be positive and finite, got {L!r}")


def _check_k(k):
    if not (0.0 < k < K_ONE_GUARD):
        raise DomainError(f"modulus k={k!r} outside (0, 1)")


def shape_s(k: float) -> float:
    """s(k) = sqrt(k^4 - k^2 + 1)."""
    return math.sqrt(k ** 4 - k ** 2 + 1.0)


def shape_q(k: float) -> float:
    """q(k) = k^2 - 1 - s(k), which ranges over (-2, -1) on 0 < k < 1."""
    return k * k - 1.0 - shape_s(k)


def amplitude(L: float, k: float) -> float:
    s = shape_s(k)
    K = complete_K(k)
    radicand = K * K * shape_q(k) * (-k * k - 1.0 - s) * L * L
    # q (-k^2 - 1 - s) = 2 + 2s - k^2 > 0 on (0, 1).
    assert radicand > 0.0, radicand
    return 2.0 * radicand ** 0.25 / L


def omega_of_k(L: float, k: float) -> float:
    """Frequency from the k-explicit formula, evaluated term by term as printed."""
    s = shape_s(k)
    K = complete_K(k)
    k2 = k * k
    return -16.0 * K * K * ((1.0 - k2) * s + k2 * k2 - k2 + 1.0) / ((k2 - 1.0 - s) * L * L)


def scaled_omega(k: float) -> float:
    """omega L^2 = 16 K(k)^2 s(k); independent of L."""
    K = complete_K(k)
    return 16.0 * K * K * shape_s(k)


def scaled_omega_dk(k: float) -> float:
    """d(omega L^2)/dk = 16 (2 K K' s + K^2 s'), with s' = k (2k^2 - 1) / s."""
    K = complete_K(k)
    s = shape_s(k)
    return 16.0 * (2.0 * K * complete_K_derivative(k) * s + K * K * k * (2.0 * k * k - 1.0) / s)


def domega_dk(L: float, k: float) -> float:
    """Analytic d omega / dk at fixed L (positive on (0, 1))."""
    _check_L(L)
    _check_k(k)
    return scaled_omega_dk(k) / (L * L)


def omega_first_line(L: float, k: float, power: int = 4) -> float:
    """The amplitude-based expression (L^2 a^p - 16 q^2 k^2 K^2 + 16 q k^2 K^2) / (L^2 q^2).

    As typeset the amplitude enters squared (``power=2``), which does not
    reproduce the k-explicit frequency; with ``power=4`` the two agree.  Kept
    as a consistency check only.
    """
    a = amplitude(L, k)
    q = shape_q(k)
    K = complete_K(k)
    k2 = k * k
    return (L * L * a ** power - 16.0 * q * q * k2 * K * K + 16.0 * q * k2 * K * K) / (L * L * q * q)


def omega_floor(L: float) -> float:
    """Lower end 4 pi^2 / L^2 of the frequency range (the k -> 0 limit)."""
    _check_L(L)
    return 4.0 * math.pi ** 2 / (L * L)


def params_from_k(L: float, k: float, equation: str = "qnls") -> WaveParams:
    """Wave parameters for modulus ``k`` at period ``L``.

    ``equation="qkg"`` additionally requires omega < 1 and fills in c = sqrt(1 - omega).
    """
    _check_L(L)
    _check_k(k)
    if equation not in EQUATIONS:
        raise ValueError(f"equation must be one of {EQUATIONS}, got {equation!r}")
    omega = omega_of_k(L, k)
    c = None
    if equation == "qkg":
        if omega >= 1.0:
            raise DomainError(
                f"omega={omega!r} >= 1 at (L={L!r}, k={k!r}): no Klein-Gordon speed "
                "(needs L > 2 pi and k below the omega = 1 level)"
            )
        c = math.sqrt(1.0 - omega)
    return WaveParams(
        L=L,
        k=k,
        a=amplitude(L, k),
        q=shape_q(k),
        omega=omega,
        b=4.0 * complete_K(k) / L,
        c=c,
    )


def k_from_omega(L: float, omega: float, tol: float = 1e-15) -> float:
    """Invert omega(k; L) by bracketed root finding on (0, 1)."""
    floor = omega_floor(L)
    if not omega > floor:
        raise DomainError(f"omega={omega!r} must exceed 4 pi^2 / L^2 = {floor!r}")
    target = omega * L * L

    def residual(k):
        return (scaled_omega(k) if k > 0.0 else 4.0 * math.pi ** 2) - target

    top = residual(_K_TOP)
    if top <= 0.0:
        raise DomainError(f"omega={omega!r} beyond the largest representable modulus at L={L!r}")
    return find_root(residual, RootBracket(0.0, _K_TOP, residual(0.0), top), tol=tol)


def k_upper_qkg(L: float) -> float:
    """Modulus at which omega(k; L) = 1, the top of the Klein-Gordon range."""
    if not L > 2.0 * math.pi:
        raise DomainError(f"Klein-Gordon waves need L > 2 pi, got L={L!r}")
    try:
        return k_from_omega(L, 1.0)
    except DomainError:
        return _K_TOP


def _jacobi_any(u, k):
    if np.ndim(u) == 0:
        return jacobi(float(u), k)
    u = np.asarray(u, dtype=float)
    flat = [jacobi(v, k) for v in u.ravel()]
    sn, cn, dn = (np.array(t).reshape(u.shape) for t in zip(*flat)) if flat else (u, u, u)
    return sn, cn, dn


def phi(params: WaveParams, x):
    """Profile value; ``x`` may be a scalar or an array."""
    sn, cn, _ = _jacobi_any(np.multiply(params.b, x), params.k)
    return params.a * np.multiply(cn, 1.0 / np.sqrt(1.0 - params.q * np.square(sn)))


def phi_dx(params: WaveParams, x):
    """phi'(x) = a b (q - 1) sn dn / (1 - q sn^2)^(3/2)."""
    sn, _, dn = _jacobi_any(np.multiply(params.b, x), params.k)
    d = 1.0 - params.q * np.square(sn)
    return params.a * params.b * (params.q - 1.0) * np.multiply(sn, dn) / (d * np.sqrt(d))


def phi_dxx(params: WaveParams, x):
    """phi''(x) through the profile equation, omega phi - phi^5."""
    p = phi(params, x)
    return params.omega * p - p ** 5
