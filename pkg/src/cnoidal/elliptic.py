"""Double-precision elliptic integrals, Jacobi elliptic functions and
Heuman's Lambda function.

Everything here is scalar, pure and built on three kernels:

* the arithmetic-geometric mean (complete integrals K, E and the descending
  Landen scale used for sn, cn, dn),
* Carlson's symmetric integrals R_F and R_D (incomplete integrals),
* Heuman's Lambda assembled from the four primitives above.

The modulus ``k`` (not the parameter ``m = k**2``) is the argument throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError

__all__ = [
    "K_ONE_GUARD",
    "EllipticArgs",
    "complementary_modulus",
    "complete_K",
    "complete_E",
    "complete_K_derivative",
    "complete_E_derivative",
    "carlson_rf",
    "carlson_rd",
    "incomplete_F",
    "incomplete_E",
    "jacobi",
    "heuman_lambda",
]

# Moduli this close to 1 are refused: K diverges logarithmically and the
# quantities built on top of it lose all their digits.
K_ONE_GUARD = 1.0 - 1e-12

_EPS = 2.220446049250313e-16
_HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class EllipticArgs:
    """Modulus and angle inputs shared by the special functions."""

    k: float
    phi: float = 0.0
    u: float = 0.0

    def __post_init__(self):
        _check_modulus(self.k, allow_zero=True)

    @property
    def kprime(self) -> float:
        return complementary_modulus(self.k)


def _check_modulus(k, allow_zero=False):
    if not math.isfinite(k):
        raise DomainError(f"modulus must be finite, got {k!r}")
    lo_ok = k >= 0.0 if allow_zero else k > 0.0
    if not lo_ok or k >= K_ONE_GUARD:
        interval = "[0, 1)" if allow_zero else "(0, 1)"
        raise DomainError(f"modulus k={k!r} outside {interval} (k >= 1-1e-12 is refused)")


def _check_amplitude(phi):
    if not (0.0 <= phi <= _HALF_PI):
        raise DomainError(f"amplitude phi={phi!r} outside [0, pi/2]")


def complementary_modulus(k: float) -> float:
    """k' = sqrt(1 - k^2), evaluated without cancellation near k = 1."""
    return math.sqrt((1.0 - k) * (1.0 + k))


@lru_cache(maxsize=256)
def _agm_scale(k):
    """Descending AGM scale (a_n, c_n) started from (1, k', k)."""
    a, b, c = 1.0, complementary_modulus(k), k
    a_seq, c_seq = [a], [c]
    for _ in range(64):
        if abs(c) <= _EPS * a:
            break
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        a_seq.append(a)
        c_seq.append(c)
    return tuple(a_seq), tuple(c_seq)


def complete_K(k: float) -> float:
    """Complete elliptic integral of the first kind, K(k) = pi / (2 AGM(1, k')).

    ``k = 0`` returns the trigonometric limit pi/2.
    """
    _check_modulus(k, allow_zero=True)
    if k == 0.0:
        return _HALF_PI
    a_seq, _ = _agm_scale(k)
    return math.pi / (2.0 * a_seq[-1])


def complete_E(k: float) -> float:
    """Complete elliptic integral of the second kind.

    Uses E = K (1 - sum_n 2^(n-1) c_n^2) over the same AGM scale as K.
    """
    _check_modulus(k, allow_zero=True)
    if k == 0.0:
        return _HALF_PI
    a_seq, c_seq = _agm_scale(k)
    total = 0.0
    weight = 0.5
    for c in c_seq:
        total += weight * c * c
        weight *= 2.0
    return math.pi / (2.0 * a_seq[-1]) * (1.0 - total)


def complete_K_derivative(k: float) -> float:
    """dK/dk = (E - k'^2 K) / (k k'^2)."""
    _check_modulus(k)
    kp2 = (1.0 - k) * (1.0 + k)
    return (complete_E(k) - kp2 * complete_K(k)) / (k * kp2)


def complete_E_derivative(k: float) -> float:
    """dE/dk = (E - K) / k."""
    _check_modulus(k)
    return (complete_E(k) - complete_K(k)) / k


def carlson_rf(x: float, y: float, z: float) -> float:
    """Carlson's symmetric integral R_F(x, y, z); at most one argument may be 0."""
    if min(x, y, z) < 0.0 or (x == 0.0) + (y == 0.0) + (z == 0.0) > 1:
        raise DomainError(f"R_F needs non-negative arguments with at most one zero, got {(x, y, z)!r}")
    x0, y0 = x, y
    a0 = (x + y + z) / 3.0
    q = (3.0 * _EPS) ** (-1.0 / 6.0) * max(abs(a0 - x), abs(a0 - y), abs(a0 - z))
    a = a0
    scale = 1.0
    while scale * q >= abs(a):
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * sy + sy * sz + sz * sx
        x, y, z = 0.25 * (x + lam), 0.25 * (y + lam), 0.25 * (z + lam)
        a = 0.25 * (a + lam)
        scale *= 0.25
    dx = (a0 - x0) * scale / a
    dy = (a0 - y0) * scale / a
    dz = -(dx + dy)
    e2 = dx * dy - dz * dz
    e3 = dx * dy * dz
    return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / math.sqrt(a)


def carlson_rd(x: float, y: float, z: float) -> float:
    """Carlson's integral R_D(x, y, z) = R_J(x, y, z, z); needs z > 0."""
    if min(x, y) < 0.0 or z <= 0.0 or (x == 0.0 and y == 0.0):
        raise DomainError(f"R_D needs x, y >= 0 (not both zero) and z > 0, got {(x, y, z)!r}")
    x0, y0 = x, y
    a0 = (x + y + 3.0 * z) / 5.0
    q = (0.25 * _EPS) ** (-1.0 / 6.0) * max(abs(a0 - x), abs(a0 - y), abs(a0 - z))
    a = a0
    scale = 1.0
    tail = 0.0
    while scale * q >= abs(a):
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * sy + sy * sz + sz * sx
        tail += scale / (sz * (z + lam))
        x, y, z = 0.25 * (x + lam), 0.25 * (y + lam), 0.25 * (z + lam)
        a = 0.25 * (a + lam)
        scale *= 0.25
    dx = (a0 - x0) * scale / a
    dy = (a0 - y0) * scale / a
    dz = -(dx + dy) / 3.0
    xy = dx * dy
    zz = dz * dz
    e2 = xy - 6.0 * zz
    e3 = (3.0 * xy - 8.0 * zz) * dz
    e4 = 3.0 * (xy - zz) * zz
    e5 = xy * zz * dz
    series = (1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0
              - 3.0 * e4 / 22.0 - 9.0 * e2 * e3 / 52.0 + 3.0 * e5 / 26.0)
    return scale * series / (a * math.sqrt(a)) + 3.0 * tail


def _legendre_f(phi, k):
    # Unchecked kernel; valid for k <= 1 provided (k, phi) != (1, pi/2).
    s, c = math.sin(phi), math.cos(phi)
    return s * carlson_rf(c * c, (1.0 - k * s) * (1.0 + k * s), 1.0)


def _legendre_e(phi, k):
    s, c = math.sin(phi), math.cos(phi)
    cc, dd = c * c, (1.0 - k * s) * (1.0 + k * s)
    return s * carlson_rf(cc, dd, 1.0) - (k * k * s * s * s / 3.0) * carlson_rd(cc, dd, 1.0)


def incomplete_F(phi: float, k: float) -> float:
    """Incomplete integral of the first kind, F(phi, k) = int_0^phi dt / sqrt(1 - k^2 sin^2 t)."""
    _check_amplitude(phi)
    _check_modulus(k, allow_zero=True)
    if phi == 0.0:
        return 0.0
    return _legendre_f(phi, k)


def incomplete_E(phi: float, k: float) -> float:
    """Incomplete integral of the second kind, E(phi, k) = int_0^phi sqrt(1 - k^2 sin^2 t) dt."""
    _check_amplitude(phi)
    _check_modulus(k, allow_zero=True)
    if phi == 0.0:
        return 0.0
    return _legendre_e(phi, k)


def jacobi(u: float, k: float) -> tuple[float, float, float]:
    """Jacobi elliptic functions (sn, cn, dn) of argument ``u`` and modulus ``k``.

    Descending Landen transformation: the amplitude is built at the bottom of
    the AGM scale as 2^N a_N u and pulled back with
    phi_{n-1} = (phi_n + asin(c_n / a_n sin phi_n)) / 2.  The argument is first
    reduced modulo the real period 4K so that results are periodic to rounding.
    """
    if not math.isfinite(u):
        raise DomainError(f"argument u must be finite, got {u!r}")
    _check_modulus(k, allow_zero=True)
    if k == 0.0:
        return math.sin(u), math.cos(u), 1.0
    a_seq, c_seq = _agm_scale(k)
    n = len(a_seq) - 1
    period = 2.0 * math.pi / a_seq[-1]
    u = math.fmod(u, period)
    phi = math.ldexp(a_seq[-1] * u, n)
    for j in range(n, 0, -1):
        phi = 0.5 * (phi + math.asin(c_seq[j] / a_seq[j] * math.sin(phi)))
    sn, cn = math.sin(phi), math.cos(phi)
    kp = complementary_modulus(k)
    # dn^2 = k'^2 + k^2 cn^2 has no cancellation, unlike 1 - k^2 sn^2.
    dn = math.sqrt(kp * kp + k * k * cn * cn)
    return sn, cn, dn


def heuman_lambda(beta: float, k: float, *, argument: str = "amplitude") -> float:
    """Heuman's Lambda function.

    Lambda0(beta, k) = (2/pi) [E(k) F(beta, k') + K(k) E(beta, k') - K(k) F(beta, k')]

    ``argument="amplitude"`` (default) treats ``beta`` as the amplitude angle of
    the incomplete integrals, the convention under which Lambda0 lies in [0, 1],
    is increasing in beta and Lambda0(pi/2, k) = 1.

    ``argument="sine"`` feeds the incomplete integrals the amplitude
    ``asin(beta)``, i.e. ``beta`` is read as the sine of the amplitude, which is
    how computer-algebra routines of the form ``EllipticF(z, k)`` interpret their
    first argument.  Supplying an angle under this reading is a classic slip;
    the option exists so numbers computed that way can be reproduced and diagnosed.
    """
    _check_modulus(k)
    if argument == "amplitude":
        _check_amplitude(beta)
        amp = beta
    elif argument == "sine":
        if not (0.0 <= beta <= 1.0):
            raise DomainError(f"sine-argument beta={beta!r} outside [0, 1]")
        amp = math.asin(beta)
    else:
        raise ValueError(f"argument must be 'amplitude' or 'sine', got {argument!r}")
    if amp == 0.0:
        return 0.0
    kp = complementary_modulus(k)
    big_k, big_e = complete_K(k), complete_E(k)
    f = _legendre_f(amp, kp)
    e = _legendre_e(amp, kp)
    return (2.0 / math.pi) * ((big_e - big_k) * f + big_k * e)
