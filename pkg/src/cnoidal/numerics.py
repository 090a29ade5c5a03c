"""Generic numerical engines: ODE initial-value integration, bracketed root
finding, Richardson-extrapolated differentiation and adaptive quadrature.

The integrator works on plain tuples of floats: the systems solved here are
two-dimensional and numpy's per-call overhead would dominate the cost.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

from scipy import integrate as _spi
from scipy import optimize as _spo

from .errors import BracketError, DomainError, IntegrationError, QuadratureError

__all__ = [
    "ODE_RTOL",
    "ODE_ATOL",
    "QUAD_TOL",
    "ROOT_TOL",
    "IvpSpec",
    "RootBracket",
    "integrate",
    "integrate_dense",
    "find_root",
    "derivative",
    "quadrature",
]

ODE_RTOL = 1e-10
ODE_ATOL = 1e-12
QUAD_TOL = 1e-12
ROOT_TOL = 1e-10

Rhs = Callable[[float, tuple], Sequence[float]]


@dataclass(frozen=True)
class IvpSpec:
    """An initial-value problem y' = rhs(x, y), y(x0) = y0, solved up to x1."""

    rhs: Rhs
    x0: float
    x1: float
    y0: tuple
    rel_tol: float = ODE_RTOL
    abs_tol: float = ODE_ATOL

    def __post_init__(self):
        if not self.x1 > self.x0:
            raise DomainError(f"need x1 > x0, got x0={self.x0!r}, x1={self.x1!r}")
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("tolerances must be positive")
        object.__setattr__(self, "y0", tuple(float(v) for v in self.y0))


@dataclass(frozen=True)
class RootBracket:
    """Interval [lo, hi] with a certified sign change f(lo) * f(hi) < 0."""

    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise BracketError(f"bracket needs lo < hi, got [{self.lo!r}, {self.hi!r}]")
        if not self.f_lo * self.f_hi < 0.0:
            raise BracketError(
                f"no sign change on [{self.lo!r}, {self.hi!r}]: f_lo={self.f_lo!r}, f_hi={self.f_hi!r}"
            )

    @classmethod
    def from_function(cls, f: Callable[[float], float], lo: float, hi: float) -> "RootBracket":
        return cls(lo, hi, f(lo), f(hi))


# Dormand & Prince (1980) 5(4) tableau; stage 7 reuses the 5th-order weights (FSAL).
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
# 5th-order minus embedded 4th-order weights.
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40,
)


def _dopri_step(rhs, x, y, h, k1):
    k2 = rhs(x + _C2 * h, [v + h * _A21 * a for v, a in zip(y, k1)])
    k3 = rhs(x + _C3 * h, [v + h * (_A31 * a + _A32 * b) for v, a, b in zip(y, k1, k2)])
    k4 = rhs(x + _C4 * h, [v + h * (_A41 * a + _A42 * b + _A43 * c)
                           for v, a, b, c in zip(y, k1, k2, k3)])
    k5 = rhs(x + _C5 * h, [v + h * (_A51 * a + _A52 * b + _A53 * c + _A54 * d)
                           for v, a, b, c, d in zip(y, k1, k2, k3, k4)])
    k6 = rhs(x + h, [v + h * (_A61 * a + _A62 * b + _A63 * c + _A64 * d + _A65 * e)
                     for v, a, b, c, d, e in zip(y, k1, k2, k3, k4, k5)])
    y_new = tuple(v + h * (_B1 * a + _B3 * c + _B4 * d + _B5 * e + _B6 * f)
                  for v, a, c, d, e, f in zip(y, k1, k3, k4, k5, k6))
    k7 = rhs(x + h, y_new)
    err = [h * (_E1 * a + _E3 * c + _E4 * d + _E5 * e + _E6 * f + _E7 * g)
           for a, c, d, e, f, g in zip(k1, k3, k4, k5, k6, k7)]
    return y_new, err, k7


def _initial_step(rhs, x0, y0, f0, rtol, atol, span):
    # Hairer, Norsett & Wanner, Solving ODEs I, sec. II.4.
    sc = [atol + rtol * abs(v) for v in y0]
    d0 = math.sqrt(sum((v / s) ** 2 for v, s in zip(y0, sc)) / len(y0))
    d1 = math.sqrt(sum((v / s) ** 2 for v, s in zip(f0, sc)) / len(y0))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, span)
    y1 = tuple(v + h0 * f for v, f in zip(y0, f0))
    f1 = rhs(x0 + h0, y1)
    d2 = math.sqrt(sum(((a - b) / s) ** 2 for a, b, s in zip(f1, f0, sc)) / len(y0)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1, span)


def _march(spec: IvpSpec, stops: Sequence[float], max_steps: int):
    """Advance from spec.x0 through each point of ``stops`` (ascending), landing exactly on each."""
    rhs, rtol, atol = spec.rhs, spec.rel_tol, spec.abs_tol
    x, y = spec.x0, spec.y0
    f = tuple(rhs(x, y))
    h = _initial_step(rhs, x, y, f, rtol, atol, spec.x1 - spec.x0)
    out = []
    steps = 0
    for target in stops:
        while x < target:
            if steps >= max_steps:
                raise IntegrationError(f"exceeded {max_steps} steps", x)
            landing = x + h >= target
            step = target - x if landing else h
            if step <= 16 * math.ulp(max(abs(x), 1.0)):
                if landing:
                    # Remaining gap is rounding noise.
                    x = target
                    break
                raise IntegrationError("step size underflow", x)
            y_new, err, f_new = _dopri_step(rhs, x, y, step, f)
            steps += 1
            norm = math.sqrt(
                sum(
                    (e / (atol + rtol * max(abs(a), abs(b)))) ** 2
                    for e, a, b in zip(err, y, y_new)
                )
                / len(y)
            )
            if not math.isfinite(norm):
                raise IntegrationError("non-finite solution or error estimate", x)
            if norm <= 1.0:
                x = target if landing else x + step
                y, f = y_new, f_new
                factor = 5.0 if norm == 0.0 else min(5.0, max(0.2, 0.9 * norm ** -0.2))
                # A step clipped short to land on a stop says nothing about h.
                h = max(h, step * factor) if landing and step < h else step * factor
            else:
                h = step * max(0.2, 0.9 * norm ** -0.2)
        out.append(y)
    return out


def integrate(spec: IvpSpec, max_steps: int = 1_000_000) -> tuple:
    """State at ``spec.x1`` from the adaptive Dormand-Prince 5(4) pair.

    Raises IntegrationError (with ``x_reached``) on step-size underflow, a
    non-finite state or when ``max_steps`` is exhausted.
    """
    return _march(spec, [spec.x1], max_steps)[0]


def integrate_dense(spec: IvpSpec, xs: Sequence[float], max_steps: int = 1_000_000) -> list:
    """States at each abscissa in ``xs`` (must lie in [x0, x1], ascending).

    Steps are clipped so that every requested point is hit exactly, so no
    interpolant is involved.
    """
    xs = [float(v) for v in xs]
    if any(b < a for a, b in zip(xs, xs[1:])):
        raise DomainError("evaluation points must be ascending")
    if xs and (xs[0] < spec.x0 or xs[-1] > spec.x1):
        raise DomainError("evaluation points must lie inside [x0, x1]")
    return _march(spec, xs, max_steps)


def find_root(f: Callable[[float], float], bracket: RootBracket, tol: float = ROOT_TOL) -> float:
    """Brent's method on a certified bracket; the result lies inside it."""
    root = _spo.brentq(f, bracket.lo, bracket.hi, xtol=tol, rtol=4 * 2.220446049250313e-16, maxiter=500)
    return min(max(root, bracket.lo), bracket.hi)


def derivative(
    f: Callable[[float], float],
    x: float,
    h0: float = 1e-2,
    levels: int = 4,
) -> tuple[float, float]:
    """Central difference with Richardson extrapolation.

    Builds the Neville tableau D[i][j] from step sizes h0 / 2^i; the error of a
    central difference is even in h, so each level removes one power of h^2.
    Returns ``(value, error_estimate)`` where the estimate is the difference of
    the two most extrapolated entries.
    """
    if levels < 2:
        raise DomainError("need at least two extrapolation levels")
    table = []
    h = h0
    for i in range(levels + 1):
        row = [(f(x + h) - f(x - h)) / (2.0 * h)]
        factor = 4.0
        for j in range(1, i + 1):
            row.append(row[j - 1] + (row[j - 1] - table[i - 1][j - 1]) / (factor - 1.0))
            factor *= 4.0
        table.append(row)
        h *= 0.5
    best = table[-1][-1]
    return best, abs(best - table[-2][-1])


def quadrature(f: Callable[[float], float], a: float, b: float, tol: float = QUAD_TOL) -> float:
    """Adaptive Gauss-Kronrod (QUADPACK QAGS) with relative and absolute tolerance ``tol``.

    Raises QuadratureError carrying the best estimate when QUADPACK reports
    that the tolerance was not met.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _spi.IntegrationWarning)
        result = _spi.quad(f, a, b, epsabs=tol, epsrel=tol, limit=500, full_output=1)
    value, error = result[0], result[1]
    if len(result) > 3 and error > 10 * tol * max(1.0, abs(value)):
        raise QuadratureError(result[3].splitlines()[0], value, error)
    return value
