"""Real-argument gamma-family primitives.

Everything here works on plain floats.  Negative non-integer arguments go
through the reflection formula, and the sign of Gamma is carried separately
from log|Gamma| so callers never need complex logarithms.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from . import kernels
from .errors import NonConvergenceError, PoleError

POLE_TOL = 1e-12
EULER_GAMMA = 0.57721566490153286061


def _check_pole(x: float) -> None:
    if x <= 0.5:
        k = round(x)
        if k <= 0 and abs(x - k) < POLE_TOL:
            raise PoleError(f"Gamma has a pole at {k} (argument {x!r})")


def ln_gamma(x: float) -> tuple[float, int]:
    """Return ``(log|Gamma(x)|, sign)`` with ``sign * exp(log) == Gamma(x)``.

    Raises ``PoleError`` within 1e-12 of a nonpositive integer.
    """
    x = float(x)
    _check_pole(x)
    return kernels.ln_gamma(x)


def gamma(x: float) -> float:
    lg, sign = ln_gamma(x)
    return sign * math.exp(lg)


def rgamma(x: float) -> float:
    """1/Gamma(x), zero at the poles."""
    x = float(x)
    if x <= 0.5:
        k = round(x)
        if k <= 0 and abs(x - k) < POLE_TOL:
            return 0.0
    lg, sign = kernels.ln_gamma(x)
    return sign * math.exp(-lg)


def digamma(x: float) -> float:
    """psi(x) = d/dx log Gamma(x)."""
    x = float(x)
    _check_pole(x)
    return kernels.digamma(x)


def log_factorial(k: int) -> float:
    return kernels.ln_gamma(float(k) + 1.0)[0]


class MultiplicationSplit(NamedTuple):
    """Gamma(m s) == prefactor[0] * prefactor[1] * prod(Gamma(t) for t in shifts)."""

    shifts: list[float]
    prefactor: tuple[float, float]

    def product(self) -> float:
        out = self.prefactor[0] * self.prefactor[1]
        for t in self.shifts:
            out *= gamma(t)
        return out


def multiplication_split(m: int, s: float) -> MultiplicationSplit:
    """Gauss multiplication formula for Gamma(m s).

    Returns the shifts ``s, s + 1/m, ..., s + (m-1)/m`` together with the
    constant ``(2 pi)^((1-m)/2)`` and the power ``m^(m s - 1/2)``.
    """
    if int(m) != m or m < 1:
        raise ValueError(f"m must be a positive integer, got {m!r}")
    m = int(m)
    _check_pole(m * s)
    shifts = [s + k / m for k in range(m)]
    return MultiplicationSplit(
        shifts, ((2.0 * math.pi) ** ((1 - m) / 2), float(m) ** (m * s - 0.5))
    )


def upper_incomplete_gamma(a: float, x: float, max_iter: int = 5000) -> float:
    """Gamma(a, x) for real ``a`` of either sign and ``x > 0``.

    Modified Lentz evaluation of the Legendre continued fraction; converges
    fastest for ``x > a + 1``, which is the only regime callers use.
    """
    if x <= 0.0:
        raise ValueError("x must be positive")
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, max_iter):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return math.exp(-x + a * math.log(x)) * h
    raise NonConvergenceError(f"Gamma({a}, {x}) continued fraction did not converge")
