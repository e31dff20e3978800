"""Parameter records for the rate families.

Each class is one branch of the ``RateQuery`` union.  Construction validates
the domain, so an instance always describes a convergent integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import ClassVar, Union

from .errors import DomainError, IrrationalCoefficientError

MAX_DENOMINATOR = 12


def _finite(name: str, value) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


def _nonneg_int(name: str, value) -> int:
    v = float(value)
    if v < 0 or v != math.floor(v):
        raise DomainError(f"{name} must be a nonnegative integer, got {value!r}")
    return int(v)


def _pos_int(name: str, value, limit: int | None = None) -> int:
    v = float(value)
    if v < 1 or v != math.floor(v):
        raise DomainError(f"{name} must be a positive integer, got {value!r}")
    if limit is not None and v > limit:
        raise DomainError(f"{name} must be <= {limit}, got {value!r}")
    return int(v)


def as_small_fraction(value: float, limit: int = MAX_DENOMINATOR, name: str = "value") -> Fraction:
    """Exact small-denominator fraction equal to ``value`` (to 1e-12)."""
    frac = Fraction(value).limit_denominator(limit)
    if abs(float(frac) - value) > 1e-12 * max(1.0, abs(value)):
        raise IrrationalCoefficientError(
            f"{name}={value!r} is not a ratio with denominator <= {limit}"
        )
    return frac


class _Query:
    family: ClassVar[str]

    def params(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def _set(self, name, value):
        object.__setattr__(self, name, value)


@dataclass(frozen=True)
class NonResonant(_Query):
    """J1: integral of y^nu exp(-y - z y^-1/2) over (0, inf)."""

    z: float
    nu: float
    family: ClassVar[str] = "nonresonant"

    def __post_init__(self):
        self._set("z", _finite("z", self.z))
        self._set("nu", _finite("nu", self.nu))
        if self.z < 0:
            raise DomainError("z must be >= 0")
        if self.z == 0 and self.nu <= -1:
            raise DomainError("z = 0 requires nu > -1")


@dataclass(frozen=True)
class CutOff(_Query):
    """J2: the J1 integrand over (0, d)."""

    z: float
    d: float
    nu: float
    family: ClassVar[str] = "cutoff"

    def __post_init__(self):
        for name in ("z", "d", "nu"):
            self._set(name, _finite(name, getattr(self, name)))
        if self.z < 0:
            raise DomainError("z must be >= 0")
        if self.d <= 0:
            raise DomainError("d must be > 0")
        if self.z == 0 and self.nu <= -1:
            raise DomainError("z = 0 requires nu > -1")


@dataclass(frozen=True)
class Screened(_Query):
    """J3: integral of y^nu exp(-y - z (y + t)^-1/2); nu a nonnegative integer."""

    z: float
    t: float
    nu: int
    family: ClassVar[str] = "screened"

    def __post_init__(self):
        self._set("z", _finite("z", self.z))
        self._set("t", _finite("t", self.t))
        self._set("nu", _nonneg_int("nu", self.nu))
        if self.z < 0:
            raise DomainError("z must be >= 0")
        if self.t < 0:
            raise DomainError("t must be >= 0")


@dataclass(frozen=True)
class Depleted(_Query):
    """J4: integral of y^nu exp(-y - b y^delta - z y^-1/2)."""

    z: float
    delta: float
    b: float
    nu: float
    family: ClassVar[str] = "depleted"

    def __post_init__(self):
        for name in ("z", "delta", "b", "nu"):
            self._set(name, _finite(name, getattr(self, name)))
        if self.z < 0:
            raise DomainError("z must be >= 0")
        if self.delta <= 0:
            raise DomainError("delta must be > 0")
        if self.b < 0:
            raise DomainError("b must be >= 0")
        if self.z == 0 and self.nu <= -1:
            raise DomainError("z = 0 requires nu > -1")


@dataclass(frozen=True)
class Resonant(_Query):
    """Integral of t^nu exp(-a t - q t^(-n/m)) / ((b - t)^2 + g^2)."""

    q: float
    a: float
    b: float
    g: float
    nu: int
    n: int = 1
    m: int = 2
    family: ClassVar[str] = "resonant"

    def __post_init__(self):
        for name in ("q", "a", "b", "g"):
            self._set(name, _finite(name, getattr(self, name)))
        self._set("nu", _nonneg_int("nu", self.nu))
        self._set("n", _pos_int("n", self.n, MAX_DENOMINATOR))
        self._set("m", _pos_int("m", self.m, MAX_DENOMINATOR))
        if self.q < 0:
            raise DomainError("q must be >= 0")
        if self.a <= 0:
            raise DomainError("a must be > 0")
        if self.g == 0:
            raise DomainError("g must be nonzero")


@dataclass(frozen=True)
class GeneralMB(_Query):
    """p * integral of exp(-p t) t^(-n rho) exp(-z t^(-n/m))."""

    z: float
    p: float
    rho: float
    n: int
    m: int
    family: ClassVar[str] = "general"

    def __post_init__(self):
        for name in ("z", "p", "rho"):
            self._set(name, _finite(name, getattr(self, name)))
        self._set("n", _pos_int("n", self.n, MAX_DENOMINATOR))
        self._set("m", _pos_int("m", self.m, MAX_DENOMINATOR))
        if self.z < 0:
            raise DomainError("z must be >= 0")
        if self.p <= 0:
            raise DomainError("p must be > 0")
        if self.z == 0 and 1 - self.n * self.rho <= 0:
            raise DomainError("z = 0 requires n * rho < 1")


@dataclass(frozen=True)
class GeneralH(_Query):
    """Integral of exp(-p t) t^(rho - 1) exp(-z t^-gamma); gamma rational."""

    z: float
    p: float
    rho: float
    gamma: float
    family: ClassVar[str] = "general-h"

    def __post_init__(self):
        for name in ("z", "p", "rho", "gamma"):
            self._set(name, _finite(name, getattr(self, name)))
        if self.z < 0:
            raise DomainError("z must be >= 0")
        if self.p <= 0:
            raise DomainError("p must be > 0")
        if self.gamma <= 0:
            raise DomainError("gamma must be > 0")
        as_small_fraction(self.gamma, name="gamma")
        if self.z == 0 and self.rho <= 0:
            raise DomainError("z = 0 requires rho > 0")


RateQuery = Union[NonResonant, CutOff, Screened, Depleted, Resonant, GeneralMB, GeneralH]

FAMILIES: dict[str, type] = {
    cls.family: cls
    for cls in (NonResonant, CutOff, Screened, Depleted, Resonant, GeneralMB, GeneralH)
}
