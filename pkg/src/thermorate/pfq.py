"""Generalized hypergeometric series pFq for p <= q."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from . import kernels
from ._config import term_ceiling
from .errors import DomainError, NonConvergenceError, PoleError

EPS_REL = 1e-15
EPS_ABS = 1e-300
MAX_TERMS = 10_000
# largest term / |result| beyond which the sum is reported unreliable
CANCELLATION_LIMIT = 1e15
_DD_EPS = 2.0 ** -104


@dataclass(frozen=True)
class SeriesValue:
    """Value of a truncated series with an absolute error bound.

    ``abs_err == inf`` is the unreliable-cancellation sentinel: the digits of
    ``value`` cannot be trusted at working precision.
    """

    value: float
    abs_err: float
    terms: int
    method: str = field(default="series", compare=False)

    @property
    def reliable(self) -> bool:
        return math.isfinite(self.abs_err)

    @property
    def rel_err(self) -> float:
        if self.value == 0.0:
            return math.inf
        return self.abs_err / abs(self.value)


@dataclass(frozen=True)
class PfqSpec:
    upper: tuple[float, ...]
    lower: tuple[float, ...]
    x: float

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(float(a) for a in self.upper))
        object.__setattr__(self, "lower", tuple(float(b) for b in self.lower))
        object.__setattr__(self, "x", float(self.x))
        if len(self.upper) > len(self.lower):
            raise DomainError("only p <= q (entire) series are supported")
        for b in self.lower:
            k = round(b)
            if k <= 0 and abs(b - k) < 1e-12:
                raise PoleError(f"lower parameter {b!r} is a nonpositive integer")


def pfq(spec: PfqSpec) -> SeriesValue:
    """Sum pFq(upper; lower; x) by forward term recursion.

    The recursion and the running sum are carried in double-double precision,
    so alternating series whose terms exceed the result by many orders of
    magnitude still come out accurate.  The sum stops after three consecutive
    terms below ``EPS_REL * |sum| + EPS_ABS``; ``abs_err`` is ten times the
    first neglected term.
    """
    max_terms = term_ceiling(MAX_TERMS)
    value, neglected, max_term, terms, status = kernels.pfq_sum(
        spec.upper, spec.lower, spec.x, EPS_REL, EPS_ABS, max_terms
    )
    if status == 1:
        raise NonConvergenceError(f"pFq did not converge within {max_terms} terms (x={spec.x})")
    if status == 2 or max_term > CANCELLATION_LIMIT * abs(value):
        return SeriesValue(value, math.inf, terms)
    abs_err = 10.0 * neglected + _DD_EPS * terms * max_term
    return SeriesValue(value, abs_err, terms)


def hyp(upper: Sequence[float], lower: Sequence[float], x: float) -> SeriesValue:
    return pfq(PfqSpec(tuple(upper), tuple(lower), x))
