"""Adaptive quadrature of the defining rate integrals.

This is the ground truth that every closed form is checked against, so it
shares nothing with the series code beyond the query records.  Integrands
are built in log form, the range is split at the integrand's mode, the head
uses y = u^2 to tame the essential singularity at zero, and an infinite tail
is mapped onto [0, 1) by y = c + s w / (1 - w).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _gk
from .errors import DomainError, QuadratureBudgetError
from .queries import (
    CutOff,
    Depleted,
    GeneralH,
    GeneralMB,
    NonResonant,
    RateQuery,
    Resonant,
    Screened,
)

BUDGET = 10**6
MIN_TOL = 1e-12


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_err: float
    evaluations: int


@dataclass(frozen=True)
class _Problem:
    log_f: Callable[[np.ndarray], np.ndarray]
    upper: float          # math.inf for a semi-infinite range
    decay: float          # rate of the exponential tail
    log_scale: float = 0.0
    marks: tuple[float, ...] = ()
    peak_hint: float | None = None


def _xlogy(c: float, y: np.ndarray) -> np.ndarray:
    if c == 0.0:
        return np.zeros_like(y)
    return c * np.log(y)


def _problem(query: RateQuery) -> _Problem:
    if isinstance(query, NonResonant):
        z, nu = query.z, query.nu
        return _Problem(lambda y: _xlogy(nu, y) - y - z / np.sqrt(y), math.inf, 1.0,
                        peak_hint=(z / 2) ** (2 / 3))
    if isinstance(query, CutOff):
        z, nu = query.z, query.nu
        return _Problem(lambda y: _xlogy(nu, y) - y - z / np.sqrt(y), query.d, 1.0,
                        peak_hint=(z / 2) ** (2 / 3))
    if isinstance(query, Screened):
        z, t, nu = query.z, query.t, query.nu
        return _Problem(lambda y: _xlogy(nu, y) - y - z / np.sqrt(y + t), math.inf, 1.0)
    if isinstance(query, Depleted):
        z, b, dl, nu = query.z, query.b, query.delta, query.nu
        return _Problem(lambda y: _xlogy(nu, y) - y - b * y ** dl - z / np.sqrt(y),
                        math.inf, 1.0, peak_hint=(z / 2) ** (2 / 3))
    if isinstance(query, Resonant):
        q, a, b, g, nu = query.q, query.a, query.b, query.g, query.nu
        ex = query.n / query.m
        marks = tuple(v for v in (b - abs(g), b, b + abs(g)) if v > 0)
        return _Problem(
            lambda t: _xlogy(nu, t) - a * t - q * t ** -ex - np.log((b - t) ** 2 + g * g),
            math.inf, a, marks=marks,
        )
    if isinstance(query, GeneralMB):
        z, p, rho = query.z, query.p, query.rho
        ex = query.n / query.m
        nr = query.n * rho
        return _Problem(lambda t: -p * t - _xlogy(nr, t) - z * t ** -ex, math.inf, p,
                        log_scale=math.log(p))
    if isinstance(query, GeneralH):
        z, p, rho, gam = query.z, query.p, query.rho, query.gamma
        return _Problem(lambda t: _xlogy(rho - 1.0, t) - p * t - z * t ** -gam, math.inf, p)
    raise DomainError(f"unknown query type {type(query).__name__}")


def _safe_log_f(prob: _Problem):
    def f(y):
        with np.errstate(all="ignore"):
            v = prob.log_f(y)
        return np.where(np.isnan(v), -np.inf, v)
    return f


def _mode(prob: _Problem, log_f) -> tuple[float, float]:
    hi = prob.upper if math.isfinite(prob.upper) else 1e4 / prob.decay
    grid = np.geomspace(1e-10 * hi, hi, 2001)
    if math.isfinite(prob.upper):
        grid = grid[grid < prob.upper]
    extra = [v for v in (prob.peak_hint,) + prob.marks if v and 0 < v < prob.upper]
    grid = np.concatenate([grid, np.array(extra, dtype=float)])
    vals = log_f(grid)
    i = int(np.argmax(vals))
    return float(grid[i]), float(vals[i])


def quad_rate(
    query: RateQuery, tol: float = 1e-10, *, budget: int = BUDGET, substitute: bool = True,
) -> QuadResult:
    """Integrate the defining integral of ``query`` to relative tolerance ``tol``."""
    if not tol >= MIN_TOL:
        raise DomainError(f"tol must be >= {MIN_TOL}")
    prob = _problem(query)
    log_f = _safe_log_f(prob)
    c, top = _mode(prob, log_f)
    if not math.isfinite(top):
        raise DomainError("integrand vanishes everywhere on the sampled grid")
    upper = prob.upper
    if c < 1e-6 * min(upper, 1.0):
        c = 0.5 * upper if math.isfinite(upper) else 1.0 / prob.decay

    def dens(y):
        return np.exp(log_f(y) - top)

    breaks = sorted({c, *(m for m in prob.marks if 0 < m < upper)})
    panels = []
    head = breaks[0]
    if substitute:
        panels.append(_gk.Panel(lambda u: 2.0 * u * dens(u * u), 0.0, math.sqrt(head)))
    else:
        panels.append(_gk.Panel(dens, 0.0, head))
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        panels.append(_gk.Panel(dens, lo, hi))
    last = breaks[-1]
    if math.isfinite(upper):
        if upper > last:
            panels.append(_gk.Panel(dens, last, upper))
    else:
        scale = max(1.0, math.sqrt(last * prob.decay)) / prob.decay

        def tail(w, last=last, scale=scale):
            with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
                y = last + scale * w / (1.0 - w)
                jac = scale / (1.0 - w) ** 2
                out = dens(y) * jac
            return np.where(np.isfinite(out), out, 0.0)

        panels.append(_gk.Panel(tail, 0.0, 1.0))

    factor = math.exp(top + prob.log_scale)
    try:
        val, err, evals, _ = _gk.integrate(panels, tol, budget=budget)
    except QuadratureBudgetError as exc:
        v, e, n = exc.result
        raise QuadratureBudgetError(str(exc), result=QuadResult(v * factor, e * factor, n)) from None
    return QuadResult(val * factor, err * factor, evals)
