"""Closed-form reaction-rate integrals and their large-z asymptotics.

All four basic integrals reduce to one building block,

    N1(z; a, nu, n, m) = int_0^inf t^nu exp(-a t - z t^(-n/m)) dt,

which is a Fox H-function with integer coefficients and therefore a Meijer G
after the multiplication formula, plus its truncated sibling N2 over (0, d).
Cut-off, screening and depletion are handled by outer series around these.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable

from ._config import term_ceiling
from .errors import DivergenceError, DomainError, IrrationalCoefficientError, NonConvergenceError
from .meijer import COLLISION_TOL, HSpec, g_series, h_series, h_to_g
from .pfq import EPS_ABS, EPS_REL, SeriesValue, hyp
from .queries import (
    FAMILIES,
    CutOff,
    Depleted,
    GeneralH,
    GeneralMB,
    NonResonant,
    RateQuery,
    Resonant,
    Screened,
    as_small_fraction,
)
from .special import gamma, upper_incomplete_gamma

__all__ = [
    "FAMILIES", "CutOff", "Depleted", "GeneralH", "GeneralMB", "NonResonant", "RateQuery",
    "Resonant", "Screened", "asym", "cancellation_wall", "closed", "j1_closed", "j2_closed",
    "j3_closed", "j4_closed", "n1", "n2", "rate_general", "rate_general_h", "resonant_closed",
]

OUTER_TERMS = 500
# a closed form whose error bound exceeds this fraction of its value is
# reported with the abs_err = inf sentinel
UNRELIABLE_REL = 1e-6
# generic J1 branch is accepted when the three-term combination keeps this
GENERIC_REL = 1e-12
# above this cut-off the complementary tail expansion replaces the r-series;
# between the two it is tried first and kept if accurate enough
CUTOFF_SWITCH = 12.0
COMPLEMENT_MIN = 3.0
SCREEN_SWITCH = 12.0
_EPS = 2.0 ** -52


class _Acc:
    """Running linear combination of SeriesValues with error bookkeeping."""

    def __init__(self):
        self.parts: list[float] = []
        self.err = 0.0
        self.mag = 0.0
        self.terms = 0
        self.method = "series"

    def add(self, coef: float, sv: SeriesValue) -> float:
        v = coef * sv.value
        self.parts.append(v)
        self.err += abs(coef) * sv.abs_err
        self.mag += abs(v)
        self.terms += sv.terms
        if sv.method == "double_pole_series":
            self.method = sv.method
        return v

    def add_exact(self, v: float, terms: int = 1) -> float:
        self.parts.append(v)
        self.mag += abs(v)
        self.terms += terms
        return v

    @property
    def total(self) -> float:
        return math.fsum(self.parts)

    def value(self, extra_err: float = 0.0) -> SeriesValue:
        total = self.total
        err = self.err + extra_err + 4.0 * _EPS * self.mag
        return SeriesValue(total, err, self.terms, self.method)


def _exact(v: float) -> SeriesValue:
    return SeriesValue(v, 4.0 * _EPS * abs(v), 1)


def _finish(sv: SeriesValue) -> SeriesValue:
    if not math.isfinite(sv.value) or not sv.abs_err <= UNRELIABLE_REL * abs(sv.value):
        return SeriesValue(sv.value, math.inf, sv.terms, sv.method)
    return sv


def _scaled(coef: float, sv: SeriesValue) -> SeriesValue:
    return SeriesValue(coef * sv.value, abs(coef) * sv.abs_err, sv.terms, sv.method)


def _is_half_integer(v: float) -> bool:
    return abs(2.0 * v - round(2.0 * v)) < COLLISION_TOL


def _h_value(h: HSpec, log_x: float) -> SeriesValue:
    """H(x) through its Meijer-G reduction, or directly if that is unavailable."""
    try:
        pref, g, argmap = h_to_g(h)
    except IrrationalCoefficientError:
        return h_series(h, math.exp(log_x))
    return _scaled(pref, g_series(g, math.exp(argmap.log(log_x))))


def _outer(term: Callable[[int], SeriesValue | None], what: str, start: int = 0) -> SeriesValue:
    """Sum term(0), term(1), ... until three consecutive terms are negligible."""
    acc = _Acc()
    ceiling = term_ceiling(OUTER_TERMS)
    small = 0
    k = start
    while True:
        if k - start >= ceiling:
            raise NonConvergenceError(f"{what}: outer series did not converge in {ceiling} terms")
        sv = term(k)
        v = 0.0 if sv is None else acc.add(1.0, sv)
        if abs(v) <= EPS_REL * abs(acc.total) + EPS_ABS:
            small += 1
            if small == 3:
                return acc.value(10.0 * abs(v))
        else:
            small = 0
        k += 1


# ---------------------------------------------------------------------------
# building blocks


def n1(z: float, a: float, nu: float, n: int = 1, m: int = 2) -> SeriesValue:
    """int_0^inf t^nu exp(-a t - z t^(-n/m)) dt as a G^{m+n,0}_{0,m+n} value."""
    if z == 0.0:
        if nu <= -1:
            raise DomainError("z = 0 requires nu > -1")
        return _exact(gamma(nu + 1.0) * a ** -(nu + 1.0))
    h = HSpec.of((), ((0.0, m), (nu + 1.0, n)))
    pref, g, argmap = h_to_g(h)
    sv = g_series(g, math.exp(argmap.log(m * math.log(z) + n * math.log(a))))
    return _scaled(m * pref * a ** -(nu + 1.0), sv)


def _n2_inner(log_x: float, mu: float, frac: Fraction) -> SeriesValue:
    gam = float(frac)
    h = HSpec(2, 0, 1, 2, ((mu + 2.0, gam),), ((0.0, 1.0), (mu + 1.0, gam)))
    return _h_value(h, log_x)


def n2(z: float, d: float, a: float, nu: float, n: int = 1, m: int = 2) -> SeriesValue:
    """int_0^d t^nu exp(-a t - z t^(-n/m)) dt as a series of G^{.,0}_{.,.} values."""
    frac = Fraction(n, m)
    gam = float(frac)
    if z == 0.0:
        if nu <= -1:
            raise DomainError("z = 0 requires nu > -1")

        def term(r):
            c = d ** (nu + 1.0) * (-a * d) ** r / math.factorial(r)
            return _exact(c / (nu + r + 1.0))
        return _outer(term, "N2")
    log_x = math.log(z) - gam * math.log(d)
    lead = d ** (nu + 1.0)

    def term(r):
        coef = lead * (-a * d) ** r / math.factorial(r)
        if coef == 0.0:
            return None
        return _scaled(coef, _n2_inner(log_x, nu + r, frac))
    return _outer(term, "N2")


def _upper_tail(z: float, lo: float, mu: float) -> SeriesValue:
    """int_lo^inf y^mu exp(-y - z y^-1/2) dy by expanding the Coulomb factor."""
    def term(l):
        return _exact((-z) ** l / math.factorial(l) * upper_incomplete_gamma(mu + 1.0 - 0.5 * l, lo))
    return _outer(term, "tail")


# ---------------------------------------------------------------------------
# J1 - J4


def _j1_generic(z: float, nu: float) -> SeriesValue:
    x = 0.25 * z * z
    acc = _Acc()
    acc.add(gamma(1.0 + nu), hyp((), (0.5, -nu), -x))
    acc.add(-2.0 * gamma(nu + 0.5) * math.sqrt(x), hyp((), (1.5, 0.5 - nu), -x))
    coef = gamma(-1.0 - nu) * gamma(-0.5 - nu) / math.sqrt(math.pi) * x ** (1.0 + nu)
    acc.add(coef, hyp((), (nu + 2.0, nu + 1.5), -x))
    return acc.value()


def j1_closed(z: float, nu: float) -> SeriesValue:
    """J1(z, nu) = int_0^inf y^nu exp(-y - z / sqrt(y)) dy."""
    q = NonResonant(z, nu)
    z, nu = q.z, q.nu
    if z == 0.0:
        return _exact(gamma(1.0 + nu))
    if not _is_half_integer(nu):
        sv = _j1_generic(z, nu)
        if sv.abs_err <= GENERIC_REL * abs(sv.value):
            return sv
    return _finish(n1(z, 1.0, nu, 1, 2))


def j2_closed(z: float, d: float, nu: float) -> SeriesValue:
    """J2(z, d, nu): the J1 integral cut off at y = d."""
    q = CutOff(z, d, nu)
    z, d, nu = q.z, q.d, q.nu
    if d < COMPLEMENT_MIN:
        return _finish(n2(z, d, 1.0, nu, 1, 2))
    acc = _Acc()
    acc.add(1.0, j1_closed(z, nu))
    acc.add(-1.0, _upper_tail(z, d, nu))
    comp = acc.value()
    # the r-series needs ~e d terms; skip it whenever the complement holds up
    if d > CUTOFF_SWITCH or comp.abs_err <= GENERIC_REL * abs(comp.value):
        return _finish(comp)
    series = n2(z, d, 1.0, nu, 1, 2)
    return _finish(series if series.abs_err <= comp.abs_err else comp)


def j3_closed(z: float, t: float, nu: int) -> SeriesValue:
    """J3(z, t, nu) with the screened Coulomb factor exp(-z (y + t)^-1/2)."""
    q = Screened(z, t, nu)
    z, t, nu = q.z, q.t, q.nu
    if z == 0.0:
        return _exact(gamma(nu + 1.0))
    if t == 0.0:
        return j1_closed(z, nu)
    acc = _Acc()
    if t > SCREEN_SWITCH:
        # (u - t)^nu expanded over the tail u > t
        for r in range(nu + 1):
            coef = math.comb(nu, r) * (-t) ** r * math.exp(t)
            acc.add(coef, _upper_tail(z, t, nu - r))
        return _finish(acc.value())
    z1 = z / math.sqrt(t)
    lead = t ** (nu + 1) * math.exp(t)
    for r in range(nu + 1):
        coef = lead * math.comb(nu, r) * (-1) ** r
        acc.add(coef, n1(z1, t, nu - r, 1, 2))
        acc.add(-coef, n2(z1, 1.0, t, nu - r, 1, 2))
    return _finish(acc.value())


def j4_closed(z: float, delta: float, b: float, nu: float) -> SeriesValue:
    """J4(z, delta, b, nu) with the depletion factor exp(-b y^delta)."""
    q = Depleted(z, delta, b, nu)
    z, delta, b, nu = q.z, q.delta, q.b, q.nu
    if b == 0.0:
        return j1_closed(z, nu)
    if abs(delta - 1.0) < 1e-12:
        s = 1.0 + b
        return _scaled(s ** -(nu + 1.0), j1_closed(z * math.sqrt(s), nu))
    if delta < 1.0:
        def term(k):
            coef = (-b) ** k / math.factorial(k)
            if coef == 0.0:
                return None
            return _scaled(coef, j1_closed(z, nu + k * delta))
        return _finish(_outer(term, "J4"))

    # delta > 1: expand exp(-y) instead; each piece is an H-function
    log_b = math.log(b)
    log_x = math.log(z) + log_b / (2.0 * delta) if z > 0 else None
    half = 1.0 / (2.0 * delta)

    def term(k):
        mu = nu + k
        coef = (-1) ** k / math.factorial(k) / delta * math.exp(-(mu + 1.0) / delta * log_b)
        if z == 0.0:
            return _exact(coef * gamma((mu + 1.0) / delta))
        h = HSpec.of((), ((0.0, 1.0), ((mu + 1.0) / delta, half)))
        return _scaled(coef, h_series(h, math.exp(log_x)))
    return _finish(_outer(term, "J4"))


# ---------------------------------------------------------------------------
# resonant rate


def resonant_peak(q: float, a: float, n: int, m: int) -> float:
    """a * t_peak, where t_peak maximizes exp(-a t - q t^(-n/m))."""
    if q == 0.0:
        return 0.0
    t_peak = (q * n / (m * a)) ** (m / (m + n))
    return a * t_peak


def resonant_closed(q: float, a: float, b: float, g: float, nu: int, n: int = 1, m: int = 2) -> SeriesValue:
    """Resonant rate by expanding the Lorentzian around t = b.

    The inner moments grow like (2k)!, so the outer series is asymptotic; it
    is truncated at its smallest block, whose size becomes abs_err, unless
    the blocks die off first.
    """
    query = Resonant(q, a, b, g, nu, n, m)
    q, a, b, g, nu, n, m = (query.q, query.a, query.b, query.g, query.nu, query.n, query.m)
    nu_star = resonant_peak(q, a, n, m)
    ratio = (b - nu_star / a) ** 2 / (g * g)
    if not ratio < 1.0:
        raise DivergenceError(
            f"validity condition (b - nu*/a)^2 / g^2 < 1 fails: {ratio:.6g} (nu* = {nu_star:.6g})"
        )
    cache: dict[int, SeriesValue] = {}

    def moment(k1: int) -> SeriesValue:
        if k1 not in cache:
            cache[k1] = n1(q, a, nu + k1, n, m)
        return cache[k1]

    g2 = g * g
    ceiling = term_ceiling(OUTER_TERMS)
    blocks: list[SeriesValue] = []
    best = None
    small = 0
    total = 0.0
    for k in range(ceiling):
        acc = _Acc()
        lead = (-1) ** k / g2 ** (k + 1)
        for k1 in range(2 * k + 1):
            coef = lead * math.comb(2 * k, k1) * (-1) ** k1 * b ** (2 * k - k1)
            if coef != 0.0:
                acc.add(coef, moment(k1))
        blk = acc.value()
        blocks.append(blk)
        size = abs(blk.value)
        total += blk.value
        if best is None or size < abs(blocks[best].value):
            best = k
        if size <= EPS_REL * abs(total) + EPS_ABS:
            small += 1
            if small == 3:
                out = _Acc()
                for sv in blocks:
                    out.add(1.0, sv)
                return _finish(out.value(10.0 * size))
        else:
            small = 0
        if k - best >= 3:
            break
    # asymptotic: stop just before the smallest block
    out = _Acc()
    for sv in blocks[:best]:
        out.add(1.0, sv)
    return _finish(out.value(abs(blocks[best].value) + blocks[best].abs_err))


# ---------------------------------------------------------------------------
# general integrals


def rate_general(z: float, p: float, rho: float, n: int, m: int) -> SeriesValue:
    """p * int_0^inf exp(-p t) t^(-n rho) exp(-z t^(-n/m)) dt."""
    query = GeneralMB(z, p, rho, n, m)
    z, p, rho, n, m = query.z, query.p, query.rho, query.n, query.m
    if z == 0.0:
        return _exact(p ** (n * rho) * gamma(1.0 - n * rho))
    return _finish(_scaled(p, n1(z, p, -n * rho, n, m)))


def rate_general_h(z: float, p: float, rho: float, gamma_: float) -> SeriesValue:
    """int_0^inf t^(rho - 1) exp(-p t - z t^-gamma) dt for rational gamma."""
    query = GeneralH(z, p, rho, gamma_)
    z, p, rho, gam = query.z, query.p, query.rho, query.gamma
    if z == 0.0:
        return _exact(gamma(rho) * p ** -rho)
    frac = as_small_fraction(gam, name="gamma")
    if frac.numerator <= frac.denominator:
        # H[p z^(1/gamma) | (0, 1/gamma), (rho, 1)] / (gamma p^rho)
        h = HSpec.of((), ((0.0, float(1 / frac)), (rho, 1.0)))
        sv = _h_value(h, math.log(p) + math.log(z) / gam)
        coef = 1.0 / (gam * p ** rho)
    else:
        h = HSpec.of((), ((0.0, 1.0), (rho, gam)))
        sv = _h_value(h, math.log(z) + gam * math.log(p))
        coef = p ** -rho
    return _finish(_scaled(coef, sv))


# ---------------------------------------------------------------------------
# dispatch and asymptotics


def closed(query: RateQuery) -> SeriesValue:
    if isinstance(query, NonResonant):
        return j1_closed(query.z, query.nu)
    if isinstance(query, CutOff):
        return j2_closed(query.z, query.d, query.nu)
    if isinstance(query, Screened):
        return j3_closed(query.z, query.t, query.nu)
    if isinstance(query, Depleted):
        return j4_closed(query.z, query.delta, query.b, query.nu)
    if isinstance(query, Resonant):
        return resonant_closed(query.q, query.a, query.b, query.g, query.nu, query.n, query.m)
    if isinstance(query, GeneralMB):
        return rate_general(query.z, query.p, query.rho, query.n, query.m)
    if isinstance(query, GeneralH):
        return rate_general_h(query.z, query.p, query.rho, query.gamma)
    raise DomainError(f"unknown query type {type(query).__name__}")


ASYMPTOTIC_FAMILIES = ("nonresonant", "cutoff", "screened", "depleted")


def asym(query: RateQuery) -> SeriesValue:
    """Leading large-z behaviour; meaningless for small z."""
    if query.family not in ASYMPTOTIC_FAMILIES:
        raise DomainError(f"no asymptotic form for family {query.family!r}")
    z = query.z
    if not z > 0.0:
        raise DomainError("asymptotic form needs z > 0")
    x = 0.25 * z * z
    x3 = x ** (1.0 / 3.0)
    k = 2.0 * math.sqrt(math.pi / 3.0)
    if isinstance(query, NonResonant):
        v = k * x ** ((2.0 * query.nu + 1.0) / 6.0) * math.exp(-3.0 * x3)
    elif isinstance(query, CutOff):
        d = query.d
        w = x / d
        v = d ** (query.nu + 1.0) / math.sqrt(w) * math.exp(-d - 2.0 * math.sqrt(w))
    elif isinstance(query, Screened):
        base = x3 - query.t
        v = k * x ** (1.0 / 6.0) * base ** query.nu * math.exp(query.t - 3.0 * x3)
    else:
        v = k * x ** ((2.0 * query.nu + 1.0) / 6.0) * math.exp(
            -3.0 * x3 - query.b * x ** (query.delta / 3.0)
        )
    return SeriesValue(v, math.inf, 0, "asymptotic")


def cancellation_wall(
    make: Callable[[float], RateQuery], z_lo: float = 1.0, z_max: float = 1e4, rtol: float = 1e-3,
) -> float:
    """Smallest z (to relative ``rtol``) where the closed form turns unreliable.

    ``make(z)`` builds the query at argument z.  Returns ``inf`` when the
    closed form stays reliable up to ``z_max``.
    """
    def bad(z):
        try:
            return not closed(make(z)).reliable
        except NonConvergenceError:
            return True

    if bad(z_lo):
        return z_lo
    hi = 2.0 * z_lo
    lo = z_lo
    while not bad(hi):
        lo = hi
        hi *= 2.0
        if hi > z_max:
            return math.inf
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if bad(mid):
            hi = mid
        else:
            lo = mid
    return hi
