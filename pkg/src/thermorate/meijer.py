"""Meijer G and Fox H functions by residue summation.

The Mellin-Barnes integrand is a ratio of gamma products times ``x^-s``.
For the classes used by the rate formulas (no right-hand poles) the integral
equals the sum of residues at the left poles.  Poles come in ladders, one per
numerator gamma factor; where two ladders meet the pole is double and the
residue picks up digamma and ``log x`` terms.  Triple collisions are refused.

Terms are summed in double precision when that is safe.  When the rounding
estimate says cancellation has eaten too many digits the same residues are
recomputed with mpmath at a precision sized to the observed dynamic range.
Past ``MAX_DPS`` digits the value comes back with the ``abs_err = inf``
sentinel.

``g_contour`` integrates along a vertical line instead and serves as an
independent check.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple, Sequence

import numpy as np
from mpmath.ctx_mp import MPContext
from scipy.special import loggamma

from . import _gk, kernels
from ._config import term_ceiling
from .errors import (
    ContourPlacementError,
    DomainError,
    IrrationalCoefficientError,
    NonConvergenceError,
    UnsupportedMultiplicityError,
)
from .pfq import EPS_ABS, EPS_REL, SeriesValue
from .special import log_factorial

COLLISION_TOL = 1e-10
MAX_TERMS = 10_000
MAX_DPS = 60
REL_TARGET = 1e-13
MAX_DENOMINATOR = 12
_EPS = 2.0 ** -52


# ---------------------------------------------------------------------------
# specs


@dataclass(frozen=True)
class GSpec:
    """Orders and parameters of G^{m,n}_{p,q}(x | a; b)."""

    m: int
    n: int
    p: int
    q: int
    a: tuple[float, ...]
    b: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        if min(self.m, self.n, self.p, self.q) < 0:
            raise DomainError("orders must be nonnegative")
        if len(self.a) != self.p or len(self.b) != self.q:
            raise DomainError(f"expected {self.p} upper and {self.q} lower parameters")
        if self.m > self.q or self.n > self.p:
            raise DomainError("need m <= q and n <= p")

    @classmethod
    def of(cls, a: Sequence[float], b: Sequence[float]) -> GSpec:
        """G^{q,0}_{p,q}: every lower parameter feeds a numerator gamma."""
        return cls(len(b), 0, len(a), len(b), tuple(a), tuple(b))


@dataclass(frozen=True)
class HSpec:
    """Orders and (parameter, coefficient) pairs of H^{m,n}_{p,q}."""

    m: int
    n: int
    p: int
    q: int
    a: tuple[tuple[float, float], ...]
    b: tuple[tuple[float, float], ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple((float(c), float(k)) for c, k in self.a))
        object.__setattr__(self, "b", tuple((float(c), float(k)) for c, k in self.b))
        if len(self.a) != self.p or len(self.b) != self.q:
            raise DomainError(f"expected {self.p} upper and {self.q} lower pairs")
        if self.m > self.q or self.n > self.p:
            raise DomainError("need m <= q and n <= p")
        for _, k in self.a + self.b:
            if not k > 0:
                raise DomainError("H-function coefficients must be positive")

    @classmethod
    def of(cls, a, b) -> HSpec:
        return cls(len(b), 0, len(a), len(b), tuple(a), tuple(b))


class _Integrand(NamedTuple):
    # each factor is (c, k) meaning Gamma(c + k s)
    num: tuple[tuple[float, float], ...]
    num_right: tuple[tuple[float, float], ...]
    den: tuple[tuple[float, float], ...]

def _from_g(spec: GSpec) -> _Integrand:
    return _Integrand(
        tuple((b, 1.0) for b in spec.b[: spec.m]),
        tuple((1.0 - a, -1.0) for a in spec.a[: spec.n]),
        tuple((1.0 - b, -1.0) for b in spec.b[spec.m:]) + tuple((a, 1.0) for a in spec.a[spec.n:]),
    )


def _from_h(spec: HSpec) -> _Integrand:
    return _Integrand(
        tuple(spec.b[: spec.m]),
        tuple((1.0 - c, -k) for c, k in spec.a[: spec.n]),
        tuple((1.0 - c, -k) for c, k in spec.b[spec.m:]) + tuple(spec.a[spec.n:]),
    )


# ---------------------------------------------------------------------------
# poles


@dataclass(frozen=True)
class Pole:
    """A left pole: ``source`` lists (factor, step) pairs of the colliding
    numerator ladders, ``zeros`` the denominator zeros sitting on it."""

    location: float
    order: int
    source: tuple[tuple[int, int], ...]
    zeros: tuple[tuple[int, int], ...] = ()


class PoleSet(tuple):
    """Poles ordered by decreasing location.

    ``pins`` records, for every collision found, which factor parameter was
    tied to which: ``(target, ref, j_ref, j_target)`` over the factor list
    num + den.  Extended-precision residues apply the pins so that every
    collision treated as exact really is exact.
    """

    pins: tuple = ()

    @property
    def locations(self) -> list[float]:
        return [p.location for p in self]

    @property
    def orders(self) -> list[int]:
        return [p.order for p in self]


def _ladder(c: float, k: float, lo: float, hi: float = math.inf) -> Iterator[tuple[int, float]]:
    """Steps j where c + k s = -j has its root s in (lo, hi]."""
    if k > 0:
        start = 0
        if hi < math.inf:
            start = max(0, math.ceil(-hi * k - c - 1e-9))
        j = start
        while True:
            s = -(c + j) / k
            if s <= lo:
                return
            if s <= hi:
                yield j, s + 0.0
            j += 1
    else:
        j = 0
        while True:
            s = (c + j) / -k
            if s > hi:
                return
            if s > lo:
                yield j, s + 0.0
            j += 1


def _poles(f: _Integrand, lo: float, hi: float = math.inf) -> PoleSet:
    raw = []
    for idx, (c, k) in enumerate(f.num):
        raw.extend((s, idx, j) for j, s in _ladder(c, k, lo, hi))
    raw.sort(key=lambda r: -r[0])
    clusters: list[list] = []
    for s, idx, j in raw:
        if clusters and clusters[-1][0] - s <= COLLISION_TOL:
            clusters[-1][1].append((idx, j))
        else:
            clusters.append([s, [(idx, j)]])
    if not clusters:
        return PoleSet()
    top = clusters[0][0] + COLLISION_TOL
    zeros = []
    for idx, (c, k) in enumerate(f.den):
        zeros.extend((s, idx, j) for j, s in _ladder(c, k, lo - COLLISION_TOL, top))
    zeros.sort(key=lambda r: -r[0])
    out = []
    pins = []
    pinned = set()
    nn = len(f.num)
    zi = 0
    for s, src in clusters:
        while zi < len(zeros) and zeros[zi][0] > s + COLLISION_TOL:
            zi += 1
        hits = []
        scan = zi
        while scan < len(zeros) and zeros[scan][0] >= s - COLLISION_TOL:
            hits.append((zeros[scan][1], zeros[scan][2]))
            scan += 1
        order = len(src) - len(hits)
        ref, j_ref = src[0]
        for idx, j in src[1:]:
            if idx not in pinned and idx != ref:
                pinned.add(idx)
                pins.append((idx, ref, j_ref, j))
        for idx, j in hits:
            if nn + idx not in pinned:
                pinned.add(nn + idx)
                pins.append((nn + idx, ref, j_ref, j))
        if order <= 0:
            continue
        if order >= 3:
            raise UnsupportedMultiplicityError(
                f"pole of order {order} at s={s!r}; only simple and double poles are supported"
            )
        out.append(Pole(s, order, tuple(src), tuple(hits)))
    ps = PoleSet(out)
    ps.pins = tuple(pins)
    return ps


def _require_left_only(f: _Integrand) -> None:
    if f.num_right:
        raise DomainError("residue series supports n = 0 only; use the contour integral")


def enumerate_poles(spec: GSpec | HSpec, depth: float) -> PoleSet:
    """All poles with location > -depth, tagged simple or double."""
    f = _from_h(spec) if isinstance(spec, HSpec) else _from_g(spec)
    _require_left_only(f)
    if depth < 1:
        raise DomainError("depth must be >= 1")
    return _poles(f, -float(depth))


# ---------------------------------------------------------------------------
# residues


class _Term(NamedTuple):
    value: float
    rounding: float


def _term_double(f: _Integrand, pole: Pole, log_x: float) -> _Term:
    s0 = pole.location
    sing_num = dict(pole.source)
    sing_den = dict(pole.zeros)
    log_mag = -s0 * log_x
    sign = 1
    rel_sum = 0.0
    rel_abs = 0.0
    sens = 0.0
    for idx, (c, k) in enumerate(f.num):
        if idx in sing_num:
            j = sing_num[idx]
            log_mag -= log_factorial(j) + math.log(abs(k))
            if (j & 1) ^ (k < 0):
                sign = -sign
            r = k * kernels.digamma(j + 1.0)
            rel_sum += r
            rel_abs += abs(r)
        else:
            w = c + k * s0
            lg, sg = kernels.ln_gamma(w)
            log_mag += lg
            sign *= sg
            r = k * kernels.digamma(w)
            rel_sum += r
            rel_abs += abs(r)
            sens += abs(r) * _EPS * (abs(c) + abs(k * s0) + 1.0)
    for idx, (c, k) in enumerate(f.den):
        if idx in sing_den:
            j = sing_den[idx]
            log_mag += log_factorial(j) + math.log(abs(k))
            if (j & 1) ^ (k < 0):
                sign = -sign
            r = -k * kernels.digamma(j + 1.0)
            rel_sum += r
            rel_abs += abs(r)
        else:
            w = c + k * s0
            lg, sg = kernels.ln_gamma(w)
            if sg == 0:
                return _Term(0.0, 0.0)
            log_mag -= lg
            sign *= sg
            r = -k * kernels.digamma(w)
            rel_sum += r
            rel_abs += abs(r)
            sens += abs(r) * _EPS * (abs(c) + abs(k * s0) + 1.0)
    sens += abs(log_x) * abs(s0) * _EPS
    base_err = _EPS * (abs(log_mag) + 20.0) + sens
    if log_mag > 709.0:
        return _Term(sign * math.inf, math.inf)
    mag = math.exp(log_mag)
    if pole.order == 1:
        return _Term(sign * mag, mag * base_err)
    factor = rel_sum - log_x
    err = mag * (abs(factor) * base_err + (rel_abs + abs(log_x)) * 4.0 * _EPS + rel_abs * sens)
    return _Term(sign * mag * factor, err)


_local = threading.local()


def _mp(dps: int) -> MPContext:
    ctx = getattr(_local, "ctx", None)
    if ctx is None:
        ctx = _local.ctx = MPContext()
    ctx.dps = dps
    return ctx


def _exact_coeff(ctx: MPContext, k: float):
    frac = Fraction(k).limit_denominator(10_000)
    if abs(float(frac) - k) <= 4.0 * _EPS * abs(k):
        return ctx.mpf(frac.numerator) / frac.denominator
    return ctx.mpf(k)


def _pinned(ctx: MPContext, f: _Integrand, pins) -> tuple[list, list]:
    facs = f.num + f.den
    ks = [_exact_coeff(ctx, k) for _, k in facs]
    cs = [ctx.mpf(c) for c, _ in facs]
    for target, ref, j_ref, j in pins:
        # the singular point of the reference ladder, exactly
        s0 = -(cs[ref] + j_ref) / ks[ref]
        cs[target] = -ks[target] * s0 - j
    return cs, ks


def _term_mp(ctx: MPContext, f: _Integrand, pole: Pole, x, pinned=None):
    nn = len(f.num)
    cs, ks = pinned if pinned is not None else _pinned(ctx, f, ())
    idx0, j0 = pole.source[0]
    s0 = -(cs[idx0] + j0) / ks[idx0]
    sing_num = dict(pole.source)
    sing_den = dict(pole.zeros)
    out = ctx.power(x, -s0)
    order2 = pole.order == 2
    rel = -ctx.log(x) if order2 else 0
    for idx in range(nn):
        kk = ks[idx]
        if idx in sing_num:
            j = sing_num[idx]
            out *= (-1) ** j / (ctx.mpf(math.factorial(j)) * kk)
            if order2:
                rel += kk * (ctx.harmonic(j) - ctx.euler)
        else:
            w = cs[idx] + kk * s0
            out *= ctx.gamma(w)
            if order2:
                rel += kk * ctx.digamma(w)
    for idx in range(len(f.den)):
        kk = ks[nn + idx]
        if idx in sing_den:
            j = sing_den[idx]
            out *= (-1) ** j * ctx.mpf(math.factorial(j)) * kk
            if order2:
                rel -= kk * (ctx.harmonic(j) - ctx.euler)
        else:
            w = cs[nn + idx] + kk * s0
            out *= ctx.rgamma(w)
            if order2:
                rel -= kk * ctx.digamma(w)
    return out * rel if order2 else out


# ---------------------------------------------------------------------------
# series driver


def _growth(f: _Integrand) -> tuple[float, float]:
    mu = sum(k for _, k in f.num) - sum(k for _, k in f.den)
    const = sum(k * math.log(k) for _, k in f.num) - sum(k * math.log(abs(k)) for _, k in f.den)
    return mu, const


def _peak(f: _Integrand, log_x: float) -> tuple[float, float]:
    """Depth where |terms| start to shrink, and the deepest ladder start."""
    mu, const = _growth(f)
    if mu <= 0:
        raise DomainError("residue series diverges for this G/H class (needs q > p)")
    s_peak = math.exp(min((log_x - const) / mu, 700.0))
    offset = max(max(c / k for c, k in f.num), 0.0)
    return s_peak, offset


def _stop_index(values: Sequence[float], poles: PoleSet, safe: float) -> int | None:
    partial = 0.0
    small = 0
    for i, v in enumerate(values):
        partial += v
        if poles[i].location > safe:
            continue
        if abs(v) <= EPS_REL * abs(partial) + EPS_ABS:
            small += 1
            if small == 3:
                return i
        else:
            small = 0
    return None


def _at_zero(f: _Integrand) -> SeriesValue:
    poles = _poles(f, -COLLISION_TOL)
    value = 0.0
    for pole in poles:
        if pole.location > COLLISION_TOL:
            raise DomainError("function diverges at argument 0 (pole right of s = 0)")
        if pole.order == 2:
            raise DomainError("function diverges logarithmically at argument 0")
        value += _term_double(f, pole, 0.0).value
    return SeriesValue(value, 4.0 * _EPS * abs(value), 1)


def _residue_series(f: _Integrand, x: float, depth: float | None = None) -> SeriesValue:
    _require_left_only(f)
    x = float(x)
    if not x >= 0.0 or not math.isfinite(x):
        raise DomainError(f"argument must be finite and >= 0, got {x!r}")
    if not f.num:
        return SeriesValue(0.0, 0.0, 0)
    if x == 0.0:
        return _at_zero(f)
    log_x = math.log(x)
    s_peak, offset = _peak(f, log_x)
    safe = -(offset + s_peak)
    reach = offset + 1.5 * s_peak + 4.0
    if depth is not None:
        reach = max(reach, float(depth) + 1.0)
    ceiling = term_ceiling(MAX_TERMS)
    while True:
        poles = _poles(f, -reach)
        if len(poles) > ceiling:
            raise NonConvergenceError(
                f"residue series needs more than {ceiling} poles (x={x!r})"
            )
        terms = [_term_double(f, p, log_x) for p in poles]
        values = [t.value for t in terms]
        stop = _stop_index(values, poles, safe)
        if stop is not None and stop + 1 < len(poles):
            break
        reach = 1.5 * reach + 4.0

    if depth is not None:
        keep = sum(1 for p in poles if p.location > -depth)
        tail = sum(abs(v) for v in values[keep: stop + 2])
        neglected = 2.0 * tail
    else:
        keep = stop + 1
        neglected = 10.0 * abs(values[keep])
    used = poles[:keep]
    method = "double_pole_series" if any(p.order == 2 for p in used) else "series"
    total = math.fsum(values[:keep])
    rounding = sum(t.rounding for t in terms[:keep])
    if rounding <= REL_TARGET * abs(total) and math.isfinite(total):
        return SeriesValue(total, neglected + rounding, keep, method)

    mags = [abs(v) for v in values[:keep]]
    dps = 30
    scale = max(mags) if mags else 0.0
    if abs(total) > 0 and math.isfinite(scale):
        dps = max(dps, int(math.log10(scale / abs(total))) + 20)
    while True:
        if dps > MAX_DPS:
            return SeriesValue(total, math.inf, keep, method)
        ctx = _mp(dps)
        xm = ctx.mpf(x)
        pinned = _pinned(ctx, f, poles.pins)
        mp_terms = [_term_mp(ctx, f, p, xm, pinned) for p in poles]
        if depth is None:
            # the stop index is re-checked at full precision
            partial = ctx.mpf(0)
            small = 0
            keep = None
            for i, v in enumerate(mp_terms):
                partial += v
                if poles[i].location > safe:
                    continue
                if abs(v) <= EPS_REL * abs(partial) + EPS_ABS:
                    small += 1
                    if small == 3:
                        keep = i + 1
                        break
                else:
                    small = 0
            if keep is None or keep >= len(poles):
                keep = len(poles) - 1
            neglected = 10.0 * float(abs(mp_terms[keep]))
        mp_total = ctx.fsum(mp_terms[:keep])
        big = max(abs(v) for v in mp_terms[:keep])
        total = float(mp_total)
        lost = float(big / abs(mp_total)) if mp_total != 0 else math.inf
        if lost * 10.0 ** (-dps + 3) <= 1e-16:
            used = poles[:keep]
            method = "double_pole_series" if any(p.order == 2 for p in used) else "series"
            err = neglected + 4.0 * _EPS * abs(total)
            return SeriesValue(total, err, keep, method)
        if not math.isfinite(lost):
            return SeriesValue(total, math.inf, keep, method)
        dps = int(math.log10(lost)) + 22 if lost > 1 else dps + 10
        if dps <= ctx.dps:
            dps = ctx.dps + 10


def g_series(spec: GSpec, x: float, depth: float | None = None) -> SeriesValue:
    """G^{m,0}_{p,q}(x) as a sum of left residues.

    Without ``depth`` the ladders are followed until three consecutive terms
    are negligible.  With ``depth`` every pole right of ``-depth`` is summed
    and ``abs_err`` bounds the remaining tail.
    """
    return _residue_series(_from_g(spec), x, depth)


def h_series(spec: HSpec, x: float, depth: float | None = None) -> SeriesValue:
    """Fox H^{m,0}_{p,q}(x) by the same residue machinery (real coefficients)."""
    return _residue_series(_from_h(spec), x, depth)


# ---------------------------------------------------------------------------
# contour integral


def _contour(f: _Integrand, x: float, tol: float = 1e-13) -> SeriesValue:
    x = float(x)
    if not x > 0.0:
        raise DomainError("contour integral needs x > 0")
    left = max((-c / k for c, k in f.num), default=-math.inf)
    right = min(((c / -k) for c, k in f.num_right), default=math.inf)
    c0 = left + 0.5 if f.num else 0.0
    if c0 >= right:
        if left >= right:
            raise ContourPlacementError("left and right pole sets overlap")
        c0 = 0.5 * (left + right)
    decay = 0.5 * math.pi * (
        sum(abs(k) for _, k in f.num + f.num_right) - sum(abs(k) for _, k in f.den)
    )
    if decay <= 0.0:
        raise ContourPlacementError("integrand does not decay along the vertical line")
    log_x = math.log(x)
    num = np.array(f.num + f.num_right, dtype=float).reshape(-1, 2)
    den = np.array(f.den, dtype=float).reshape(-1, 2)

    def log_phi(t):
        s = c0 + 1j * t
        acc = -s * log_x
        for c, k in num:
            acc = acc + loggamma(c + k * s)
        for c, k in den:
            acc = acc - loggamma(c + k * s)
        return acc

    def integrand(t):
        return np.real(np.exp(log_phi(t))) / math.pi

    def envelope(t):
        return float(np.exp(np.real(log_phi(np.array([t], dtype=float))))[0])

    env0 = envelope(0.0)
    peak = env0
    T = 4.0
    while True:
        e = envelope(T)
        peak = max(peak, e)
        if e < 1e-16 * peak or e == 0.0:
            break
        T *= 1.5
        if T > 1e5:
            raise ContourPlacementError("integrand envelope does not fall off")
    width = min(1.0, math.pi / max(abs(log_x), 1e-300))
    npan = max(1, math.ceil(T / width))
    edges = np.linspace(0.0, T, npan + 1)
    panels = [_gk.Panel(integrand, float(a), float(b)) for a, b in zip(edges[:-1], edges[1:])]
    # the value may be far smaller than the integrand: also allow an absolute floor
    scale = peak * T
    val, err, evals, _ = _gk.integrate(panels, tol, tol_abs=1e-16 * scale, initial_split=1)
    trunc = envelope(T) / (decay * math.pi)
    return SeriesValue(val, err + trunc, evals, "contour")


def g_contour(spec: GSpec, x: float) -> SeriesValue:
    """G(x) by direct integration along Re s = c, right of every left pole."""
    return _contour(_from_g(spec), x)


def h_contour(spec: HSpec, x: float) -> SeriesValue:
    return _contour(_from_h(spec), x)


# ---------------------------------------------------------------------------
# H -> G reduction


@dataclass(frozen=True)
class ArgMap:
    """z -> z**power / divisor."""

    power: int
    divisor: float

    def __call__(self, z: float) -> float:
        return z ** self.power / self.divisor

    def log(self, log_z: float) -> float:
        return self.power * log_z - math.log(self.divisor)


def _rational(k: float) -> Fraction:
    frac = Fraction(k).limit_denominator(MAX_DENOMINATOR)
    if abs(float(frac) - k) > 1e-12 * max(1.0, k):
        raise IrrationalCoefficientError(f"coefficient {k!r} is not a small rational")
    return frac


def h_to_g(h: HSpec) -> tuple[float, GSpec, ArgMap]:
    """Rewrite H^{q,0}_{p,q} with rational coefficients as a Meijer G.

    Substituting s = L s' (L the common denominator) makes every coefficient
    an integer k, and the Gauss multiplication formula splits each
    Gamma(c + k s') into k unit-coefficient gammas.  Returns
    ``(prefactor, gspec, argmap)`` with H(z) = prefactor * G(argmap(z)).
    """
    if h.n != 0 or h.m != h.q:
        raise DomainError("only H^{q,0}_{p,q} can be reduced")
    fracs = [_rational(k) for _, k in h.a + h.b]
    L = 1
    for fr in fracs:
        L = L * fr.denominator // math.gcd(L, fr.denominator)
    if L > MAX_DENOMINATOR:
        raise IrrationalCoefficientError(f"common denominator {L} exceeds {MAX_DENOMINATOR}")
    log_pref = math.log(L)
    log_div = 0.0
    lower: list[float] = []
    upper: list[float] = []
    for sign, pairs, sink in ((1, h.b, lower), (-1, h.a, upper)):
        for c, k in pairs:
            kk = int(_rational(k) * L)
            log_pref += sign * (0.5 * (1 - kk) * math.log(2 * math.pi) + (c - 0.5) * math.log(kk))
            log_div += sign * kk * math.log(kk)
            sink.extend((c + i) / kk for i in range(kk))
    spec = GSpec(len(lower), 0, len(upper), len(lower), tuple(upper), tuple(lower))
    return math.exp(log_pref), spec, ArgMap(L, math.exp(log_div))
