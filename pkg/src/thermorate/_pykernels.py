"""Pure-Python hot kernels.

Reference implementation of the routines in ``_ckernels.pyx``.  Both modules
expose the same functions with the same operation order; results agree to
within an ulp or two (libm may fuse sin/cos in the compiled build).
"""

from __future__ import annotations

import math

_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.91893853320467274178
_LOG_PI = 1.1447298858494002

# log((n-1)!) for n = 1..23 from exactly representable factorials
_LOG_FACT = tuple(math.log(float(math.factorial(n - 1))) for n in range(1, 24))

_SPLITTER = 134217729.0  # 2**27 + 1
_OVERFLOW = 1e290


def _cround(v: float) -> float:
    # C round(): halves away from zero
    return math.copysign(math.floor(abs(v) + 0.5), v)


def sinpi(x: float) -> float:
    r = x - 2.0 * _cround(x / 2.0)  # exact; r in [-1, 1]
    if r > 0.5:
        r = 1.0 - r
    elif r < -0.5:
        r = -1.0 - r
    return math.sin(math.pi * r)


def _lanczos_lg(x: float) -> float:
    # valid for x >= 0.5
    xm = x - 1.0
    acc = _LANCZOS[0]
    for i in range(1, 9):
        acc += _LANCZOS[i] / (xm + i)
    t = xm + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (xm + 0.5) * math.log(t) - t + math.log(acc)


def ln_gamma(x: float) -> tuple[float, int]:
    """Return ``(log|Gamma(x)|, sign)``; ``(inf, 0)`` at a pole."""
    if x == math.floor(x):
        if x <= 0.0:
            return math.inf, 0
        if x <= 23.0:
            return _LOG_FACT[int(x) - 1], 1
    if x >= 0.5:
        return _lanczos_lg(x), 1
    s = sinpi(x)
    if s == 0.0:
        return math.inf, 0
    return _LOG_PI - math.log(abs(s)) - _lanczos_lg(1.0 - x), (1 if s > 0.0 else -1)


def _digamma_pos(x: float) -> float:
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    tail = inv2 * (1.0 / 12 - inv2 * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 * (
        1.0 / 240 - inv2 * (1.0 / 132 - inv2 * (691.0 / 32760 - inv2 / 12))))))
    return acc + math.log(x) - 0.5 * inv - tail


def digamma(x: float) -> float:
    """psi(x); ``nan`` at a pole."""
    if x <= 0.0 and x == math.floor(x):
        return math.nan
    if x >= 0.5:
        return _digamma_pos(x)
    # psi(x) = psi(1 - x) - pi cot(pi x)
    r = x - _cround(x)
    return _digamma_pos(1.0 - x) - math.pi * math.cos(math.pi * r) / math.sin(math.pi * r)


# double-double helpers ------------------------------------------------------

def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_add(ah, al, bh, bl):
    s, e = _two_sum(ah, bh)
    t, f = _two_sum(al, bl)
    e += t
    s, e = _quick_two_sum(s, e)
    e += f
    return _quick_two_sum(s, e)


def _dd_mul(ah, al, bh, bl):
    p, e = _two_prod(ah, bh)
    e += ah * bl + al * bh
    return _quick_two_sum(p, e)


def _dd_div(ah, al, bh, bl):
    q1 = ah / bh
    ph, pl = _dd_mul(bh, bl, q1, 0.0)
    rh, rl = _dd_add(ah, al, -ph, -pl)
    q2 = rh / bh
    ph, pl = _dd_mul(bh, bl, q2, 0.0)
    rh, rl = _dd_add(rh, rl, -ph, -pl)
    q3 = rh / bh
    q1, q2 = _quick_two_sum(q1, q2)
    return _dd_add(q1, q2, q3, 0.0)


def pfq_sum(upper, lower, x, eps_rel, eps_abs, max_terms):
    """Sum a pFq power series with double-double term recursion.

    Returns ``(value, neglected, max_term, terms, status)`` where ``neglected``
    is |first term not summed| and status is 0 (converged), 1 (term ceiling)
    or 2 (term overflow).
    """
    if x == 0.0:
        return 1.0, 0.0, 1.0, 1, 0
    th, tl = 1.0, 0.0
    sh, sl = 1.0, 0.0
    max_term = 1.0
    small = 0
    terms = 1
    k = 0
    while True:
        nh, nl = x, 0.0
        for a in upper:
            ah, al = _two_sum(a, float(k))
            nh, nl = _dd_mul(nh, nl, ah, al)
        dh, dl = float(k + 1), 0.0
        for b in lower:
            bh, bl = _two_sum(b, float(k))
            dh, dl = _dd_mul(dh, dl, bh, bl)
        rh, rl = _dd_div(nh, nl, dh, dl)
        th, tl = _dd_mul(th, tl, rh, rl)
        k += 1
        mag = abs(th)
        if small == 3:
            return sh + sl, mag, max_term, terms, 0
        if terms >= max_terms:
            return sh + sl, mag, max_term, terms, 1
        if mag > _OVERFLOW:
            return sh + sl, mag, max_term, terms, 2
        sh, sl = _dd_add(sh, sl, th, tl)
        terms += 1
        if mag > max_term:
            max_term = mag
        if mag <= eps_rel * abs(sh) + eps_abs:
            small += 1
        else:
            small = 0
