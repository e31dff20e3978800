# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; mirrors ``_pykernels`` function for function."""

from libc.math cimport log, sin, cos, floor, fabs, round as cround, INFINITY, NAN, M_PI

cdef double _LANCZOS_G = 7.0
cdef double[9] _LANCZOS = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
]
cdef double _HALF_LOG_2PI = 0.91893853320467274178
cdef double _LOG_PI = 1.1447298858494002
cdef double _SPLITTER = 134217729.0
cdef double _OVERFLOW = 1e290
cdef int _MAXPAR = 32

import math as _math
cdef double[23] _LOG_FACT
for _n in range(1, 24):
    _LOG_FACT[_n - 1] = _math.log(float(_math.factorial(_n - 1)))


cdef inline double c_sinpi(double x) nogil:
    cdef double r = x - 2.0 * cround(x / 2.0)
    if r > 0.5:
        r = 1.0 - r
    elif r < -0.5:
        r = -1.0 - r
    return sin(M_PI * r)


cdef inline double _lanczos_lg(double x) nogil:
    cdef double xm = x - 1.0
    cdef double acc = _LANCZOS[0]
    cdef int i
    for i in range(1, 9):
        acc += _LANCZOS[i] / (xm + i)
    cdef double t = xm + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (xm + 0.5) * log(t) - t + log(acc)


def sinpi(double x):
    return c_sinpi(x)


def ln_gamma(double x):
    """Return ``(log|Gamma(x)|, sign)``; ``(inf, 0)`` at a pole."""
    cdef double s
    if x == floor(x):
        if x <= 0.0:
            return INFINITY, 0
        if x <= 23.0:
            return _LOG_FACT[<int>x - 1], 1
    if x >= 0.5:
        return _lanczos_lg(x), 1
    s = c_sinpi(x)
    if s == 0.0:
        return INFINITY, 0
    return _LOG_PI - log(fabs(s)) - _lanczos_lg(1.0 - x), (1 if s > 0.0 else -1)


cdef inline double _digamma_pos(double x) nogil:
    cdef double acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    cdef double inv = 1.0 / x
    cdef double inv2 = inv * inv
    cdef double tail = inv2 * (1.0 / 12 - inv2 * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 * (
        1.0 / 240 - inv2 * (1.0 / 132 - inv2 * (691.0 / 32760 - inv2 / 12))))))
    return acc + log(x) - 0.5 * inv - tail


def digamma(double x):
    """psi(x); ``nan`` at a pole."""
    cdef double r
    if x <= 0.0 and x == floor(x):
        return NAN
    if x >= 0.5:
        return _digamma_pos(x)
    r = x - cround(x)
    return _digamma_pos(1.0 - x) - M_PI * cos(M_PI * r) / sin(M_PI * r)


# double-double arithmetic; requires strict IEEE evaluation (no fp-contract)

cdef inline void _two_sum(double a, double b, double* s, double* e) nogil:
    cdef double ss = a + b
    cdef double bb = ss - a
    s[0] = ss
    e[0] = (a - (ss - bb)) + (b - bb)


cdef inline void _quick_two_sum(double a, double b, double* s, double* e) nogil:
    cdef double ss = a + b
    s[0] = ss
    e[0] = b - (ss - a)


cdef inline void _two_prod(double a, double b, double* p, double* e) nogil:
    cdef double pp = a * b
    cdef double c = _SPLITTER * a
    cdef double ah = c - (c - a)
    cdef double al = a - ah
    c = _SPLITTER * b
    cdef double bh = c - (c - b)
    cdef double bl = b - bh
    p[0] = pp
    e[0] = ((ah * bh - pp) + ah * bl + al * bh) + al * bl


cdef inline void _dd_add(double ah, double al, double bh, double bl, double* rh, double* rl) nogil:
    cdef double s, e, t, f
    _two_sum(ah, bh, &s, &e)
    _two_sum(al, bl, &t, &f)
    e += t
    _quick_two_sum(s, e, &s, &e)
    e += f
    _quick_two_sum(s, e, rh, rl)


cdef inline void _dd_mul(double ah, double al, double bh, double bl, double* rh, double* rl) nogil:
    cdef double p, e
    _two_prod(ah, bh, &p, &e)
    e += ah * bl + al * bh
    _quick_two_sum(p, e, rh, rl)


cdef inline void _dd_div(double ah, double al, double bh, double bl, double* rh, double* rl) nogil:
    cdef double q1 = ah / bh
    cdef double ph, pl, xh, xl, q2, q3
    _dd_mul(bh, bl, q1, 0.0, &ph, &pl)
    _dd_add(ah, al, -ph, -pl, &xh, &xl)
    q2 = xh / bh
    _dd_mul(bh, bl, q2, 0.0, &ph, &pl)
    _dd_add(xh, xl, -ph, -pl, &xh, &xl)
    q3 = xh / bh
    _quick_two_sum(q1, q2, &q1, &q2)
    _dd_add(q1, q2, q3, 0.0, rh, rl)


def pfq_sum(upper, lower, double x, double eps_rel, double eps_abs, long max_terms):
    """Sum a pFq power series with double-double term recursion.

    Returns ``(value, neglected, max_term, terms, status)``; see ``_pykernels``.
    """
    cdef double ua[32]
    cdef double lb[32]
    cdef int p = len(upper)
    cdef int q = len(lower)
    cdef int i
    if p > _MAXPAR or q > _MAXPAR:
        raise ValueError("at most 32 parameters per side")
    for i in range(p):
        ua[i] = upper[i]
    for i in range(q):
        lb[i] = lower[i]
    if x == 0.0:
        return 1.0, 0.0, 1.0, 1, 0
    cdef double th = 1.0, tl = 0.0, sh = 1.0, sl = 0.0
    cdef double nh, nl, dh, dl, ah, al, rh, rl, mag
    cdef double max_term = 1.0
    cdef int small = 0
    cdef long terms = 1
    cdef long k = 0
    cdef int status = 0
    with nogil:
        while True:
            nh = x
            nl = 0.0
            for i in range(p):
                _two_sum(ua[i], <double>k, &ah, &al)
                _dd_mul(nh, nl, ah, al, &nh, &nl)
            dh = <double>(k + 1)
            dl = 0.0
            for i in range(q):
                _two_sum(lb[i], <double>k, &ah, &al)
                _dd_mul(dh, dl, ah, al, &dh, &dl)
            _dd_div(nh, nl, dh, dl, &rh, &rl)
            _dd_mul(th, tl, rh, rl, &th, &tl)
            k += 1
            mag = fabs(th)
            if small == 3:
                status = 0
                break
            if terms >= max_terms:
                status = 1
                break
            if mag > _OVERFLOW:
                status = 2
                break
            _dd_add(sh, sl, th, tl, &sh, &sl)
            terms += 1
            if mag > max_term:
                max_term = mag
            if mag <= eps_rel * fabs(sh) + eps_abs:
                small += 1
            else:
                small = 0
    return sh + sl, mag, max_term, terms, status
