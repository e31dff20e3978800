from __future__ import annotations

import math

import mpmath
import pytest

from thermorate.errors import NonConvergenceError, PoleError
from thermorate.pfq import PfqSpec, hyp, pfq


def test_zero_argument_is_exactly_one(backend):
    sv = hyp((), (0.5, 1.5), 0.0)
    assert sv.value == 1.0 and sv.terms == 1
    assert hyp((1.2,), (0.3, -0.7), 0.0).value == 1.0


def test_reference_sum(backend):
    sv = hyp((), (0.5, 1.5), -0.25)
    with mpmath.workdps(50):
        ref = mpmath.nsum(lambda k: mpmath.mpf(-0.25) ** k
                          / (mpmath.rf(0.5, k) * mpmath.rf(1.5, k) * mpmath.factorial(k)),
                          [0, 199])
    assert sv.value == pytest.approx(float(ref), rel=1e-13)
    assert sv.abs_err < 1e-14


def test_exponential(backend):
    assert hyp((), (), 1.0).value == pytest.approx(math.e, rel=1e-15)


def test_lower_swap_symmetry(backend):
    for x in (-30.0, -1.0, 2.5):
        a = hyp((), (0.3, 1.7), x).value
        b = hyp((), (1.7, 0.3), x).value
        assert a == pytest.approx(b, rel=1e-15)


def test_derivative_identity(backend):
    b1, b2, h = 0.5, 1.3, 1e-6
    for x in (-4.0, -0.5, 0.7):
        fd = (hyp((), (b1, b2), x + h).value - hyp((), (b1, b2), x - h).value) / (2 * h)
        ref = hyp((), (b1 + 1, b2 + 1), x).value / (b1 * b2)
        assert fd == pytest.approx(ref, rel=1e-6)


def test_alternating_cancellation_survives(backend):
    # terms peak near 1e7 while the sum is O(1e-3)
    x = -400.0
    sv = hyp((), (0.5, 1.5), x)
    ref = float(mpmath.hyper([], [0.5, 1.5], x))
    assert sv.reliable
    assert sv.value == pytest.approx(ref, rel=1e-8)


def test_cancellation_sentinel(backend):
    sv = hyp((), (0.5, 1.5), -40000.0)
    assert not sv.reliable
    assert sv.abs_err == math.inf


def test_lower_pole_rejected():
    with pytest.raises(PoleError):
        PfqSpec((), (0.5, -2.0), 1.0)


def test_term_ceiling(monkeypatch, backend):
    monkeypatch.setenv("THERMORATE_MAX_TERMS", "5")
    with pytest.raises(NonConvergenceError):
        pfq(PfqSpec((), (0.5,), 100.0))
