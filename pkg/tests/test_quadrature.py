from __future__ import annotations

import math

import mpmath
import pytest

from thermorate.errors import DomainError, QuadratureBudgetError
from thermorate.quadrature import QuadResult, quad_rate
from thermorate.queries import (
    CutOff,
    Depleted,
    GeneralH,
    GeneralMB,
    NonResonant,
    Resonant,
    Screened,
)


def test_gamma_three():
    r = quad_rate(NonResonant(0, 2))
    assert isinstance(r, QuadResult)
    assert r.value == pytest.approx(2.0, abs=1e-10)
    assert 0 < r.evaluations <= 10**6


def test_unit_cutoff():
    assert quad_rate(CutOff(0, 1, 0)).value == pytest.approx(1 - math.exp(-1), abs=1e-10)


def test_general_zero_argument():
    assert quad_rate(GeneralMB(0, 1, 0.2, 1, 2)).value == pytest.approx(math.gamma(0.8), rel=1e-10)


def test_resonant_elementary():
    # int_0^inf e^-t / (t^2 + 1) dt
    assert quad_rate(Resonant(0, 1, 0, 1, 0)).value == pytest.approx(0.6214496242358134, rel=1e-10)


# pinned at first computation with tol=1e-10 and cross-checked at tol=1e-12
GOLDEN_J1 = 0.018811747428715074


def test_golden_nonresonant():
    a = quad_rate(NonResonant(5, 0.5), 1e-10)
    b = quad_rate(NonResonant(5, 0.5), 1e-12)
    assert a.value == pytest.approx(GOLDEN_J1, rel=1e-10)
    assert abs(a.value - b.value) <= a.abs_err + b.abs_err


@pytest.mark.parametrize("query, f, pts", [
    (Screened(3, 1.5, 2), lambda y: y ** 2 * mpmath.exp(-y - 3 / mpmath.sqrt(y + 1.5)), [0, 2, 6, 20]),
    (Depleted(2, 1.9, 0.3, 0.3), lambda y: y ** 0.3 * mpmath.exp(-y - 0.3 * y ** 1.9 - 2 / mpmath.sqrt(y)),
     [0, 1, 3, 10]),
    (GeneralH(0.8, 1.5, 1.4, 2 / 3), lambda t: t ** 0.4 * mpmath.exp(-1.5 * t - 0.8 * t ** (-2 / 3)),
     [0, 1, 4, 20]),
    (CutOff(4, 3, -0.5), lambda y: y ** -0.5 * mpmath.exp(-y - 4 / mpmath.sqrt(y)), [0, 1, 2, 3]),
])
def test_against_mpmath(query, f, pts):
    with mpmath.workdps(30):
        ref = float(mpmath.quad(f, pts + ([] if isinstance(query, CutOff) else [mpmath.inf])))
    assert quad_rate(query, 1e-12).value == pytest.approx(ref, rel=1e-11)


@pytest.mark.parametrize("query", [
    NonResonant(1, 0.3), CutOff(10, 10, 0.3), Screened(5, 2, 1), Depleted(10, 0.7, 1, 0),
    Resonant(0.5, 1, 0.5, 0.7, 1), GeneralMB(0.5, 2, 0.2, 1, 3),
])
def test_tolerance_coherence(query):
    loose, tight = quad_rate(query, 1e-8), quad_rate(query, 1e-10)
    assert abs(loose.value - tight.value) <= loose.abs_err


@pytest.mark.parametrize("z", [0.1, 1.0, 5.0, 10.0])
def test_substitution_invariance(z):
    q = NonResonant(z, 0.5)
    a, b = quad_rate(q, 1e-10), quad_rate(q, 1e-10, substitute=False)
    assert abs(a.value - b.value) <= 2 * (a.abs_err + b.abs_err) + 1e-15 * abs(a.value)


def test_resonant_width_sign_symmetry():
    a = quad_rate(Resonant(0.5, 1, 0.8, 0.6, 1)).value
    b = quad_rate(Resonant(0.5, 1, 0.8, -0.6, 1)).value
    assert a == b


def test_budget_exhaustion_keeps_estimate():
    with pytest.raises(QuadratureBudgetError) as info:
        quad_rate(NonResonant(5, 0.5), 1e-12, budget=200)
    est = info.value.result
    assert isinstance(est, QuadResult)
    assert est.value == pytest.approx(GOLDEN_J1, rel=1e-2)


def test_tolerance_floor():
    with pytest.raises(DomainError):
        quad_rate(NonResonant(1, 0), 1e-13)
