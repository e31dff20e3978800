from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest

from thermorate.errors import (
    ContourPlacementError,
    DomainError,
    IrrationalCoefficientError,
    UnsupportedMultiplicityError,
)
from thermorate.meijer import (
    GSpec,
    HSpec,
    enumerate_poles,
    g_contour,
    g_series,
    h_contour,
    h_series,
    h_to_g,
)
from thermorate.quadrature import quad_rate
from thermorate.queries import GeneralMB, NonResonant
from thermorate.rates import rate_general


def j1_spec(nu: float) -> GSpec:
    return GSpec.of([], [0.0, 0.5, 1.0 + nu])


def test_simple_ladders():
    poles = enumerate_poles(j1_spec(0.3), 3)
    assert poles.locations == pytest.approx([0, -0.5, -1, -1.3, -1.5, -2, -2.3, -2.5])
    assert set(poles.orders) == {1}


def test_colliding_ladders():
    poles = enumerate_poles(j1_spec(1.0), 3)
    got = dict(zip(np.round(poles.locations, 12), poles.orders))
    assert got == {0.0: 1, -0.5: 1, -1.0: 1, -1.5: 1, -2.0: 2, -2.5: 1}


def test_single_ladder():
    poles = enumerate_poles(GSpec.of([], [0.0]), 2)
    assert poles.locations == [0.0, -1.0] and poles.orders == [1, 1]


def test_near_collision_counts_as_double():
    poles = enumerate_poles(GSpec.of([], [0.0, 2.0 + 1e-11]), 4)
    assert 2 in poles.orders
    poles = enumerate_poles(GSpec.of([], [0.0, 2.0 + 1e-8]), 4)
    assert set(poles.orders) == {1}


def test_triple_collision_rejected():
    with pytest.raises(UnsupportedMultiplicityError):
        g_series(GSpec.of([], [0.0, 0.0, 0.0]), 1.0)


def test_spec_validation():
    with pytest.raises(DomainError):
        GSpec(2, 0, 0, 1, (), (0.0,))
    with pytest.raises(DomainError):
        HSpec.of([], [(0.0, -1.0)])


@pytest.mark.parametrize("x", [0.7, 3.0])
def test_exponential(backend, x):
    assert g_series(GSpec.of([], [0.0]), x).value == pytest.approx(math.exp(-x), rel=1e-14)


def test_exponential_scaling(backend):
    for x in np.linspace(0.01, 4.99, 25):
        assert g_series(GSpec.of([], [0.0]), x).value * math.exp(x) == pytest.approx(1.0, abs=1e-12)


def test_j1_spec_matches_quadrature(backend):
    sv = g_series(j1_spec(0.3), 0.25)
    ref = quad_rate(NonResonant(1.0, 0.3), 1e-12).value
    assert math.sqrt(math.pi) * ref == pytest.approx(sv.value, rel=1e-11)


def test_double_pole_every_point():
    spec = GSpec.of([], [0.0, 0.0])
    a, b = g_series(spec, 1.0), g_contour(spec, 1.0)
    assert a.method == "double_pole_series"
    assert abs(a.value - b.value) <= 1e-9
    # G^{2,0}_{0,2}[x | 0, 0] = 2 K_0(2 sqrt x)
    assert a.value == pytest.approx(float(2 * mpmath.besselk(0, 2)), rel=1e-13)


def test_contour_exponential():
    assert g_contour(GSpec.of([], [0.0]), 1.0).value == pytest.approx(math.exp(-1), abs=1e-10)


def test_contour_with_right_poles():
    # G^{1,1}_{1,1}[x | a; b] = Gamma(1-a+b) x^b (1+x)^-(1-a+b)
    sv = g_contour(GSpec(1, 1, 1, 1, (0.5,), (0.0,)), 0.7)
    assert sv.value == pytest.approx(math.gamma(0.5) * 1.7 ** -0.5, rel=1e-10)


def test_contour_placement_error():
    with pytest.raises(ContourPlacementError):
        g_contour(GSpec(1, 1, 1, 1, (2.0,), (0.0,)), 0.7)


def test_series_against_contour():
    spec = GSpec.of([], [0.0, 0.5, 1.3])
    assert g_series(spec, 0.25).value == pytest.approx(g_contour(spec, 0.25).value, abs=1e-9)


def test_cutoff_block_matches_quadrature():
    # (0, 1)-truncated integral of y^-1/2 exp(-z y^-1/2), with z^2/4 = 2
    h = HSpec(2, 0, 1, 2, ((1.5, 0.5),), ((0.0, 1.0), (0.5, 0.5)))
    pref, g, argmap = h_to_g(h)
    assert g.a == (1.5,) and sorted(g.b) == [0.0, 0.5, 0.5]
    z = math.sqrt(8.0)
    assert argmap(z) == pytest.approx(2.0)
    val = pref * g_series(g, argmap(z)).value
    ref = float(mpmath.quad(lambda y: y ** -0.5 * mpmath.exp(-z / mpmath.sqrt(y)), [0, 0.2, 1]))
    assert val == pytest.approx(ref, rel=1e-11)
    assert val == pytest.approx(pref * g_contour(g, 2.0).value, rel=1e-10)


SPECS = [
    GSpec.of([], [0.0, 0.5, 1.3]),
    GSpec.of([], [0.0, 0.5, 2.0]),
    GSpec.of([], [0.0, 0.0]),
    GSpec.of([1.5], [0.5, 0.0, 0.5]),
    GSpec.of([2.3], [0.0, 0.5, 1.3]),
    GSpec.of([], [0.0, 1 / 3, 2 / 3, 0.4, 0.9]),
]


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: ",".join(f"{b:g}" for b in s.b))
@pytest.mark.parametrize("x", [0.1, 1.0, 10.0])
def test_method_agreement(spec, x):
    a, b = g_series(spec, x), g_contour(spec, x)
    assert abs(a.value - b.value) <= 10 * (a.abs_err + b.abs_err)


def test_pole_continuity():
    x = 0.5
    target = g_series(j1_spec(1.0), x).value
    devs = [abs(g_series(j1_spec(nu), x).value - target) for nu in (0.9, 0.99, 0.999)]
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 1e-3 * target


@pytest.mark.parametrize("x", [0.5, 5.0, 10.0])
def test_depth_stability(x):
    spec = j1_spec(0.3)
    for depth in (6, 10, 20):
        lo, hi = g_series(spec, x, depth), g_series(spec, x, depth + 2)
        assert abs(hi.value - lo.value) < lo.abs_err or lo.abs_err == 0.0 and hi.value == lo.value


def test_h_series_matches_h_contour():
    h = HSpec.of([], [(0.0, 1.0), (1.3, 1 / 3.8)])
    a, b = h_series(h, 2.0), h_contour(h, 2.0)
    assert abs(a.value - b.value) <= 10 * (a.abs_err + b.abs_err)


def test_different_coefficient_collision():
    # Gamma(s) and Gamma(3/1.9 + s/3.8) collide at s = -6 and s = -25
    h = HSpec.of([], [(0.0, 1.0), (3 / 1.9, 1 / 3.8)])
    assert 2 in enumerate_poles(h, 30).orders
    x = 10 * 0.3 ** (1 / 3.8)
    a, b = h_series(h, x), h_contour(h, x)
    assert a.value == pytest.approx(b.value, rel=1e-12)


def test_h_to_g_nonresonant():
    nu = 0.3
    pref, g, argmap = h_to_g(HSpec.of([], [(0.0, 2.0), (1.0 + nu, 1.0)]))
    # the factor m = 2 in front of the H-function turns this into pi^-1/2
    assert 2 * pref == pytest.approx(math.pi ** -0.5)
    assert g.b == pytest.approx((0.0, 0.5, 1.0 + nu))
    z, p = 1.7, 1.0
    assert argmap(z ** 2 * p) == pytest.approx(z * z * p / 4)


def test_h_to_g_identity():
    pref, g, argmap = h_to_g(HSpec.of([], [(0.0, 1.0), (0.7, 1.0)]))
    assert pref == pytest.approx(1.0)
    assert g.b == (0.0, 0.7)
    assert argmap(3.0) == pytest.approx(3.0)


def test_h_to_g_three_two():
    rho = 0.1
    pref, g, argmap = h_to_g(HSpec.of([], [(0.0, 3.0), (1 - 2 * rho, 2.0)]))
    assert g.b == pytest.approx((0.0, 1 / 3, 2 / 3, 0.4, 0.9))
    assert argmap(2.0) == pytest.approx(2.0 / (3 ** 3 * 2 ** 2))
    z = 0.9
    got = rate_general(z, 1.0, rho, 2, 3).value
    ref = quad_rate(GeneralMB(z, 1.0, rho, 2, 3), 1e-12).value
    assert got == pytest.approx(ref, rel=1e-8)


def test_h_to_g_irrational():
    with pytest.raises(IrrationalCoefficientError):
        h_to_g(HSpec.of([], [(0.0, 1.0), (0.5, math.sqrt(2))]))
    with pytest.raises(IrrationalCoefficientError):
        h_to_g(HSpec.of([], [(0.0, 1.0), (0.5, 1 / 13)]))
