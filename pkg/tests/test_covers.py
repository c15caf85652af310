from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from twoloop.covers import casson_residue, cover_alexander, cover_data, cover_quotient, default_lift
from twoloop.laurent import ONE, T, ZERO, LaurentPoly, involute, parse, unit_normalize
from twoloop.theta import ThetaElement, eval_t_one, theta_class

TREFOIL = parse("t^-1 - 1 + t")


@st.composite
def normalized_deltas(draw, max_degree=4):
    s = T + involute(T)
    f = ZERO
    for k in range(draw(st.integers(0, max_degree - 1))):
        f = f + LaurentPoly.const(draw(st.integers(-2, 2))) * s ** k
    return ONE + (s - 2) * f


def test_trefoil_double_cover():
    assert cover_alexander(TREFOIL, 2) == unit_normalize(parse("t + 1 + t^-1"))
    data = cover_data(TREFOIL, 2)
    assert data.quotient == parse("t^-1 + 1 + t")
    assert not data.zhs_cover
    assert data.summary().splitlines()[0] == "delta_r: t^-1 + 1 + t"


def test_trefoil_higher_covers():
    assert cover_alexander(TREFOIL, 3) == parse("t^-1 + 2 + t")
    assert cover_alexander(TREFOIL, 6) == parse("t^-1 - 2 + t")
    assert cover_alexander(TREFOIL, 5) == TREFOIL
    assert cover_data(TREFOIL, 5).zhs_cover


def test_sigma_is_carried():
    assert "sigma_r: -2" in cover_data(TREFOIL, 2, -2).summary()


def test_input_checks():
    with pytest.raises(ValueError):
        cover_alexander(TREFOIL, 0)
    with pytest.raises(ValueError):
        cover_quotient(parse("t - 4 + t^-1"), 2)


@given(normalized_deltas(), st.integers(1, 5))
def test_quotient_integral_and_exact(delta, r):
    p = cover_quotient(delta, r)
    assert p.is_integral()
    assert p * delta == cover_alexander(delta, r).substitute_power(r)


def test_lift_r1_is_identity():
    x = ThetaElement({(0, 0): 1, (2, 1): 3}, TREFOIL)
    assert default_lift(x, TREFOIL, 1) == x


def test_lift_pinned():
    x = ThetaElement({(0, 0): 1}, TREFOIL)
    assert default_lift(x, TREFOIL, 2) == ThetaElement({(0, 0): 3, (1, 0): 6}, parse("t^-1 + 1 + t"))


def test_casson_residue():
    x = ThetaElement({(0, 0): 1}, TREFOIL)
    v = casson_residue(x, TREFOIL, 1)
    assert v.value == 2 * eval_t_one(x) and v.divisible
    assert casson_residue(theta_class(TREFOIL), TREFOIL, 3).value == 2
    assert not casson_residue(x, TREFOIL, 2).divisible
    with pytest.raises(ValueError):
        casson_residue(ThetaElement({(0, 0): Fraction(1, 3)}, TREFOIL), TREFOIL, 2)


def test_custom_lift_strategy():
    x = ThetaElement({(0, 0): 1}, TREFOIL)
    v = casson_residue(x, TREFOIL, 2, lift=lambda y, d, r: y * r)
    assert v.value == 4 and v.divisible
