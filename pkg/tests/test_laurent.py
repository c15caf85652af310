from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from twoloop.laurent import (
    ONE,
    T,
    ZERO,
    LaurentPoly,
    NotDivisible,
    ParseError,
    content,
    determinant,
    divides,
    eval_one,
    exact_div,
    format_poly,
    involute,
    mod_two,
    parse,
    power_roots,
    resultant_in_s,
    unit_normalize,
)

from conftest import laurent_polys, monomials, nonzero_polys

P = parse


def test_involute_examples():
    assert involute(T) == P("t^-1")
    assert involute(P("2*t - 3 + t^-2")) == P("2*t^-1 - 3 + t^2")
    sym = P("t - 1 + t^-1")
    assert involute(sym) == sym


def test_eval_one_examples():
    assert eval_one(ZERO) == 0
    assert eval_one(P("3*t^-1 - 5 + 3*t")) == 1
    assert eval_one(P("t^-1 - 1 + t")) == 1


def test_content_examples():
    assert content(P("t^-1 - 1 + t")) == 1
    assert content(P("2*t + 4")) == 2
    assert content(P("6*t^-2 - 9*t^3")) == 3
    assert content(ZERO) == 0
    with pytest.raises(ValueError):
        content(P("1/2*t"))


def test_exact_div_examples():
    assert exact_div(P("t^2 - t^-2"), P("t - t^-1")) == P("t + t^-1")
    p = P("3*t^-2 + t + 7")
    assert exact_div(p, p) == ONE
    with pytest.raises(NotDivisible):
        exact_div(P("t + 2"), P("t - 1"))
    with pytest.raises(ZeroDivisionError):
        exact_div(T, ZERO)


def test_exact_div_cover_quotient_is_integral():
    delta = P("t^-1 - 1 + t")
    q = exact_div(P("t^-2 + 1 + t^2"), delta)
    assert q == P("t^-1 + 1 + t")
    assert q.is_integral()


def test_power_roots_examples():
    assert power_roots(ONE, 4) == ONE
    delta = P("t^-1 - 1 + t")
    assert power_roots(delta, 1) == unit_normalize(delta)
    assert power_roots(delta, 2) == P("t^-1 + 1 + t")
    with pytest.raises(ValueError):
        power_roots(delta, 0)


def test_power_roots_cube_of_trefoil():
    # roots e^{±iπ/3} cubed are both -1
    assert power_roots(P("t^-1 - 1 + t"), 3) == unit_normalize(P("t^-1 + 2 + t"))


def test_mod_two_examples():
    assert mod_two(P("2*t")) == ZERO
    assert mod_two(P("t + 3")) == P("t + 1")
    w = P("-t^2")
    assert mod_two(w * involute(w)) == ONE
    with pytest.raises(ValueError):
        mod_two(P("1/2"))


def test_determinant_small():
    m = [[ONE, T], [involute(T), -ONE]]
    assert determinant(m) == LaurentPoly.const(-2)


@pytest.mark.parametrize("text", [
    "t^-1 - 1 + t", "3/2*t^2", "-t", "0", "2 - 5*t^-3", "-1/3*t^-1 + t^4",
])
def test_parse_format_roundtrip(text):
    p = P(text)
    assert P(format_poly(p)) == p
    assert format_poly(P(format_poly(p))) == format_poly(p)


def test_parse_accepts_implicit_products():
    assert P("2t") == P("2*t")
    assert P(" t ^ -1 ") == P("t^-1")


@pytest.mark.parametrize("text,column", [("t^", 3), ("2 + + t", 5), ("t$", 2), ("", 1)])
def test_parse_errors_report_columns(text, column):
    with pytest.raises(ParseError) as info:
        P(text)
    assert info.value.column == column


@given(laurent_polys(integral=False), laurent_polys(integral=False), laurent_polys(integral=False))
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a - a == ZERO


@given(laurent_polys(integral=False), laurent_polys(integral=False))
def test_involution_is_multiplicative_and_self_inverse(a, b):
    assert involute(a * b) == involute(a) * involute(b)
    assert involute(involute(a)) == a


@given(laurent_polys(), laurent_polys())
def test_content_multiplicative(a, b):
    assert content(a * b) == content(a) * content(b)


@given(laurent_polys(integral=False))
def test_format_parse_roundtrip_property(a):
    assert P(format_poly(a)) == a


@given(nonzero_polys, laurent_polys(integral=False))
def test_exact_div_recovers_factor(q, r):
    assert exact_div(q * r, q) == r
    assert divides(q, q * r)


@st.composite
def normalized_deltas(draw):
    # Δ = 1 + (t - 2 + t^-1)·f(t + t^-1) always has Δ(1) = 1
    s = T + involute(T)
    f = ZERO
    for k in range(draw(st.integers(0, 2))):
        f = f + LaurentPoly.const(draw(st.integers(-2, 2))) * s ** k
    return ONE + (s - 2) * f


@given(normalized_deltas(), st.integers(1, 3), st.integers(1, 3))
def test_power_roots_composes(delta, a, b):
    left = power_roots(power_roots(delta, a), b)
    assert unit_normalize(left) == unit_normalize(power_roots(delta, a * b))


@given(normalized_deltas(), st.integers(1, 5))
def test_delta_divides_cover_polynomial(delta, r):
    q = exact_div(power_roots(delta, r).substitute_power(r), delta)
    assert q.is_integral()


@given(monomials())
def test_monomials_are_units(w):
    assert w.is_unit()
    assert w * involute(w) == ONE


@given(nonzero_polys, st.integers(1, 4))
def test_power_roots_matches_sylvester_resultant(delta, r):
    lo = delta.min_exp
    f = [LaurentPoly.const(delta.coeff(lo + i)) for i in range(delta.max_exp - lo + 1)]
    g = [-T] + [ZERO] * (r - 1) + [ONE]
    assert power_roots(delta, r) == unit_normalize(resultant_in_s(f, g))
