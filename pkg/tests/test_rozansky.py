import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from twoloop.contraction import hgraph, strut, tripod, wheel2
from twoloop.freealg import NCSeries, bch_operator, nc_exp, nc_mul
from twoloop.laurent import ONE, ZERO, T, LaurentPoly, ParseError, determinant, eval_one, involute, parse
from twoloop.rozansky import (
    MatrixError,
    MonomialMatrix,
    build_exponent,
    elementary_link_term,
    enumerate_matrices,
    format_matrix,
    framing_factor,
    parse_matrix,
    phi,
    phi_value,
    scan,
    signature,
    wheeling_exponent,
)
from twoloop.theta import in_lattice

from conftest import random_m_matrix

M = MonomialMatrix.from_rows


def eye(n, sign=1):
    return M([[sign if i == j else 0 for j in range(n)] for i in range(n)])


def test_matrix_validation():
    with pytest.raises(MatrixError):
        M([[2]])
    with pytest.raises(MatrixError):
        M([[ONE, T], [T, ONE]])
    with pytest.raises(MatrixError):
        M([[ONE, 2 * T], [2 * involute(T), ONE]])
    with pytest.raises(MatrixError):
        M([[ONE, T], [involute(T), ONE]])  # det W(1) = 0


def test_matrix_accessors():
    w = M([[ONE, T, ZERO], [involute(T), ONE, ONE], [ZERO, ONE, -ONE]]).stabilized(-1)
    assert w.n == 4
    assert w.framings == (1, 1, -1, -1)
    assert w.at_one()[0][1] == 1
    assert eye(2, -1).digest() == "[-1;0|0;-1]"


def test_elementary_link_terms():
    plus = elementary_link_term(1, 0, 1)
    assert [(d.shape, d.coefficient) for d in plus] == [
        ("strut", 1), ("wheel2", Fraction(1, 8)), ("hgraph", Fraction(1, 8))]
    minus = elementary_link_term(-1, 0, 1)
    assert [(d.shape, d.coefficient) for d in minus] == [
        ("strut", -1), ("wheel2", Fraction(1, 8)), ("hgraph", Fraction(-1, 8))]
    with pytest.raises(ValueError):
        elementary_link_term(2, 0, 1)


def test_packed_coefficients_from_composed_links():
    # two elementary links along one component: the product of exponentials
    # agrees with the packed degree-3 operator
    x = NCSeries.gen(0, 3)
    assert bch_operator(2, 3) == nc_mul(nc_exp(x), nc_exp(NCSeries.gen(1, 3)))


def test_build_exponent_identity():
    terms = build_exponent(eye(3)).terms
    assert sorted((d.shape, d.coefficient) for d in terms) == sorted(
        [("strut", 1)] * 3 + [("wheel2", Fraction(1, 48))] * 3)


def test_build_exponent_n2():
    # no 2x2 member of 𝓜 has an off-diagonal entry; audit via a 3x3 block
    w = M([[ONE, T, ZERO], [involute(T), ONE, ONE], [ZERO, ONE, ONE]])
    exp = build_exponent(w)
    assert wheel2(0, 1, T, Fraction(1, 8)) in exp.terms
    assert hgraph(0, 1, T, Fraction(1, 8)) in exp.terms
    assert strut(0, 1, T) in exp.terms
    assert exp.of_shape("tripod") == [tripod([(1, ONE), (0, involute(T)), (2, ONE)], Fraction(1, 2))]


def test_build_exponent_sign_goes_to_coefficient():
    w = M([[ONE, T, -ONE], [involute(T), ONE, ZERO], [-ONE, ZERO, ONE]])
    exp = build_exponent(w)
    assert hgraph(0, 2, ONE, Fraction(-1, 8)) in exp.terms
    assert wheel2(0, 2, ONE, Fraction(1, 8)) in exp.terms
    assert exp.of_shape("tripod") == [tripod([(0, ONE), (1, T), (2, -ONE)], Fraction(1, 2))]


def test_framing_factor_identity():
    for n in (1, 2, 3):
        ff = framing_factor(eye(n))
        assert ff.sigma == n and ff.theta_coefficient == Fraction(n, 16)
        assert sorted((d.shape, d.coefficient) for d in ff.exponent) == sorted(
            [("strut", Fraction(1, 2))] * n + [("wheel2", Fraction(2, 48))] * n)
        ff = framing_factor(eye(n, -1))
        assert ff.sigma == -n


def test_wheeling_matches_framing_display():
    # the wheel coefficients are those of the framing factor: w/24 per
    # linked component and (w^2+1)/48 on the component itself
    for w, links in [(1, [3, 0, -1]), (-1, [1, 1]), (2, [0, -2])]:
        out = wheeling_exponent(w, links, Fraction(-w, 24))
        assert out[("wheel", "i", "i")] == Fraction(w * w + 1, 48)
        for j, x in enumerate(links):
            assert out.get(("wheel", j, "i"), 0) == Fraction(w * x, 24)
        # the displayed -w/24 Θ leaves -w/48; -w/48 would cancel exactly
        assert out["theta"] == Fraction(-w, 48)
        assert "theta" not in wheeling_exponent(w, links, Fraction(-w, 48))


@pytest.mark.parametrize("rows,sig", [
    ([[1]], 1), ([[0, 1], [1, 0]], 0), ([[1, 2], [2, 1]], 0), ([[-1, 0], [0, -1]], -2),
    ([[0, 0], [0, 0]], 0), ([[2, 1, 0], [1, 2, 1], [0, 1, 2]], 3),
])
def test_signature(rows, sig):
    assert signature(rows) == sig


def test_signature_rejects_asymmetric():
    with pytest.raises(ValueError):
        signature([[0, 1], [2, 0]])


def test_enumeration_counts():
    assert [format_matrix(w) for w in enumerate_matrices(1, 0)] == ["1\n1\n", "1\n-1\n"]
    # an off-diagonal monomial forces det W(1) into {0, -2}
    assert sum(1 for _ in enumerate_matrices(2, 1)) == 4
    assert sum(1 for _ in enumerate_matrices(3, 1)) == 656
    with pytest.raises(ValueError):
        list(enumerate_matrices(0, 1))


def test_enumeration_matches_brute_force_filter():
    choices = [ZERO] + [LaurentPoly.monomial(k, s) for k in (-1, 0, 1) for s in (1, -1)]
    count = 0
    for d in itertools.product((1, -1), repeat=3):
        for a, b, c in itertools.product(choices, repeat=3):
            rows = [[LaurentPoly.const(d[0]), a, b],
                    [involute(a), LaurentPoly.const(d[1]), c],
                    [involute(b), involute(c), LaurentPoly.const(d[2])]]
            count += abs(eval_one(determinant(rows))) == 1
    assert count == 656


def test_phi_unknot():
    for w in (M([[1]]), M([[-1]]), eye(3), eye(2, -1)):
        v = phi(w)
        assert v.casson == 0 and v.in_twelfth and v.in_half


def test_verdict_implication():
    rng = random.Random(7)
    for _ in range(10):
        v = phi(M(random_m_matrix(rng, 3, 1)))
        assert v.in_twelfth or not v.in_half


def test_scan_small():
    r = scan(1, 0, workers=1)
    assert r.total == 2
    assert not (r.twelfth_failures or r.half_failures or r.casson_failures)
    assert r.lines[0] == "# scan n=1 max_exp=0 matrices=2"
    assert r.lines[1].startswith("0 [1] twelfth=yes half=yes casson=0")
    assert scan(2, 1, workers=1).twelfth_failures == ()


def _sample(seed, n):
    return M(random_m_matrix(random.Random(seed), n, 2))


@given(st.integers(0, 10 ** 6), st.integers(2, 3))
def test_permutation_invariance(seed, n):
    w = _sample(seed, n)
    perm = list(range(n))
    random.Random(seed).shuffle(perm)
    assert phi_value(w.permuted(perm)) == phi_value(w)


@given(st.integers(0, 10 ** 6), st.sampled_from([1, -1]))
def test_stabilization(seed, sign):
    w = _sample(seed, 3)
    assert in_lattice(phi_value(w.stabilized(sign)) - phi_value(w), 2)


@given(st.integers(0, 10 ** 6))
def test_conjugation(seed):
    w = _sample(seed, 3)
    shifts = [random.Random(seed + 1).randint(-1, 1) for _ in range(3)]
    assert in_lattice(phi_value(w.conjugated(shifts)) - phi_value(w), 2)


def test_matrix_text_roundtrip():
    w = M([[ONE, T, ZERO], [involute(T), ONE, -ONE], [ZERO, -ONE, -ONE]])
    assert parse_matrix(format_matrix(w)) == w
    assert parse_matrix("# comment\n1\n-1\n") == M([[-1]])


@pytest.mark.parametrize("text,line,column", [
    ("2\n1; t^\nt^-1; 1\n", 2, 6),
    ("x\n", 1, 1),
    ("2\n1; 0\n0\n", 3, None),
])
def test_matrix_parse_errors(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_matrix(text)
    assert info.value.line == line
    assert info.value.column == column


def test_matrix_row_count_error():
    with pytest.raises(ParseError):
        parse_matrix("3\n1; 0; 0\n")
    with pytest.raises(MatrixError):
        parse_matrix("2\n1; t\n1; 1\n")


def test_canonical_relabeling():
    w = parse_matrix("4\n-1; 0; 1; -t^-2\n0; 1; -t; t\n1; -t^-1; 1; 0\n-t^2; t^-1; 0; -1\n")
    for perm in itertools.permutations(range(4)):
        assert w.permuted(perm).canonical() == w.canonical()
    assert phi_value(w.permuted([3, 0, 2, 1])) == phi_value(w)
