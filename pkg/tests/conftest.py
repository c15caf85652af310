import random
from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from twoloop.laurent import ONE, ZERO, LaurentPoly, determinant, eval_one, involute

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


small_ints = st.integers(min_value=-6, max_value=6)


@st.composite
def laurent_polys(draw, max_terms=4, lo=-4, hi=4, integral=True):
    n = draw(st.integers(min_value=0, max_value=max_terms))
    terms = {}
    for _ in range(n):
        k = draw(st.integers(min_value=lo, max_value=hi))
        if integral:
            c = draw(small_ints)
        else:
            c = Fraction(draw(small_ints), draw(st.integers(min_value=1, max_value=5)))
        terms[k] = terms.get(k, 0) + c
    return LaurentPoly(terms)


nonzero_polys = laurent_polys(max_terms=3).filter(lambda p: not p.is_zero())


@st.composite
def monomials(draw, max_exp=3):
    return LaurentPoly.monomial(draw(st.integers(-max_exp, max_exp)), draw(st.sampled_from([1, -1])))


def random_monomial(rng: random.Random, max_exp: int) -> LaurentPoly:
    return LaurentPoly.monomial(rng.randint(-max_exp, max_exp), rng.choice([1, -1]))


def random_m_matrix(rng: random.Random, n: int, max_exp: int, density: float = 0.6):
    """Rejection-sample a hermitian monomial matrix with det W(1) = ±1."""
    while True:
        rows = [[ZERO] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = LaurentPoly.const(rng.choice([1, -1]))
            for j in range(i + 1, n):
                x = random_monomial(rng, max_exp) if rng.random() < density else ZERO
                rows[i][j] = x
                rows[j][i] = involute(x)
        if abs(eval_one(determinant(rows))) == 1:
            return rows


# --- acceptance verdict lines ---------------------------------------------------

CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(CRITERIA):
        verdict, note = CRITERIA[num]
        terminalreporter.write_line(f"criterion {num}: {verdict}" + (f"  ({note})" if note else ""))
