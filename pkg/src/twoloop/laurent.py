"""Exact Laurent polynomials in one variable ``t`` over the rationals.

A :class:`LaurentPoly` is an immutable map ``exponent -> Fraction`` with
zero coefficients trimmed.  Everything here is exact; there is no
floating point anywhere in the package.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class NotDivisible(ArithmeticError):
    """Raised by :func:`exact_div` when the quotient is not a Laurent polynomial."""


class ParseError(ValueError):
    """Malformed input text; ``line`` and ``column`` are 1-based when known."""

    def __init__(self, message: str, column: int | None = None, line: int | None = None):
        self.detail = message
        self.column = column
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if where:
            message = f"{', '.join(where)}: {message}"
        super().__init__(message)

    def at_line(self, line: int, offset: int = 0) -> "ParseError":
        """The same error located on ``line``, columns shifted by ``offset``."""
        col = None if self.column is None else self.column + offset
        return ParseError(self.detail, col, line)


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, str)):
        return Fraction(c)
    raise TypeError(f"exact coefficient required, got {type(c).__name__}")


class LaurentPoly:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, object] | None = None):
        clean = {}
        for k, c in (terms or {}).items():
            c = _as_fraction(c)
            if c:
                clean[int(k)] = c
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    # construction helpers
    @classmethod
    def const(cls, c) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, k: int, c=1) -> "LaurentPoly":
        return cls({k: c})

    @classmethod
    def from_string(cls, text: str) -> "LaurentPoly":
        return parse(text)

    # inspection
    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coeff(self, k: int) -> Fraction:
        return self._terms.get(k, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def max_exp(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no degree")
        return next(reversed(self._terms))

    @property
    def min_exp(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no valuation")
        return next(iter(self._terms))

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._terms.values())

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_unit(self) -> bool:
        """True for ``±t^k``, the units of Z[t, t^-1]."""
        return len(self._terms) == 1 and abs(next(iter(self._terms.values()))) == 1

    # ring structure
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        left, right = self._terms, other._terms
        if all(c.denominator == 1 for c in left.values()) and all(c.denominator == 1 for c in right.values()):
            left = {k: c.numerator for k, c in left.items()}
            right = {k: c.numerator for k, c in right.items()}
        out: dict[int, object] = {}
        for a, ca in left.items():
            for b, cb in right.items():
                out[a + b] = out.get(a + b, 0) + ca * cb
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-monomial")
            (k, c), = self._terms.items()
            return LaurentPoly({k * n: Fraction(1) / c ** (-n)})
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "LaurentPoly":
        c = _as_fraction(c)
        return LaurentPoly({k: c * v for k, v in self._terms.items()})

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``t^k``."""
        return LaurentPoly({e + k: c for e, c in self._terms.items()})

    def substitute_power(self, r: int) -> "LaurentPoly":
        """``P(t) -> P(t^r)``."""
        return LaurentPoly({e * r: c for e, c in self._terms.items()})

    def involute(self) -> "LaurentPoly":
        return involute(self)

    def eval_one(self) -> Fraction:
        return eval_one(self)

    def __call__(self, x) -> Fraction:
        x = _as_fraction(x)
        return sum((c * x ** k for k, c in self._terms.items()), Fraction(0))

    def __repr__(self) -> str:
        return f"LaurentPoly({format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)


ZERO = LaurentPoly()
ONE = LaurentPoly.const(1)
T = LaurentPoly.monomial(1)


def involute(p: LaurentPoly) -> LaurentPoly:
    """The ring involution ``t -> t^-1``."""
    return LaurentPoly({-k: c for k, c in p.items()})


def eval_one(p: LaurentPoly) -> Fraction:
    """Augmentation ``P(1)``: the coefficient sum."""
    return sum(p._terms.values(), Fraction(0))


def _require_integral(p: LaurentPoly, what: str) -> None:
    if not p.is_integral():
        raise ValueError(f"{what} requires integer coefficients, got {p}")


def content(p: LaurentPoly) -> int:
    """gcd of the (integer) coefficients; ``content(0) == 0``."""
    _require_integral(p, "content")
    g = 0
    for c in p._terms.values():
        g = math.gcd(g, c.numerator)
    return g


def mod_two(p: LaurentPoly) -> LaurentPoly:
    """Coefficientwise reduction mod 2, returned with coefficients in {0, 1}."""
    _require_integral(p, "mod_two")
    return LaurentPoly({k: c.numerator % 2 for k, c in p.items()})


def exact_div(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Return ``r`` with ``q * r == p`` or raise :class:`NotDivisible`."""
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero():
        return ZERO
    qlo, qhi = q.min_exp, q.max_exp
    lead = q.coeff(qhi)
    rem = dict(p._terms)
    qterms = list(q.items())
    if all(c.denominator == 1 for c in rem.values()) and all(c.denominator == 1 for _, c in qterms):
        # integer fast path; falls back to rationals if a quotient coefficient is not integral
        rem = {k: c.numerator for k, c in rem.items()}
        qterms = [(k, c.numerator) for k, c in qterms]
        lead = lead.numerator
    quot: dict[int, Fraction] = {}
    # ordinary long division from the top; the remainder must die entirely
    lo = p.min_exp
    while rem:
        top = max(rem)
        if top - qhi < lo - qlo:
            raise NotDivisible(f"{q} does not divide {p}")
        c = rem[top]
        c = c // lead if isinstance(c, int) and c % lead == 0 else Fraction(c) / lead
        e = top - qhi
        quot[e] = c
        for k, v in qterms:
            nv = rem.get(k + e, 0) - c * v
            if nv:
                rem[k + e] = nv
            else:
                rem.pop(k + e, None)
    return LaurentPoly(quot)


def divides(q: LaurentPoly, p: LaurentPoly) -> bool:
    try:
        exact_div(p, q)
    except NotDivisible:
        return False
    return True


def unit_normalize(p: LaurentPoly) -> LaurentPoly:
    """Multiply by ``±t^k`` to centre the exponents and make the sign positive.

    The sign makes ``p(1) > 0``; when ``p(1) == 0`` the top coefficient is made
    positive instead.  For polynomials symmetric up to a unit the result is
    exactly symmetric.  With an odd exponent span the shift puts the extra
    exponent on the positive side.
    """
    if p.is_zero():
        return p
    lo, hi = p.min_exp, p.max_exp
    shifted = p.shift(-((lo + hi) // 2))
    v = eval_one(shifted)
    sign = v if v else shifted.coeff(shifted.max_exp)
    return -shifted if sign < 0 else shifted


def is_symmetric(p: LaurentPoly) -> bool:
    return involute(p) == p


# --- determinants and resultants --------------------------------------------

def determinant(matrix: Sequence[Sequence[LaurentPoly]]) -> LaurentPoly:
    """Fraction-free (Bareiss) determinant over Q[t, t^-1]."""
    n = len(matrix)
    if n == 0:
        return ONE
    a = [[_lp(x) for x in row] for row in matrix]
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if a[k][k].is_zero():
            for r in range(k + 1, n):
                if not a[r][k].is_zero():
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return ZERO
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = exact_div(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev)
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return -d if sign < 0 else d


def _lp(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    return LaurentPoly.const(x)


def resultant_in_s(f: Sequence[LaurentPoly], g: Sequence[LaurentPoly]) -> LaurentPoly:
    """Sylvester resultant in an auxiliary variable ``s``.

    ``f`` and ``g`` are coefficient lists in ``s`` (index = power of ``s``)
    whose entries are Laurent polynomials in ``t``; the highest entries must
    be nonzero.
    """
    m, n = len(f) - 1, len(g) - 1
    if m < 0 or n < 0 or f[-1].is_zero() or g[-1].is_zero():
        raise ValueError("resultant needs nonzero leading coefficients")
    size = m + n
    if size == 0:
        return ONE
    rows = []
    for i in range(n):
        row = [ZERO] * size
        for j, c in enumerate(reversed(f)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [ZERO] * size
        for j, c in enumerate(reversed(g)):
            row[i + j] = c
        rows.append(row)
    return determinant(rows)


def power_roots(delta: LaurentPoly, r: int) -> LaurentPoly:
    """Polynomial whose roots are the ``r``-th powers of the roots of ``delta``.

    Equals ``Res_s(delta(s), s^r - t)`` up to a unit.  The power sums of
    the new roots are ``p_{kr}`` of the old ones, so Newton's identities
    give the answer without forming the Sylvester matrix.
    """
    if r <= 0:
        raise ValueError("r must be a positive integer")
    if delta.is_zero():
        raise ValueError("power_roots of the zero polynomial")
    lo = delta.min_exp
    d = delta.max_exp - lo
    den = math.lcm(*(Fraction(c).denominator for _, c in delta.items()))
    c = [int(delta.coeff(lo + i) * den) for i in range(d + 1)]
    lead = c[d]
    # q[k] = lead^k * (k-th power sum of the roots), an integer
    q = [d]
    for k in range(1, d * r + 1):
        acc = -sum(c[d - i] * lead ** (i - 1) * q[k - i] for i in range(1, min(k, d + 1)))
        if k <= d:
            acc -= k * c[d - k] * lead ** (k - 1)
        q.append(acc)
    # e[k] = lead^(k r) * (k-th elementary symmetric function of the r-th powers)
    e = [1]
    for k in range(1, d + 1):
        e.append(sum((-1) ** (i - 1) * e[k - i] * q[i * r] for i in range(1, k + 1)) // k)
    out = LaurentPoly({d - k: (-1) ** k * e[k] / Fraction(lead) ** (r * (k - 1)) for k in range(d + 1)})
    return unit_normalize(out)


# --- text grammar ----------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<op>[-+*^])|(?P<var>t))")


def parse(text: str) -> LaurentPoly:
    """Parse ``c*t^k`` style sums such as ``t^-1 - 1 + t`` or ``3/2*t^2``."""
    tokens = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        m = _TOKEN.match(stripped, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {stripped[pos]!r}", pos + 1)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    if not tokens:
        raise ParseError("empty polynomial", 1)

    out: dict[int, Fraction] = {}
    i = 0

    def peek():
        return tokens[i] if i < len(tokens) else (None, None, len(stripped) + 1)

    first = True
    while i < len(tokens):
        sign = 1
        kind, val, col = peek()
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            i += 1
        elif not first:
            raise ParseError(f"expected '+' or '-', got {val!r}", col)
        first = False
        kind, val, col = peek()
        coef = Fraction(1)
        exp = 0
        saw = False
        if kind == "num":
            coef = Fraction(val)
            i += 1
            saw = True
            kind, val, col = peek()
            if kind == "op" and val == "*":
                i += 1
                kind, val, col = peek()
                if kind != "var":
                    raise ParseError("expected 't' after '*'", col)
        if kind == "var":
            i += 1
            saw = True
            exp = 1
            kind, val, col = peek()
            if kind == "op" and val == "^":
                i += 1
                kind, val, col = peek()
                esign = 1
                if kind == "op" and val in "+-":
                    esign = -1 if val == "-" else 1
                    i += 1
                    kind, val, col = peek()
                if kind != "num" or "/" in val:
                    raise ParseError("expected integer exponent", col)
                exp = esign * int(val)
                i += 1
        if not saw:
            raise ParseError("expected a term", col)
        out[exp] = out.get(exp, 0) + sign * coef
    return LaurentPoly(out)


def format_poly(p: LaurentPoly) -> str:
    """Inverse of :func:`parse`; terms in increasing exponent."""
    if p.is_zero():
        return "0"
    parts = []
    for k, c in p.items():
        neg = c < 0
        a = -c if neg else c
        if k == 0:
            body = str(a)
        else:
            var = "t" if k == 1 else f"t^{k}"
            body = var if a == 1 else f"{a}*{var}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


def lp(x) -> LaurentPoly:
    """Coerce an int, Fraction, string or LaurentPoly."""
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, str):
        return parse(x)
    return LaurentPoly.const(x)


def poly_sum(items: Iterable[LaurentPoly]) -> LaurentPoly:
    out = ZERO
    for p in items:
        out = out + p
    return out
