"""The 2-loop diagram space in its canonical theta basis.

A 2-loop diagram is stored in cleared form: the theta graph with all three
edges oriented the same way and colored ``P/Δ, Q/Δ, R/Δ`` is recorded by
the numerator triple ``P ⊗ Q ⊗ R``.  Monomial triples ``(m, n, k)`` are
identified under the order-12 group generated by permuting the edges,
sliding ``(m, n, k) ~ (m+1, n+1, k+1)`` and global inversion; every orbit
has exactly one representative ``(m, n, 0)`` with ``0 <= 2n <= m``.  All
twelve symmetries act with sign +1.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Iterator, Mapping

from .laurent import ONE, LaurentPoly, eval_one, format_poly, involute, parse, ParseError

Key = tuple[int, int]


def group_images(m: int, n: int, k: int) -> Iterator[tuple[int, int, int]]:
    """All twelve images of an exponent triple (with repetitions)."""
    for sign in (1, -1):
        for a, b, c in permutations((m, n, k)):
            yield sign * a, sign * b, sign * c


def _in_region(m: int, n: int) -> bool:
    return 0 <= 2 * n <= m


@lru_cache(maxsize=None)
def canonical_pair(m: int, n: int, k: int = 0) -> Key:
    """Orbit representative ``(m', n')`` with ``0 <= 2n' <= m'``."""
    found = {(a - c, b - c) for a, b, c in group_images(m, n, k) if _in_region(a - c, b - c)}
    if len(found) != 1:
        raise AssertionError(f"orbit of {(m, n, k)} meets the fundamental region in {sorted(found)}")
    return found.pop()


def orbit(m: int, n: int, k: int = 0) -> set[Key]:
    """Brute-force orbit in the sliding-normalized plane ``k = 0``."""
    return {(a - c, b - c) for a, b, c in group_images(m, n, k)}


def _coerce_coeff(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"exact coefficient required, got {type(c).__name__}")


class ThetaElement:
    """Element of the 2-loop space: canonical keys ``(m, n)`` to rationals.

    ``delta`` is the common denominator of the edge colors.  It only matters
    for the hair map and for evaluation at ``t = 1``; integrality questions
    are answered on the numerators alone.
    """

    __slots__ = ("_coeffs", "delta")

    def __init__(self, coeffs: Mapping[Key, object] | None = None, delta: LaurentPoly = ONE):
        clean = {}
        for key, c in (coeffs or {}).items():
            m, n = key
            if not _in_region(m, n):
                raise ValueError(f"non-canonical key {key}")
            c = _coerce_coeff(c)
            if c:
                clean[(int(m), int(n))] = c
        self._coeffs = dict(sorted(clean.items()))
        if delta.is_zero():
            raise ValueError("denominator must be nonzero")
        self.delta = delta

    @classmethod
    def basis(cls, m: int, n: int, coeff=1, delta: LaurentPoly = ONE) -> "ThetaElement":
        """``coeff * θ(t^m, t^n)`` for any exponents (canonicalized)."""
        return cls({canonical_pair(m, n, 0): coeff}, delta)

    @classmethod
    def zero(cls, delta: LaurentPoly = ONE) -> "ThetaElement":
        return cls({}, delta)

    @property
    def coeffs(self) -> dict[Key, Fraction]:
        return dict(self._coeffs)

    def items(self):
        return self._coeffs.items()

    def coeff(self, m: int, n: int) -> Fraction:
        return self._coeffs.get((m, n), Fraction(0))

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def _common_delta(self, other: "ThetaElement") -> LaurentPoly:
        if self.delta == other.delta:
            return self.delta
        if not other._coeffs:
            return self.delta
        if not self._coeffs:
            return other.delta
        raise ValueError(f"denominator mismatch: {self.delta} vs {other.delta}")

    def __add__(self, other: "ThetaElement") -> "ThetaElement":
        if not isinstance(other, ThetaElement):
            return NotImplemented
        try:
            delta = self._common_delta(other)
        except ValueError:
            # denominators differing by a unit ±t^k are re-expressed over ours
            other = other.with_delta(self.delta)
            delta = self.delta
        out = dict(self._coeffs)
        for k, c in other._coeffs.items():
            out[k] = out.get(k, 0) + c
        return ThetaElement(out, delta)

    def __neg__(self) -> "ThetaElement":
        return ThetaElement({k: -c for k, c in self._coeffs.items()}, self.delta)

    def __sub__(self, other: "ThetaElement") -> "ThetaElement":
        return self + (-other)

    def __mul__(self, c) -> "ThetaElement":
        if isinstance(c, ThetaElement):
            return NotImplemented
        c = _coerce_coeff(c)
        return ThetaElement({k: c * v for k, v in self._coeffs.items()}, self.delta)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, ThetaElement):
            return NotImplemented
        if self._coeffs != other._coeffs:
            return False
        return not self._coeffs or self.delta == other.delta

    def __hash__(self):
        return hash(tuple(self._coeffs.items()))

    def with_delta(self, delta: LaurentPoly) -> "ThetaElement":
        """Re-express over ``delta = u * self.delta`` for a unit ``u = ±t^k``.

        Clearing with ``u`` multiplies each numerator triple by ``u⊗u⊗u``;
        the ``t^k`` part slides away and the sign enters cubed.
        """
        if delta == self.delta:
            return self
        from .laurent import exact_div, NotDivisible
        try:
            u = exact_div(delta, self.delta)
        except NotDivisible:
            raise ValueError(f"{delta} is not a unit multiple of {self.delta}") from None
        if not u.is_unit():
            raise ValueError(f"{delta} is not a unit multiple of {self.delta}")
        sign = next(iter(u.terms.values()))
        return ThetaElement({k: sign * c for k, c in self._coeffs.items()}, delta)

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*θ({m},{n})" for (m, n), c in self._coeffs.items()) or "0"
        if self.delta != ONE:
            return f"ThetaElement({body}; Δ={format_poly(self.delta)})"
        return f"ThetaElement({body})"


def from_theta(p: LaurentPoly, q: LaurentPoly, r: LaurentPoly, delta: LaurentPoly = ONE) -> ThetaElement:
    """Trilinear expansion of the numerator triple ``p ⊗ q ⊗ r``."""
    out: dict[Key, Fraction] = {}
    for a, ca in p.items():
        for b, cb in q.items():
            cab = ca * cb
            for c, cc in r.items():
                key = canonical_pair(a, b, c)
                out[key] = out.get(key, 0) + cab * cc
    return ThetaElement(out, delta)


def theta_class(delta: LaurentPoly = ONE) -> ThetaElement:
    """The uncolored theta graph: every edge colored ``1 = Δ/Δ``."""
    return from_theta(delta, delta, delta, delta)


def reduce_dumbbell(p: LaurentPoly, r: LaurentPoly, q: LaurentPoly, delta: LaurentPoly = ONE) -> ThetaElement:
    """Rewrite the dumbbell with loops ``p/Δ``, ``q/Δ`` and bar ``r/Δ``.

    The bar contributes only its value at ``t = 1`` (a ``t - 1`` factor slides
    off); IHX then gives ``θ(p/Δ, (q̄ - q)/Δ)`` with the third edge
    colored 1.  Orientation conventions: the bar runs from the ``p`` loop to
    the ``q`` loop, and at each end the cyclic order is (bar, outgoing loop
    end, incoming loop end).
    """
    scale = eval_one(r) / eval_one(delta)
    if not scale:
        return ThetaElement.zero(delta)
    return from_theta(p, involute(q) - q, delta, delta) * scale


def degree(x: ThetaElement) -> int:
    if x.is_zero():
        raise ValueError("degree of the zero element is undefined")
    return max(m for m, _ in x._coeffs)


def in_lattice(x: ThetaElement, k: int) -> bool:
    """Whether ``x`` lies in ``(1/k)`` times the integer lattice."""
    if k == 0:
        raise ValueError("k must be nonzero")
    return all((k * c).denominator == 1 for c in x._coeffs.values())


def eval_t_one(x: ThetaElement) -> Fraction:
    """Coefficient of the uncolored theta graph after setting ``t = 1``."""
    d = eval_one(x.delta)
    if not d:
        raise ValueError("denominator vanishes at t = 1")
    return sum(x._coeffs.values(), Fraction(0)) / d ** 3


def _bezout(values: list[int]) -> tuple[int, list[int]]:
    """gcd g and integers u with sum(u_i * v_i) == g."""
    g, coeffs = 0, []
    for v in values:
        # extended Euclid of (g, v)
        old_r, r = g, v
        old_s, s = 1, 0
        old_t, t = 0, 1
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
            old_t, t = t, old_t - q * t
        if old_r < 0:
            old_r, old_s, old_t = -old_r, -old_s, -old_t
        coeffs = [c * old_s for c in coeffs] + [old_t]
        g = old_r
    return g, coeffs


def in_lattice_mod_theta(x: ThetaElement, k: int) -> bool:
    """Whether ``x ∈ (1/k)·lattice + Q·Θ`` with Θ the uncolored theta class."""
    if k == 0:
        raise ValueError("k must be nonzero")
    th = theta_class(x.delta)
    keys = sorted(set(th._coeffs) | set(x._coeffs))
    tv = [int(th.coeff(*key)) for key in keys]
    xv = [k * x.coeff(*key) for key in keys]
    g, u = _bezout(tv)
    if g == 0:
        return in_lattice(x, k)
    # the multiple of Θ is forced modulo integers: γ·(Θ/g) ≡ k·x
    gamma = sum((ui * xi for ui, xi in zip(u, xv)), Fraction(0))
    return all((gamma * (ti // g) - xi).denominator == 1 for ti, xi in zip(tv, xv))


def mod2_mod_theta(x: ThetaElement) -> ThetaElement:
    """Canonical representative of an integral ``x`` in ``lattice / (2·lattice + Z·Θ)``.

    Coefficients are reduced to {0, 1}; the Θ ambiguity is fixed by forcing
    the coefficient at the first key of ``Θ mod 2`` to vanish.
    """
    if not in_lattice(x, 1):
        raise ValueError("mod-2 reduction needs integer coefficients")
    red = {key: c.numerator % 2 for key, c in x._coeffs.items()}
    th = {key: c.numerator % 2 for key, c in theta_class(x.delta)._coeffs.items() if c.numerator % 2}
    if th:
        pivot = min(th)
        if red.get(pivot, 0):
            for key in th:
                red[key] = (red.get(key, 0) + 1) % 2
    return ThetaElement(red, x.delta)


# --- hair map ----------------------------------------------------------------

class BiSeries:
    """Truncated power series in two commuting variables ``a, b``."""

    __slots__ = ("terms", "degree")

    def __init__(self, terms: Mapping[tuple[int, int], Fraction], degree: int):
        self.degree = degree
        self.terms = {k: Fraction(c) for k, c in terms.items() if c and k[0] + k[1] <= degree}

    def __add__(self, other: "BiSeries") -> "BiSeries":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return BiSeries(out, min(self.degree, other.degree))

    def __mul__(self, other):
        if isinstance(other, BiSeries):
            d = min(self.degree, other.degree)
            out: dict[tuple[int, int], Fraction] = {}
            for (i, j), c in self.terms.items():
                for (k, l), e in other.terms.items():
                    if i + j + k + l <= d:
                        out[(i + k, j + l)] = out.get((i + k, j + l), 0) + c * e
            return BiSeries(out, d)
        c = Fraction(other)
        return BiSeries({k: c * v for k, v in self.terms.items()}, self.degree)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, BiSeries) and self.degree == other.degree and self.terms == other.terms

    def coeff(self, i: int, j: int) -> Fraction:
        return self.terms.get((i, j), Fraction(0))


def exp_linear(p: int, q: int, degree: int) -> BiSeries:
    """``exp(p·a + q·b)`` truncated at total degree ``degree``."""
    out = {}
    for d in range(degree + 1):
        fact = math.factorial(d)
        for i in range(d + 1):
            j = d - i
            out[(i, j)] = Fraction(math.comb(d, i) * p ** i * q ** j, fact)
    return BiSeries(out, degree)


def _inverse(s: BiSeries) -> BiSeries:
    c0 = s.coeff(0, 0)
    if not c0:
        raise ValueError("series with zero constant term is not invertible")
    # 1/s = (1/c0) * sum (1 - s/c0)^k
    u = BiSeries({(0, 0): 1}, s.degree)
    x = BiSeries({k: -v / c0 for k, v in s.terms.items() if k != (0, 0)}, s.degree)
    total = u
    power = u
    for _ in range(s.degree):
        power = power * x
        total = total + power
    return total * (1 / c0)


def _poly_exp(p: LaurentPoly, x: int, y: int, degree: int) -> BiSeries:
    """``p(exp(x·a + y·b))``."""
    out = BiSeries({}, degree)
    for k, c in p.items():
        out = out + exp_linear(k * x, k * y, degree) * c
    return out


def hair(x: ThetaElement, degree: int) -> BiSeries:
    """Image under ``t -> exp(h)`` in the completed polynomial ring on H^1(Θ).

    The three edge classes map to ``a``, ``b`` and ``-a-b``; each canonical
    monomial is summed over its twelve images and the whole thing is divided
    by ``Δ(e^a)Δ(e^b)Δ(e^{-a-b})``.
    """
    if degree < 0:
        raise ValueError("truncation degree must be nonnegative")
    # collect the exponent vectors first, then expand each exponential once
    weights: dict[tuple[int, int], Fraction] = {}
    for (m, n), c in x.items():
        for a, b, k in group_images(m, n, 0):
            v = (a - k, b - k)
            weights[v] = weights.get(v, 0) + c
    out: dict[tuple[int, int], Fraction] = {}
    for d in range(degree + 1):
        fact = math.factorial(d)
        for i in range(d + 1):
            binom = math.comb(d, i)
            s = sum((w * p ** i * q ** (d - i) for (p, q), w in weights.items()), Fraction(0))
            if s:
                out[(i, d - i)] = s * binom / fact
    total = BiSeries(out, degree)
    if x.delta != ONE:
        den = _poly_exp(x.delta, 1, 0, degree) * _poly_exp(x.delta, 0, 1, degree) * _poly_exp(x.delta, -1, -1, degree)
        total = total * _inverse(den)
    return total


def rank(rows: list[list[Fraction]]) -> int:
    """Exact rank (fraction-free elimination on integer-scaled rows)."""
    a = []
    for r in rows:
        r = [Fraction(v) for v in r]
        den = math.lcm(*(v.denominator for v in r)) if r else 1
        a.append([int(v * den) for v in r])
    rk = 0
    ncols = len(a[0]) if a else 0
    for col in range(ncols):
        piv = next((i for i in range(rk, len(a)) if a[i][col]), None)
        if piv is None:
            continue
        a[rk], a[piv] = a[piv], a[rk]
        p = a[rk]
        for i in range(rk + 1, len(a)):
            f = a[i][col]
            if f:
                row = [p[col] * u - f * v for u, v in zip(a[i], p)]
                g = math.gcd(*row)
                a[i] = [v // g for v in row] if g > 1 else row
        rk += 1
    return rk


def basis_keys(max_degree: int) -> list[Key]:
    return [(m, n) for m in range(max_degree + 1) for n in range(m // 2 + 1)]


# --- text format ---------------------------------------------------------------

def format_theta(x: ThetaElement) -> str:
    """One ``m n coefficient`` line per term, sorted by ``(m, n)``."""
    lines = []
    if x.delta != ONE:
        lines.append(f"# delta: {format_poly(x.delta)}")
    lines.extend(f"{m} {n} {c}" for (m, n), c in x.items())
    return "\n".join(lines) + ("\n" if lines else "")


def parse_theta(text: str) -> ThetaElement:
    delta = ONE
    out: dict[Key, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("delta:"):
                try:
                    delta = parse(body[len("delta:"):])
                except ParseError as e:
                    raise e.at_line(lineno, raw.index("delta:") + len("delta:")) from None
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError("expected 'm n coefficient'", 1, lineno)
        try:
            m, n = int(parts[0]), int(parts[1])
            c = Fraction(parts[2])
        except ValueError:
            raise ParseError(f"bad number in {line!r}", 1, lineno) from None
        key = canonical_pair(m, n, 0)
        out[key] = out.get(key, 0) + c
    return ThetaElement(out, delta)


def theta_sum(items: Iterable[ThetaElement], delta: LaurentPoly = ONE) -> ThetaElement:
    total = ThetaElement.zero(delta)
    for x in items:
        total = total + x
    return total
