"""Truncated formal series in noncommuting generators.

Words are tuples of generator indices; a series of truncation degree ``D``
never stores a word longer than ``D``.  Used to check the tangle identity
``Z(T) = exp([a, b])`` and the generalized Campbell-Hausdorff operator that
glues elementary links along one component.
"""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations
from typing import Mapping

Word = tuple[int, ...]


class NCSeries:
    __slots__ = ("terms", "degree")

    def __init__(self, terms: Mapping[Word, object], degree: int):
        if degree < 0:
            raise ValueError("truncation degree must be nonnegative")
        self.degree = degree
        self.terms: dict[Word, Fraction] = {}
        for w, c in terms.items():
            c = Fraction(c)
            if c and len(w) <= degree:
                self.terms[tuple(w)] = c

    @classmethod
    def one(cls, degree: int) -> "NCSeries":
        return cls({(): 1}, degree)

    @classmethod
    def zero(cls, degree: int) -> "NCSeries":
        return cls({}, degree)

    @classmethod
    def gen(cls, i: int, degree: int, coeff=1) -> "NCSeries":
        return cls({(i,): coeff}, degree)

    def _check(self, other: "NCSeries") -> None:
        if self.degree != other.degree:
            raise ValueError(f"truncation mismatch: {self.degree} vs {other.degree}")

    def constant(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def __add__(self, other: "NCSeries") -> "NCSeries":
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return NCSeries(out, self.degree)

    def __neg__(self) -> "NCSeries":
        return NCSeries({w: -c for w, c in self.terms.items()}, self.degree)

    def __sub__(self, other: "NCSeries") -> "NCSeries":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, NCSeries):
            return nc_mul(self, other)
        c = Fraction(other)
        return NCSeries({w: c * v for w, v in self.terms.items()}, self.degree)

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other) -> bool:
        return isinstance(other, NCSeries) and self.degree == other.degree and self.terms == other.terms

    def homogeneous(self, d: int) -> "NCSeries":
        return NCSeries({w: c for w, c in self.terms.items() if len(w) == d}, self.degree)

    def __repr__(self) -> str:
        return f"NCSeries({format_series(self)}, D={self.degree})"


def nc_mul(x: NCSeries, y: NCSeries) -> NCSeries:
    x._check(y)
    d = x.degree
    out: dict[Word, Fraction] = {}
    for u, a in x.terms.items():
        room = d - len(u)
        for v, b in y.terms.items():
            if len(v) <= room:
                w = u + v
                out[w] = out.get(w, 0) + a * b
    return NCSeries(out, d)


def bracket(x: NCSeries, y: NCSeries) -> NCSeries:
    return nc_mul(x, y) - nc_mul(y, x)


def nc_exp(x: NCSeries) -> NCSeries:
    if x.constant():
        raise ValueError("nc_exp needs a series with zero constant term")
    total = NCSeries.one(x.degree)
    power = total
    for k in range(1, x.degree + 1):
        power = nc_mul(power, x) * Fraction(1, k)
        total = total + power
    return total


def nc_log(x: NCSeries) -> NCSeries:
    if x.constant() != 1:
        raise ValueError("nc_log needs a series with constant term 1")
    y = x - NCSeries.one(x.degree)
    total = NCSeries.zero(x.degree)
    power = NCSeries.one(x.degree)
    for k in range(1, x.degree + 1):
        power = nc_mul(power, y)
        total = total + power * Fraction((-1) ** (k + 1), k)
    return total


def abelianize(x: NCSeries) -> NCSeries:
    """Image in the commutative quotient: each word is sorted."""
    out: dict[Word, Fraction] = {}
    for w, c in x.terms.items():
        s = tuple(sorted(w))
        out[s] = out.get(s, 0) + c
    return NCSeries(out, x.degree)


def format_series(x: NCSeries, names: str | None = None) -> str:
    if not x.terms:
        return "0"

    def word(w):
        if not w:
            return "1"
        if names and max(w) < len(names):
            return "".join(names[i] for i in w)
        return "*".join(f"a{i + 1}" for i in w)

    items = sorted(x.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))
    return " + ".join(f"{c}*{word(w)}" for w, c in items)


# --- the tangle T and the associator -----------------------------------------

A, B = 0, 1


def tangle_product(degree: int = 3, associator: bool = True) -> NCSeries:
    """The 13-factor product computing ``Z(T)`` with ``Φ = exp([a,b]/24)``."""
    a = NCSeries.gen(A, degree)
    b = NCSeries.gen(B, degree)
    ab = bracket(a, b)
    phi = nc_exp(ab * Fraction(1, 24)) if associator else NCSeries.one(degree)
    phi_inv = nc_exp(ab * Fraction(-1, 24)) if associator else NCSeries.one(degree)
    h = Fraction(1, 2)
    factors = [
        nc_exp(b * -h), phi, nc_exp(a * h), phi_inv,
        nc_exp(b), phi, nc_exp(-a), phi_inv,
        nc_exp(-b), phi, nc_exp(a * h), phi_inv,
        nc_exp(b * h),
    ]
    out = NCSeries.one(degree)
    for f in factors:
        out = nc_mul(out, f)
    return out


def zt_identity_check(degree: int = 3) -> bool:
    """True iff ``log Z(T) == [a, b]`` exactly up to ``degree``."""
    a = NCSeries.gen(A, degree)
    b = NCSeries.gen(B, degree)
    return nc_log(tangle_product(degree)) == bracket(a, b)


# --- generalized Campbell-Hausdorff operator ----------------------------------

def bch_exponent(p: int, degree: int = 3) -> NCSeries:
    """The Lie series inside ``H(a_1, ..., a_p)``, generators ``0..p-1``."""
    if p < 1:
        raise ValueError("arity must be at least 1")
    g = [NCSeries.gen(i, degree) for i in range(p)]
    total = NCSeries.zero(degree)
    for x in g:
        total = total + x
    half, sixth, twelfth = Fraction(1, 2), Fraction(1, 6), Fraction(1, 12)
    for i, j in combinations(range(p), 2):
        total = total + bracket(g[i], g[j]) * half
        total = total + bracket(g[i], bracket(g[i], g[j])) * twelfth
        total = total + bracket(g[j], bracket(g[j], g[i])) * twelfth
    for i, j, k in combinations(range(p), 3):
        total = total + bracket(g[i], bracket(g[j], g[k])) * sixth
        total = total + bracket(bracket(g[i], g[j]), g[k]) * sixth
    return total


def bch_operator(p: int, degree: int = 3) -> NCSeries:
    if degree < 3:
        raise ValueError("the operator is defined through degree 3")
    return nc_exp(bch_exponent(p, degree))


def ordered_exp_product(p: int, degree: int = 3) -> NCSeries:
    """``exp(a_1) exp(a_2) ... exp(a_p)`` truncated at ``degree``."""
    out = NCSeries.one(degree)
    for i in range(p):
        out = nc_mul(out, nc_exp(NCSeries.gen(i, degree)))
    return out
