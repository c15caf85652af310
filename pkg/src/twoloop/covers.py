"""Arithmetic of r-fold cyclic branched covers.

For a knot with normalized Alexander polynomial Δ, the cover's Alexander
polynomial Δ_r has as roots the r-th powers of the roots of Δ.  Δ divides
Δ_r(t^r) and the quotient has integer coefficients (Gauss's lemma on
contents), which lets ``1/Δ`` be rewritten over ``Δ_r(t^r)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .laurent import LaurentPoly, eval_one, exact_div, format_poly, power_roots
from .theta import ThetaElement, canonical_pair, eval_t_one, in_lattice


@dataclass(frozen=True)
class CoverData:
    delta: LaurentPoly
    r: int
    delta_r: LaurentPoly
    quotient: LaurentPoly
    sigma_r: Fraction | None = None

    @property
    def zhs_cover(self) -> bool:
        """The cover is an integer homology sphere iff ``Δ_r(1) = ±1``."""
        return abs(eval_one(self.delta_r)) == 1

    def summary(self) -> str:
        lines = [
            f"delta_r: {format_poly(self.delta_r)}",
            f"quotient: {format_poly(self.quotient)}",
            f"zhs_cover: {'yes' if self.zhs_cover else 'no'}",
        ]
        if self.sigma_r is not None:
            lines.append(f"sigma_r: {self.sigma_r}")
        return "\n".join(lines)


def _check(delta: LaurentPoly, r: int) -> None:
    if r <= 0:
        raise ValueError("r must be positive")
    if abs(eval_one(delta)) != 1:
        raise ValueError("Δ(1) must be ±1")


def cover_alexander(delta: LaurentPoly, r: int) -> LaurentPoly:
    _check(delta, r)
    return power_roots(delta, r)


def cover_quotient(delta: LaurentPoly, r: int, delta_r: LaurentPoly | None = None) -> LaurentPoly:
    """``P`` with ``Δ_r(t^r) = P · Δ``; always integral for normalized inputs."""
    dr = cover_alexander(delta, r) if delta_r is None else delta_r
    p = exact_div(dr.substitute_power(r), delta)
    if not p.is_integral():
        raise ArithmeticError(f"quotient {format_poly(p)} is not integral")
    return p


def cover_data(delta: LaurentPoly, r: int, sigma_r=None) -> CoverData:
    dr = cover_alexander(delta, r)
    return CoverData(delta, r, dr, cover_quotient(delta, r, dr),
                     None if sigma_r is None else Fraction(sigma_r))


LiftStrategy = Callable[[ThetaElement, LaurentPoly, int], ThetaElement]


def default_lift(x: ThetaElement, delta: LaurentPoly, r: int) -> ThetaElement:
    """Rewrite the denominators over ``Δ_r(t^r)`` and keep r-divisible exponents.

    A key ``(m, n)`` of ``x`` stands for the numerator triple
    ``(t^m, t^n, 1)`` over Δ.  Each edge is multiplied by ``P``; a monomial
    triple ``(a, b, c)`` survives when ``r`` divides ``a - c`` and ``b - c``
    and then becomes ``((a - c)/r, (b - c)/r)`` over ``Δ_r``.
    """
    if not x.is_zero():
        x = x.with_delta(delta)
    dr = cover_alexander(delta, r)
    p = cover_quotient(delta, r, dr)
    terms = list(p.items())
    out: dict = {}
    for (m, n), coeff in x.items():
        for ea, ca in terms:
            for eb, cb in terms:
                for ec, cc in terms:
                    a, b, c = m + ea, n + eb, ec
                    if (a - c) % r or (b - c) % r:
                        continue
                    key = canonical_pair((a - c) // r, (b - c) // r, 0)
                    out[key] = out.get(key, 0) + coeff * ca * cb * cc
    return ThetaElement(out, dr)


@dataclass(frozen=True)
class ResidueVerdict:
    value: Fraction
    r: int

    @property
    def divisible(self) -> bool:
        q = self.value / self.r
        return q.denominator == 1


def casson_residue(x: ThetaElement, delta: LaurentPoly, r: int,
                   lift: LiftStrategy = default_lift) -> ResidueVerdict:
    """``2 · lift_r(x)|_{t=1}`` and whether ``r`` divides it.

    ``x`` is the difference of the 2-loop parts of two S-equivalent pairs,
    which must lie in ½𝓘.
    """
    _check(delta, r)
    if not in_lattice(x, 2):
        raise ValueError("x must lie in the half-integer lattice")
    return ResidueVerdict(2 * eval_t_one(lift(x, delta, r)), r)
