"""The map φ_n from monomial hermitian matrices to the 2-loop space.

A matrix ``W`` in the class 𝓜_n (entries 0 or ±t^k, diagonal ±1,
``det W(1) = ±1``) stands for a surgery presentation of a knot in a
homology sphere.  :func:`phi` assembles the exponent of the rational
invariant of the presentation link, multiplies by the framing factor,
integrates against ``-W^-1`` and reports integrality verdicts.
"""
from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .contraction import (
    DiagramExponent,
    LeggedDiagram,
    PairingMatrix,
    hgraph,
    integrate,
    invert_hermitian,
    strut,
    tripod,
    wheel2,
)
from .laurent import ONE, ZERO, LaurentPoly, ParseError, determinant, eval_one, format_poly, involute, parse
from .theta import ThetaElement, eval_t_one, in_lattice, theta_class

WORKERS_ENV = "TWOLOOP_WORKERS"


class MatrixError(ValueError):
    """The matrix is not in the class 𝓜_n."""


@dataclass(frozen=True)
class MonomialMatrix:
    entries: tuple[tuple[LaurentPoly, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.entries)
        object.__setattr__(self, "entries", rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise MatrixError("matrix must be square and nonempty")
        for i in range(n):
            if rows[i][i] not in (ONE, -ONE):
                raise MatrixError(f"diagonal entry ({i + 1},{i + 1}) must be ±1, got {rows[i][i]}")
            for j in range(n):
                x = rows[i][j]
                if not x.is_zero() and not x.is_unit():
                    raise MatrixError(f"entry ({i + 1},{j + 1}) is not 0 or ±t^k: {x}")
                if rows[j][i] != involute(x):
                    raise MatrixError(f"matrix is not hermitian at ({i + 1},{j + 1})")
        if abs(eval_one(determinant(rows))) != 1:
            raise MatrixError("det W(1) must be ±1")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "MonomialMatrix":
        return cls(tuple(tuple(x if isinstance(x, LaurentPoly) else parse(str(x)) for x in r) for r in rows))

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij) -> LaurentPoly:
        i, j = ij
        return self.entries[i][j]

    @property
    def framings(self) -> tuple[int, ...]:
        return tuple(int(eval_one(self.entries[i][i])) for i in range(self.n))

    def delta(self) -> LaurentPoly:
        return determinant(self.entries)

    def at_one(self) -> list[list[Fraction]]:
        return [[eval_one(x) for x in r] for r in self.entries]

    def digest(self) -> str:
        return "[" + "|".join(";".join(format_poly(x) for x in r) for r in self.entries) + "]"

    def permuted(self, perm: Sequence[int]) -> "MonomialMatrix":
        """Entry ``(i, j)`` of the result is entry ``(perm[i], perm[j])``."""
        return MonomialMatrix(tuple(tuple(self.entries[a][b] for b in perm) for a in perm))

    def canonical(self) -> "MonomialMatrix":
        """The relabeling whose row-by-row entry texts are lexicographically least.

        Labels fix the orientation of the tripod terms, so φ is evaluated on
        this representative to make it independent of component order.
        """
        text = [[format_poly(x) for x in r] for r in self.entries]
        best = min(itertools.permutations(range(self.n)),
                   key=lambda perm: [text[a][b] for a in perm for b in perm])
        return self.permuted(best)

    def conjugated(self, shifts: Sequence[int]) -> "MonomialMatrix":
        """``diag(t^a) · W · diag(t^-a)``."""
        return MonomialMatrix(tuple(
            tuple(self.entries[i][j].shift(shifts[i] - shifts[j]) for j in range(self.n))
            for i in range(self.n)))

    def stabilized(self, sign: int) -> "MonomialMatrix":
        n = self.n
        rows = [list(r) + [ZERO] for r in self.entries]
        rows.append([ZERO] * n + [LaurentPoly.const(sign)])
        return MonomialMatrix(tuple(tuple(r) for r in rows))


def format_matrix(w: MonomialMatrix) -> str:
    lines = [str(w.n)] + ["; ".join(format_poly(x) for x in r) for r in w.entries]
    return "\n".join(lines) + "\n"


def parse_matrix_rows(text: str) -> list[list[LaurentPoly]]:
    """Line 1 is ``n``; then ``n`` lines of ``;``-separated polynomials."""
    lines = [(no, ln) for no, ln in enumerate(text.splitlines(), 1)
             if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ParseError("empty matrix file")
    first_no, first = lines[0]
    try:
        n = int(first)
    except ValueError:
        raise ParseError(f"expected the size n, got {first.strip()!r}", 1, first_no) from None
    if n < 1 or len(lines) != n + 1:
        raise ParseError(f"expected {n} matrix rows, got {len(lines) - 1}")
    rows = []
    for no, line in lines[1:]:
        cells = line.split(";")
        if len(cells) != n:
            raise ParseError(f"expected {n} entries, got {len(cells)}", None, no)
        row = []
        col = 1
        for cell in cells:
            try:
                row.append(parse(cell))
            except ParseError as exc:
                raise exc.at_line(no, col - 1) from None
            col += len(cell) + 1
        rows.append(row)
    return rows


def parse_matrix(text: str) -> MonomialMatrix:
    return MonomialMatrix.from_rows(parse_matrix_rows(text))


# --- exponent assembly --------------------------------------------------------

def _abs(w: LaurentPoly) -> LaurentPoly:
    """``|ε t^k| = t^k``."""
    (k, _), = w.terms.items()
    return LaurentPoly.monomial(k)


def _sign(w: LaurentPoly) -> int:
    (_, c), = w.terms.items()
    return 1 if c > 0 else -1


def elementary_link_term(eps: int, a: int, b: int) -> DiagramExponent:
    """Exponent of an elementary link between components ``a`` and ``b``."""
    if eps not in (1, -1):
        raise ValueError("ε must be ±1")
    return DiagramExponent((
        strut(a, b, ONE, eps),
        wheel2(a, b, ONE, Fraction(eps * eps, 8)),
        hgraph(a, b, ONE, Fraction(eps + 2 * eps ** 3, 24)),
    ))


def build_exponent(w: MonomialMatrix) -> DiagramExponent:
    n = w.n
    terms: list[LeggedDiagram] = []
    for i in range(n):
        for j in range(i, n):
            if not w[i, j].is_zero():
                terms.append(strut(i, j, w[i, j]))
    for i in range(n):
        terms.append(wheel2(i, i, ONE, Fraction(1, 48)))
    for i, j in itertools.combinations(range(n), 2):
        x = w[i, j]
        if x.is_zero():
            continue
        terms.append(wheel2(i, j, _abs(x), Fraction(1, 8)))
        # the sign of w_ij is a scalar; its monomial part colors both j legs
        terms.append(hgraph(i, j, _abs(x), Fraction(_sign(x), 8)))
    for i in range(n):
        others = [j for j in range(n) if j != i]
        for j, k in itertools.combinations(others, 2):
            if w[i, j].is_zero() or w[i, k].is_zero():
                continue
            terms.append(tripod([(i, ONE), (j, w[i, j]), (k, w[i, k])], Fraction(1, 2)))
    return DiagramExponent(tuple(terms))


def signature(rows: Sequence[Sequence[Fraction]]) -> int:
    """Signature of a symmetric rational matrix by congruence diagonalization."""
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    if any(a[i][j] != a[j][i] for i in range(n) for j in range(n)):
        raise ValueError("matrix is not symmetric")
    sig = 0
    size = n
    while size:
        p = next((i for i in range(size) if a[i][i] != 0), None)
        if p is None:
            q = next(((i, j) for i in range(size) for j in range(i + 1, size) if a[i][j] != 0), None)
            if q is None:
                break
            i, j = q
            # replace e_i by e_i + e_j: the new diagonal entry is 2 a_ij
            for k in range(size):
                a[i][k] += a[j][k]
            for k in range(size):
                a[k][i] += a[k][j]
            p = i
        # move the pivot to the end and eliminate
        last = size - 1
        a[p], a[last] = a[last], a[p]
        for r in a:
            r[p], r[last] = r[last], r[p]
        piv = a[last][last]
        sig += 1 if piv > 0 else -1
        for i in range(last):
            f = a[i][last] / piv
            if f:
                for k in range(last):
                    a[i][k] -= f * a[last][k]
        size = last
    return sig


@dataclass(frozen=True)
class FramingFactor:
    exponent: DiagramExponent
    theta_coefficient: Fraction
    sigma: int


def framing_factor(w: MonomialMatrix) -> FramingFactor:
    n = w.n
    fr = w.framings
    terms: list[LeggedDiagram] = []
    for i in range(n):
        terms.append(strut(i, i, ONE, Fraction(fr[i], 2)))
        for j in range(n):
            if j != i and not w[i, j].is_zero():
                terms.append(wheel2(i, j, w[i, j], Fraction(fr[i], 24)))
        terms.append(wheel2(i, i, ONE, Fraction(fr[i] ** 2 + 1, 48)))
    sigma = signature(w.at_one())
    return FramingFactor(DiagramExponent(tuple(terms)), Fraction(sigma, 16), sigma)


def wheeling_exponent(w: int, links: Sequence, theta) -> dict:
    """Leg calculus for the framing change on one component ``i``.

    Computes the exponent of ``∂_Ω(∂_Ω^-1(Z') · exp(w/2 s_ii + ω_ii/48 + θ·Θ))``
    with ``Ω = exp(ω/48)`` and ``Z' = exp(Σ_j links[j] s_ij)``, keeping
    terms of loop degree at most 2.  Gluing a 2-wheel to two ``i`` legs acts
    as a second derivative in the ``i`` leg variable: on ``exp(Q)`` it yields
    the wheel ``ω(Q', Q')`` plus ``Q''`` times the theta graph, and legged
    2-loop pieces are dropped.

    Keys of the result: ``("wheel", a, b)`` with legs ``a <= b`` among
    ``"i"`` and the indices of ``links``, and ``"theta"``.
    """
    alpha = Fraction(1, 48)
    out: dict = {}

    def add_wheel(form_a: dict, form_b: dict, c: Fraction) -> None:
        for a, ca in form_a.items():
            for b, cb in form_b.items():
                key = ("wheel",) + tuple(sorted((a, b), key=str))
                out[key] = out.get(key, 0) + c * ca * cb

    a_form = {j: Fraction(x) for j, x in enumerate(links) if x}
    q_prime = dict(a_form)
    if w:
        q_prime["i"] = Fraction(w)
    # ∂_Ω^-1 leaves exp(x·A) times exp(-ω(A, A)/48): A carries no i leg
    add_wheel(a_form, a_form, -alpha)
    add_wheel({"i": 1}, {"i": 1}, alpha)
    # ∂_Ω on exp(w x^2/2 + x A)
    add_wheel(q_prime, q_prime, alpha)
    out["theta"] = Fraction(theta) + alpha * w
    return {k: v for k, v in out.items() if v}


# --- integration and verdicts ------------------------------------------------------

@dataclass(frozen=True)
class Verdicts:
    value: ThetaElement
    in_twelfth: bool
    in_half: bool
    casson: Fraction

    @property
    def casson_integral(self) -> bool:
        return self.casson.denominator == 1


def integrate_exponent(exponent: DiagramExponent, winv: PairingMatrix) -> ThetaElement:
    """2-loop part of ``∫ exp(exponent)``; struts form the Gaussian and are dropped."""
    total = ThetaElement.zero(winv.delta)
    for d in exponent:
        if d.shape in ("wheel2", "hgraph"):
            total = total + integrate([d], winv)
    tripods = exponent.of_shape("tripod")
    for a, da in enumerate(tripods):
        total = total + integrate([da, da], winv) * Fraction(1, 2)
        for db in tripods[a + 1:]:
            total = total + integrate([da, db], winv)
    return total


def phi_value(w: MonomialMatrix) -> ThetaElement:
    w = w.canonical()
    winv = invert_hermitian(w.entries)
    ff = framing_factor(w)
    value = integrate_exponent(build_exponent(w) + ff.exponent, winv)
    return value + theta_class(winv.delta) * ff.theta_coefficient


def verdicts(value: ThetaElement) -> Verdicts:
    return Verdicts(value, in_lattice(value, 12), in_lattice(value, 2), 2 * eval_t_one(value))


def phi(w: MonomialMatrix) -> Verdicts:
    return verdicts(phi_value(w))


# --- enumeration and scanning -----------------------------------------------------

def _offdiag_choices(max_exp: int) -> list[LaurentPoly]:
    out = [ZERO]
    for k in range(-max_exp, max_exp + 1):
        out.append(LaurentPoly.monomial(k, 1))
        out.append(LaurentPoly.monomial(k, -1))
    return out


def enumerate_matrices(n: int, max_exp: int) -> Iterator[MonomialMatrix]:
    """All of 𝓜_n with exponents in ``[-max_exp, max_exp]``, in a fixed order.

    The upper triangle is read row by row; diagonal entries run over
    (1, -1) and off-diagonal entries over (0, t^-k, -t^-k, ..., t^k, -t^k).
    """
    if n < 1 or max_exp < 0:
        raise ValueError("need n >= 1 and max_exp >= 0")
    slots = [(i, j) for i in range(n) for j in range(i, n)]
    diag = [ONE, -ONE]
    off = _offdiag_choices(max_exp)
    for choice in itertools.product(*[diag if i == j else off for i, j in slots]):
        rows = [[ZERO] * n for _ in range(n)]
        for (i, j), x in zip(slots, choice):
            rows[i][j] = x
            rows[j][i] = involute(x)
        if abs(eval_one(determinant(rows))) == 1:
            yield MonomialMatrix(tuple(tuple(r) for r in rows))


def _scan_one(w: MonomialMatrix) -> tuple[str, Verdicts]:
    return w.digest(), phi(w)


@dataclass(frozen=True)
class ScanResult:
    lines: tuple[str, ...]
    total: int
    twelfth_failures: tuple[str, ...]
    half_failures: tuple[str, ...]
    casson_failures: tuple[str, ...]

    def report(self) -> str:
        return "\n".join(self.lines) + "\n"


def _verdict_line(idx: int, digest: str, v: Verdicts) -> str:
    value = "; ".join(f"{m} {n} {c}" for (m, n), c in v.value.items()) or "0"
    return (f"{idx} {digest} twelfth={'yes' if v.in_twelfth else 'NO'} "
            f"half={'yes' if v.in_half else 'no'} casson={v.casson} "
            f"delta={format_poly(v.value.delta)} value={{{value}}}")


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw:
        return max(1, int(raw))
    return max(1, min(8, os.cpu_count() or 1))


def scan(n: int, max_exp: int, workers: int | None = None) -> ScanResult:
    mats = list(enumerate_matrices(n, max_exp))
    workers = worker_count() if workers is None else workers
    if workers > 1 and len(mats) > 16:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_one, mats, chunksize=8))
    else:
        results = [_scan_one(w) for w in mats]
    lines = [f"# scan n={n} max_exp={max_exp} matrices={len(mats)}"]
    tw, hf, cf = [], [], []
    for idx, (digest, v) in enumerate(results):
        line = _verdict_line(idx, digest, v)
        lines.append(line)
        if not v.in_twelfth:
            tw.append(line)
        if not v.in_half:
            hf.append(line)
        if not v.casson_integral:
            cf.append(line)
    lines.append(f"# total={len(mats)} twelfth_failures={len(tw)} "
                 f"half_failures={len(hf)} casson_failures={len(cf)}")
    return ScanResult(tuple(lines), len(mats), tuple(tw), tuple(hf), tuple(cf))
