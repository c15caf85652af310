"""Surgery along a single clasper whose leaves do not link the knot.

The change of the 2-loop part is half the contraction of the clasper's
tripod with its parallel copy, plus the μ term of the clasper.  The
leaves ``f_1, f_2, f_3`` and their push-offs ``f'_i`` pair through the
equivariant linking form; a push-off inherits the pairings of its leaf.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .contraction import PairingMatrix, contract_tripods, is_hermitian, tripod
from .laurent import ONE, LaurentPoly, eval_one
from .theta import ThetaElement


@dataclass(frozen=True)
class ClasperData:
    """``leaf_pairing[i][j] / delta`` is the pairing of leaves ``i`` and ``j``."""

    leaf_pairing: tuple[tuple[LaurentPoly, ...], ...]
    delta: LaurentPoly = ONE
    mu: ThetaElement | None = None

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.leaf_pairing)
        object.__setattr__(self, "leaf_pairing", rows)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("leaf pairing must be 3x3")
        if not is_hermitian(rows):
            raise ValueError("leaf pairing is not hermitian")
        if abs(eval_one(self.delta)) != 1:
            raise ValueError("Δ(1) must be ±1")
        if self.mu is None:
            object.__setattr__(self, "mu", ThetaElement.zero(self.delta))


def doubled_pairing(c: ClasperData) -> PairingMatrix:
    """6x6 pairing of ``(f_1, f_2, f_3, f'_1, f'_2, f'_3)``."""
    lam = c.leaf_pairing
    rows = tuple(tuple(lam[i % 3][j % 3] for j in range(6)) for i in range(6))
    return PairingMatrix(rows, c.delta)


def pairing_contraction(c: ClasperData) -> ThetaElement:
    """Sum of the 15 ways of pairing the leaves of the clasper and its copy.

    Gluing negates the pairing, so the 6x6 matrix is passed as is.
    """
    winv = doubled_pairing(c)
    y = tripod([(0, ONE), (1, ONE), (2, ONE)])
    y_copy = tripod([(3, ONE), (4, ONE), (5, ONE)])
    return contract_tripods(y, y_copy, winv)


def _align(x: ThetaElement, delta: LaurentPoly) -> ThetaElement:
    return ThetaElement.zero(delta) if x.is_zero() else x.with_delta(delta)


def surgery_delta(c: ClasperData) -> ThetaElement:
    return pairing_contraction(c) * Fraction(1, 2) + _align(c.mu, c.delta)


def clasper_from_rows(rows: Sequence[Sequence[LaurentPoly]], delta: LaurentPoly = ONE,
                      mu: ThetaElement | None = None) -> ClasperData:
    return ClasperData(tuple(tuple(r) for r in rows), delta, mu)
