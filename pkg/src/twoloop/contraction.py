"""Formal Gaussian integration of legged diagrams at 2-loop order.

Legs carry a component label and a Laurent color read outward from their
vertex.  Integration sums over all perfect matchings of the legs; gluing a
leg ``x`` (component ``i``, color ``a``) to a leg ``y`` (component ``j``,
color ``b``) creates an edge from ``x``'s vertex to ``y``'s vertex colored
``-a · (W^-1)_ij · b̄``.

Every closed graph produced here has two trivalent vertices and three
edges, so it is either a theta or a dumbbell.  Vertex orientations are
cyclic orders of half-edges.  Conventions:

* a theta whose two vertices carry *opposite* cyclic orders of its edges
  (the planar theta) is ``+θ``; equal orders give ``-θ``;
* a dumbbell is reduced with :func:`twoloop.theta.reduce_dumbbell` after
  orienting each loop so that the vertex reads (bar, outgoing, incoming).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Iterator, Sequence

from .laurent import ONE, ZERO, LaurentPoly, determinant, eval_one, involute
from .theta import (
    ThetaElement,
    from_theta,
    mod2_mod_theta,
    reduce_dumbbell,
    theta_class,
)

SHAPES = ("strut", "wheel2", "tripod", "hgraph")
LEG_COUNT = {"strut": 2, "wheel2": 2, "tripod": 3, "hgraph": 4}


@dataclass(frozen=True)
class Leg:
    component: int
    color: LaurentPoly = ONE

    def __post_init__(self):
        if self.color.is_zero():
            raise ValueError("leg color must be nonzero")


@dataclass(frozen=True)
class LeggedDiagram:
    """A low-degree legged diagram.

    Leg order per shape:

    * ``strut``: the two ends;
    * ``wheel2``: the legs at the two vertices of the circle;
    * ``tripod``: legs in the cyclic order of the vertex;
    * ``hgraph``: (upper ``i``, upper ``j``, lower ``i``, lower ``j``) for
      the I-shaped drawing whose bar joins the upper and lower vertices.
      Upper vertex reads (bar, upper ``j``, upper ``i``), lower vertex
      reads (bar, lower ``i``, lower ``j``).
    """

    shape: str
    legs: tuple[Leg, ...]
    coefficient: Fraction = Fraction(1)

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ValueError(f"unknown shape {self.shape!r}")
        if len(self.legs) != LEG_COUNT[self.shape]:
            raise ValueError(f"{self.shape} needs {LEG_COUNT[self.shape]} legs, got {len(self.legs)}")
        object.__setattr__(self, "coefficient", Fraction(self.coefficient))

    def scaled(self, c) -> "LeggedDiagram":
        return LeggedDiagram(self.shape, self.legs, self.coefficient * Fraction(c))


def strut(i: int, j: int, color: LaurentPoly = ONE, coefficient=1) -> LeggedDiagram:
    return LeggedDiagram("strut", (Leg(i, ONE), Leg(j, color)), coefficient)


def wheel2(i: int, j: int, color: LaurentPoly = ONE, coefficient=1) -> LeggedDiagram:
    """2-wheel with legs on ``i`` (color 1) and ``j`` (color ``color``)."""
    return LeggedDiagram("wheel2", (Leg(i, ONE), Leg(j, color)), coefficient)


def tripod(legs: Sequence[tuple[int, LaurentPoly]], coefficient=1) -> LeggedDiagram:
    return LeggedDiagram("tripod", tuple(Leg(c, p) for c, p in legs), coefficient)


def hgraph(i: int, j: int, color: LaurentPoly = ONE, coefficient=1) -> LeggedDiagram:
    """``H^i_j``: each vertex has one ``i`` leg (color 1) and one ``j`` leg."""
    return LeggedDiagram("hgraph", (Leg(i, ONE), Leg(j, color), Leg(i, ONE), Leg(j, color)), coefficient)


@dataclass(frozen=True)
class DiagramExponent:
    """Formal Q-linear combination of legged diagrams (inside an exponential)."""

    terms: tuple[LeggedDiagram, ...] = ()

    def __add__(self, other: "DiagramExponent") -> "DiagramExponent":
        return DiagramExponent(self.terms + other.terms)

    def of_shape(self, shape: str) -> list[LeggedDiagram]:
        return [d for d in self.terms if d.shape == shape]

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)


# --- pairing matrices -------------------------------------------------------------

@dataclass(frozen=True)
class PairingMatrix:
    """Entries ``num[i][j] / delta``; hermitian."""

    num: tuple[tuple[LaurentPoly, ...], ...]
    delta: LaurentPoly

    @property
    def n(self) -> int:
        return len(self.num)

    def entry(self, i: int, j: int) -> LaurentPoly:
        return self.num[i][j]

    def is_hermitian(self) -> bool:
        return is_hermitian(self.num)

    def scaled(self, s) -> "PairingMatrix":
        return PairingMatrix(tuple(tuple(x.scale(s) for x in row) for row in self.num), self.delta)


def is_hermitian(rows: Sequence[Sequence[LaurentPoly]]) -> bool:
    n = len(rows)
    return all(len(r) == n for r in rows) and all(
        rows[j][i] == involute(rows[i][j]) for i in range(n) for j in range(i, n)
    )


def _minor(rows, i, j):
    return [[x for c, x in enumerate(r) if c != j] for r_i, r in enumerate(rows) if r_i != i]


def mat_mul(x, y):
    n, m, k = len(x), len(y), len(y[0])
    return [[reduce(lambda s, t: s + t, (x[i][l] * y[l][j] for l in range(m)), ZERO) for j in range(k)] for i in range(n)]


def invert_hermitian(w: Sequence[Sequence[LaurentPoly]]) -> PairingMatrix:
    """Adjugate over determinant, checked by ``W · adj = det · I``."""
    rows = [list(r) for r in w]
    if not is_hermitian(rows):
        raise ValueError("matrix is not hermitian")
    n = len(rows)
    det = determinant(rows)
    if det.is_zero():
        raise ValueError("matrix is singular")
    if n == 1:
        adj = [[ONE]]
    else:
        adj = [[ZERO] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                c = determinant(_minor(rows, j, i))
                adj[i][j] = -c if (i + j) % 2 else c
    check = mat_mul(rows, adj)
    for i in range(n):
        for j in range(n):
            if check[i][j] != (det if i == j else ZERO):
                raise AssertionError("adjugate check failed")
    return PairingMatrix(tuple(tuple(r) for r in adj), det)


def contract_pair(x: Leg, y: Leg, winv: PairingMatrix) -> tuple[LaurentPoly, LaurentPoly]:
    """Color ``(numerator, denominator)`` of the edge created by gluing ``x`` to ``y``."""
    return -(x.color * winv.entry(x.component, y.component) * involute(y.color)), winv.delta


# --- skeletons ----------------------------------------------------------------------

@dataclass
class _Skeleton:
    orders: dict[str, tuple[str, str, str]] = field(default_factory=dict)
    # tail slot, head slot, numerator, power of Δ in the denominator
    edges: list[tuple[str, str, LaurentPoly, int]] = field(default_factory=list)
    legs: dict[str, Leg] = field(default_factory=dict)


def _skeleton(d: LeggedDiagram, tag: str) -> _Skeleton:
    s = _Skeleton()
    p = lambda name: f"{tag}.{name}"
    leg_slots = [p(f"L{i}") for i in range(len(d.legs))]
    s.legs = dict(zip(leg_slots, d.legs))
    if d.shape == "wheel2":
        s.orders[p("u")] = (p("L0"), p("Ab.u"), p("At.u"))
        s.orders[p("v")] = (p("L1"), p("At.v"), p("Ab.v"))
        s.edges.append((p("At.u"), p("At.v"), ONE, 0))
        s.edges.append((p("Ab.u"), p("Ab.v"), ONE, 0))
    elif d.shape == "tripod":
        s.orders[p("y")] = tuple(leg_slots)
    elif d.shape == "hgraph":
        s.orders[p("U")] = (p("C.u"), p("L1"), p("L0"))
        s.orders[p("D")] = (p("C.d"), p("L2"), p("L3"))
        s.edges.append((p("C.u"), p("C.d"), ONE, 0))
    else:
        raise ValueError(f"{d.shape} diagrams are not integrated")
    return s


def perfect_matchings(items: Sequence) -> Iterator[list[tuple]]:
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for idx, other in enumerate(rest):
        remaining = rest[:idx] + rest[idx + 1:]
        for m in perfect_matchings(remaining):
            yield [(first, other)] + m


def _cyclic_parity(order: Sequence[int]) -> int:
    """0 for a cyclic rotation of (0, 1, 2), 1 for the reversed orientation."""
    i = list(order).index(0)
    return 0 if order[(i + 1) % 3] == 1 else 1


def _rotate_to(order: tuple[str, str, str], first: str) -> tuple[str, str, str]:
    i = order.index(first)
    return order[i:] + order[:i]


def evaluate_closed(orders: dict[str, tuple[str, str, str]],
                    edges: list[tuple[str, str, LaurentPoly, int]],
                    delta: LaurentPoly) -> ThetaElement:
    """Value of a closed graph with two trivalent vertices and three edges."""
    vertex = {slot: v for v, order in orders.items() for slot in order}
    if len(orders) != 2 or len(edges) != 3 or len(vertex) != 6:
        raise ValueError("expected a closed graph with two trivalent vertices")

    def cleared(num, dpow):
        if dpow == 1:
            return num
        if dpow == 0:
            return num * delta
        raise ValueError("edge color with more than one Δ in the denominator")

    u, v = sorted(orders)
    loops = [e for e in edges if vertex[e[0]] == vertex[e[1]]]
    if not loops:
        # theta: orient every edge u -> v
        colors, tails, heads = [], [], []
        for tail, head, num, dpow in edges:
            if vertex[tail] != u:
                tail, head, num = head, tail, involute(num)
            colors.append(cleared(num, dpow))
            tails.append(tail)
            heads.append(head)
        pu = _cyclic_parity([tails.index(s) for s in orders[u]])
        pv = _cyclic_parity([heads.index(s) for s in orders[v]])
        sign = 1 if pu != pv else -1
        return from_theta(*colors, delta) * sign
    if len(loops) != 2:
        raise ValueError("a closed 2-vertex graph has zero or two loops")
    bar = next(e for e in edges if vertex[e[0]] != vertex[e[1]])
    tail, head, rnum, rdpow = bar
    # value of the bar at t = 1 over Δ(1)^rdpow, fed to reduce_dumbbell as r/Δ
    r_equiv = LaurentPoly.const(eval_one(rnum) / eval_one(delta) ** rdpow) * delta

    def loop_color(end_slot):
        order = _rotate_to(orders[vertex[end_slot]], end_slot)
        loop = next(e for e in loops if vertex[e[0]] == vertex[end_slot])
        ltail, lhead, num, dpow = loop
        if order[1] == ltail:
            return cleared(num, dpow)
        return cleared(involute(num), dpow)

    p = loop_color(tail)
    q = loop_color(head)
    return reduce_dumbbell(p, r_equiv, q, delta)


def integrate(diagrams: Sequence[LeggedDiagram], winv: PairingMatrix,
              with_coefficients: bool = True) -> ThetaElement:
    """Sum over all perfect matchings of the legs of the disjoint union."""
    orders: dict[str, tuple] = {}
    base_edges: list = []
    legs: dict[str, Leg] = {}
    coef = Fraction(1)
    for idx, d in enumerate(diagrams):
        s = _skeleton(d, f"d{idx}")
        orders.update(s.orders)
        base_edges.extend(s.edges)
        legs.update(s.legs)
        coef *= d.coefficient
    total = ThetaElement.zero(winv.delta)
    if not coef and with_coefficients:
        return total
    for matching in perfect_matchings(sorted(legs)):
        edges = list(base_edges)
        for x, y in matching:
            num, _ = contract_pair(legs[x], legs[y], winv)
            edges.append((x, y, num, 1))
        total = total + evaluate_closed(orders, edges, winv.delta)
    return total * coef if with_coefficients else total


def count_matchings(n_legs: int) -> int:
    return sum(1 for _ in perfect_matchings(range(n_legs)))


def contract_wheel2(d: LeggedDiagram, winv: PairingMatrix) -> ThetaElement:
    if d.shape != "wheel2":
        raise ValueError("contract_wheel2 needs a wheel2 diagram")
    return integrate([d], winv)


def contract_H(d: LeggedDiagram, winv: PairingMatrix) -> ThetaElement:
    if d.shape != "hgraph":
        raise ValueError("contract_H needs an hgraph diagram")
    return integrate([d], winv)


def contract_tripods(d1: LeggedDiagram, d2: LeggedDiagram, winv: PairingMatrix) -> ThetaElement:
    """All 15 gluings of two tripods, reduced to canonical form."""
    if d1.shape != "tripod" or d2.shape != "tripod":
        raise ValueError("contract_tripods needs two tripods")
    return integrate([d1, d2], winv)


def zero_tripod_like(d: LeggedDiagram) -> LeggedDiagram:
    return d.scaled(0)


def y_square_mod2(colors: Sequence[LaurentPoly], components: Sequence[int], winv: PairingMatrix) -> ThetaElement:
    """Closed form of the integral of a tripod squared, mod 2 and mod Θ."""
    delta = winv.delta
    d1 = eval_one(delta)
    if abs(d1) != 1:
        raise ValueError("closed form needs det W = ±1 at t = 1")
    total = ThetaElement.zero(delta)
    for x, y, z in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        cx, cy, cz = components[x], components[y], components[z]
        ax, ay, az = colors[x], colors[y], colors[z]
        eps = eval_one(winv.entry(cx, cx) * ax * involute(ax)) / d1
        if eps.denominator != 1:
            raise AssertionError("augmentation is not integral")
        num = ay * winv.entry(cy, cz) * involute(az)
        total = total + from_theta(num, delta, delta, delta) * eps
    return mod2_mod_theta(total)
