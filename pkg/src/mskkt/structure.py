"""Barycentric reduction of stationary points and the structures it exposes.

A partition of the support on which ``x`` is constant turns the n-variable
program into a k-variable one with matrix ``D + c * Lambda^-1`` (``D`` the
density matrix, ``Lambda`` the class sizes). For highly regular partitions
the reduction is exact in both directions, which yields closed forms for
two-block families, generalized stars and cliques sharing a common core.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from . import _linalg
from .graph import (
    DensityMatrix,
    Graph,
    density_matrix,
    edge_density,
    induced_subgraph,
    is_clique,
    is_regular,
)
from .kkt import ParametricProgram, SupportStatus, classify, is_gkkt, relint_stationary
from .simplex import (
    SimplexPoint,
    VertexFamily,
    barycentric,
    characteristic_vector,
    combine,
    separates_distinct_values,
    support,
)

PARTITION_SEARCH_LIMIT = 10


class StructureError(ValueError):
    pass


def is_highly_regular(g: Graph, fam: Sequence[Iterable[int]]) -> bool:
    """Every vertex of each class sees every class with the class-level density."""
    fam = VertexFamily(fam)
    g.mask(fam.union)
    for a in fam:
        for b in fam:
            d = edge_density(g, a, b)
            if any(edge_density(g, {i}, b) != d for i in a):
                return False
    return True


def set_partitions(items: Sequence[int]) -> Iterator[list[list[int]]]:
    """All set partitions of ``items`` (restricted growth order)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def highly_regular_partitions(g: Graph, s: Iterable[int]) -> list[VertexFamily]:
    s = sorted(frozenset(s))
    if len(s) > PARTITION_SEARCH_LIMIT:
        raise StructureError(
            f"exhaustive partition search limited to {PARTITION_SEARCH_LIMIT} vertices; supply a candidate partition"
        )
    out = []
    for part in set_partitions(s):
        fam = VertexFamily(sorted(part, key=min))
        if is_highly_regular(g, fam):
            out.append(fam)
    return out


@dataclass(frozen=True)
class ReducedProgram:
    """The k-variable program with matrix ``D + c Lambda^-1`` over the open k-simplex."""

    density: DensityMatrix
    c: Fraction
    family: VertexFamily

    @property
    def D(self):
        return self.density.D

    @property
    def sizes(self):
        return self.density.sizes

    @property
    def k(self) -> int:
        return self.density.k

    def matrix(self) -> list[list[Fraction]]:
        k = self.k
        return [
            [self.D[i][j] + (self.c / self.sizes[i] if i == j else 0) for j in range(k)]
            for i in range(k)
        ]

    def objective(self, y: Sequence) -> Fraction:
        q = self.matrix()
        return sum((Fraction(a) * b for a, b in zip(y, _linalg.matvec(q, y))), Fraction(0))


def reduce(g: Graph, c, fam: Sequence[Iterable[int]]) -> ReducedProgram:
    fam = VertexFamily(fam)
    return ReducedProgram(density_matrix(g, fam), Fraction(c), fam)


def reduced_kkt_check(rp: ReducedProgram, y: Sequence) -> bool:
    """Interior stationarity: all entries of ``(D + c Lambda^-1) y`` agree."""
    y = [Fraction(v) for v in y]
    if len(y) != rp.k:
        raise StructureError("weight vector length does not match the family")
    if sum(y) != 1 or any(v <= 0 for v in y):
        raise StructureError("reduced program is over the relative interior of the simplex")
    vals = _linalg.matvec(rp.matrix(), y)
    return all(v == vals[0] for v in vals)


@dataclass(frozen=True)
class ReducedSolutions:
    status: SupportStatus
    points: tuple  # weight vectors in the open simplex
    base: tuple | None = None
    directions: tuple = ()


def solve_reduced(rp: ReducedProgram) -> ReducedSolutions:
    """Interior stationary points of the reduced program (see :func:`mskkt.kkt.relint_stationary`)."""
    status, members, base, dirs, _ = relint_stationary(rp.matrix())
    return ReducedSolutions(
        status,
        tuple(tuple(m) for m in members),
        tuple(base) if base is not None else None,
        tuple(tuple(d) for d in dirs),
    )


def lift(rp: ReducedProgram, y: Sequence, n: int) -> SimplexPoint:
    return combine(n, rp.family, y)


def _check_separating(x: Sequence, p: VertexFamily) -> None:
    if not separates_distinct_values(x, p):
        raise StructureError("partition does not separate distinct values of x")


def forward_reduction_theorem(g: Graph, c, x: Sequence, p: Sequence[Iterable[int]]) -> bool:
    """Reduced stationarity of ``bary_p(x)`` for a stationary ``x``; expected always true."""
    x = SimplexPoint(x)
    p = VertexFamily(p)
    _check_separating(x, p)
    if not is_gkkt(ParametricProgram(g, c), x):
        raise StructureError("x is not a generalized KKT point")
    return reduced_kkt_check(reduce(g, c, p), barycentric(x, p))


def converse_reduction_theorem(g: Graph, c, x: Sequence, p: Sequence[Iterable[int]]) -> bool:
    """Whether stationarity of ``x`` and reduced stationarity of ``bary_p(x)`` agree.

    Requires a highly regular partition; then the two always agree.
    """
    x = SimplexPoint(x)
    p = VertexFamily(p)
    if not is_highly_regular(g, p):
        raise StructureError("converse reduction requires highly regular partition")
    _check_separating(x, p)
    full = is_gkkt(ParametricProgram(g, c), x)
    reduced = reduced_kkt_check(reduce(g, c, p), barycentric(x, p))
    return full == reduced


# -- two classes -----------------------------------------------------------------


@dataclass(frozen=True)
class TwoBlockReport:
    """Stationary points on the segment between ``x^{V1}`` and ``x^{V2}``."""

    n: int
    v1: frozenset
    v2: frozenset
    alpha: Fraction
    beta: Fraction

    @property
    def regular_case(self) -> bool:
        return self.alpha == self.beta

    @property
    def c_star(self) -> Fraction | None:
        return self.alpha if self.regular_case else None

    @property
    def interval(self) -> tuple[Fraction, Fraction] | None:
        if self.regular_case:
            return None
        return min(self.alpha, self.beta), max(self.alpha, self.beta)

    def segment_coefficients(self, c) -> tuple[Fraction, Fraction]:
        """Coefficients ``((c - beta)/|V1|, (c - alpha)/|V2|)`` of the interior condition.

        Interior weights ``(y1, y2)`` are stationary iff
        ``(c - beta) y1 / |V1| == (c - alpha) y2 / |V2|``.
        """
        c = Fraction(c)
        return (c - self.beta) / len(self.v1), (c - self.alpha) / len(self.v2)

    def whole_segment(self, c) -> bool:
        return self.segment_coefficients(c) == (0, 0)

    def x_c(self, c) -> SimplexPoint | None:
        """The interior stationary point of the segment in the irregular case, if any."""
        if self.regular_case:
            return None
        c = Fraction(c)
        a, b = self.interval
        if a <= c <= b:
            return None
        p1 = (c - self.alpha) * len(self.v1)
        p2 = (c - self.beta) * len(self.v2)
        y1, y2 = p1 / (p1 + p2), p2 / (p1 + p2)
        return combine(self.n, [self.v1, self.v2], [y1, y2])

    def segment_points(self, c) -> list[SimplexPoint] | None:
        """Stationary points on the closed segment; ``None`` means the whole segment."""
        c = Fraction(c)
        ends = [characteristic_vector(self.n, self.v1), characteristic_vector(self.n, self.v2)]
        if self.regular_case:
            if c == self.c_star:
                return None
            return ends + [characteristic_vector(self.n, self.v1 | self.v2)]
        xc = self.x_c(c)
        return ends if xc is None else ends + [xc]


def two_block_analysis(g: Graph, v1: Iterable[int], v2: Iterable[int]) -> TwoBlockReport:
    fam = VertexFamily([v1, v2])
    if not is_highly_regular(g, fam):
        raise StructureError("two-block analysis requires {V1, V2} highly regular")
    dm = density_matrix(g, fam)
    (d11, d12), (d21, d22) = dm.D
    s1, s2 = dm.sizes
    return TwoBlockReport(g.n, fam[0], fam[1], s2 * (d12 - d22), s1 * (d21 - d11))


# -- generalized stars ------------------------------------------------------------


@dataclass(frozen=True)
class GeneralizedStar:
    graph: Graph
    core: frozenset
    periphery: frozenset
    d: int

    @property
    def h(self) -> int:
        return len(self.core)

    @property
    def p(self) -> int:
        return len(self.periphery)

    @property
    def b(self) -> int:
        return self.p - self.d


def detect_generalized_star(g: Graph, h: Iterable[int], p: Iterable[int]) -> GeneralizedStar | None:
    """``G[H u P]`` as a generalized star with core ``H``, or ``None``.

    Checks: ``H`` complete, every core vertex adjacent to every periphery
    vertex, ``G[P]`` regular, and ``G[H u P]`` not complete.
    """
    h, p = frozenset(h), frozenset(p)
    if not h or not p or h & p:
        raise StructureError("core and periphery must be nonempty and disjoint")
    g.mask(h | p)
    if not is_clique(g, h):
        return None
    if not all(g.adjacent(i, j) for i in h for j in p):
        return None
    regular, d = is_regular(induced_subgraph(g, p)[0])
    if not regular or d == len(p) - 1:
        return None
    return GeneralizedStar(g, h, p, d)


def genstar_weights(gs: GeneralizedStar, c) -> tuple[Fraction, Fraction]:
    c = Fraction(c)
    if 1 <= c <= gs.b:
        raise StructureError(f"generalized star construction inapplicable for c in [1, {gs.b}]")
    w1 = (c - 1) * gs.p
    w2 = (c - gs.b) * gs.h
    return w1 / (w1 + w2), w2 / (w1 + w2)


def genstar_kkt_point(gs: GeneralizedStar, c) -> SimplexPoint:
    """``y1 x^P + y2 x^H``, stationary with support ``H u P`` for ``c`` outside ``[1, b]``."""
    y1, y2 = genstar_weights(gs, c)
    x = combine(gs.graph.n, [gs.periphery, gs.core], [y1, y2])
    assert support(x) == gs.core | gs.periphery
    assert classify(ParametricProgram(gs.graph, c), x).stationary
    return x


# -- cliques sharing a core ----------------------------------------------------------


@dataclass(frozen=True)
class SharedCoreReport:
    point: SimplexPoint
    outside_hull: bool
    equals_mean: bool
    c0: Fraction
    b: int
    q: int
    core: frozenset
    periphery: frozenset


def _hull_weights(x: Sequence, vertices: Sequence[SimplexPoint]) -> list[Fraction] | None:
    """Weights ``t`` with ``x = sum t_l v_l`` when unique, else ``None``."""
    n = len(x)
    a = [[v[i] for v in vertices] for i in range(n)]
    sol = _linalg.solve_affine(a, list(x))
    if sol is None:
        return []
    part, basis = sol
    if basis:
        return None
    return part


def shared_core_analysis(g: Graph, cliques: Sequence[Iterable[int]], c) -> SharedCoreReport:
    """Stationary point with support ``u C_l`` that lies outside the hull of the cliques.

    Hypotheses: at least two distinct cliques whose pairwise intersections
    all equal a nonempty core ``H``; the remaining vertices ``P`` induce a
    regular, non-complete graph; ``c`` avoids ``[1, b]`` and ``c0``.
    """
    cl = [frozenset(x) for x in cliques]
    q = len(cl)
    if q < 2 or len(set(cl)) != q:
        raise StructureError("hypothesis failed: need at least two distinct cliques")
    for x in cl:
        g.mask(x)
        if not x or not is_clique(g, x):
            raise StructureError(f"hypothesis failed: {sorted(x)} is not a clique")
    core = frozenset.intersection(*cl)
    if not core:
        raise StructureError("hypothesis failed: cliques share no common vertex")
    for i in range(q):
        for j in range(i + 1, q):
            if cl[i] & cl[j] != core:
                raise StructureError("hypothesis failed: pairwise intersections differ from the common core")
    periphery = frozenset.union(*cl) - core
    if not periphery:
        raise StructureError("hypothesis failed: cliques have no vertices outside the core")
    regular, d = is_regular(induced_subgraph(g, periphery)[0])
    if not regular:
        raise StructureError("hypothesis failed: periphery does not induce a regular graph")
    gs = detect_generalized_star(g, core, periphery)
    if gs is None:
        raise StructureError("hypothesis failed: periphery induces a complete graph")
    c = Fraction(c)
    c0 = Fraction(q - gs.b, q - 1)
    if c == c0:
        raise StructureError(f"c equals the excluded value c0 = {c0}")
    if 1 <= c <= gs.b:
        raise StructureError(f"c lies in the excluded interval [1, {gs.b}]")
    x = genstar_kkt_point(gs, c)
    verts = [characteristic_vector(g.n, cq) for cq in cl]
    t = _hull_weights(x, verts)
    if t is None:
        raise StructureError("clique characteristic vectors are linearly dependent")
    in_hull = bool(t) and all(v >= 0 for v in t)
    mean = tuple(sum((v[i] for v in verts), Fraction(0)) / q for i in range(g.n))
    return SharedCoreReport(
        point=x,
        outside_hull=not in_hull,
        equals_mean=tuple(x) == mean,
        c0=c0,
        b=gs.b,
        q=q,
        core=core,
        periphery=periphery,
    )
