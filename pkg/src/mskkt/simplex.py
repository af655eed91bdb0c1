"""Exact points of the standard simplex and their combinatorial features.

A :class:`SimplexPoint` is a tuple of fractions (0-based positions, so the
coordinate of vertex ``v`` is ``x[v - 1]``). Vertex sets and families use
1-based labels like the rest of the package.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .graph import GraphError, VertexSet, check_family


class SimplexError(ValueError):
    pass


def parse_rational(text) -> Fraction:
    """Parse ``"a/b"`` or an integer; reject decimal floats."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise SimplexError(f"float {text!r} not accepted where exact input is required")
    s = str(text).strip()
    if not s or any(ch in s for ch in ".eE"):
        raise SimplexError(f"not an exact rational: {text!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise SimplexError(f"not an exact rational: {text!r}") from exc


class SimplexPoint(tuple):
    """Immutable exact point of the standard simplex."""

    def __new__(cls, coords: Iterable):
        vals = tuple(Fraction(v) for v in coords)
        if not vals:
            raise SimplexError("simplex point needs at least one coordinate")
        if any(v < 0 for v in vals):
            raise SimplexError("negative coordinate")
        if sum(vals) != 1:
            raise SimplexError(f"coordinates sum to {sum(vals)}, not 1")
        return super().__new__(cls, vals)

    @classmethod
    def parse(cls, text: str) -> "SimplexPoint":
        return cls(parse_rational(t) for t in text.split(","))

    @property
    def n(self) -> int:
        return len(self)

    def value(self, v: int) -> Fraction:
        return self[v - 1]

    def as_floats(self) -> list[float]:
        return [float(v) for v in self]

    def __repr__(self) -> str:
        return "SimplexPoint(" + ", ".join(str(v) for v in self) + ")"


class VertexFamily(tuple):
    """Ordered family of pairwise-disjoint nonempty vertex sets."""

    def __new__(cls, classes: Iterable[Iterable[int]]):
        try:
            fam = check_family(list(classes))
        except GraphError as exc:
            raise SimplexError(str(exc)) from exc
        return super().__new__(cls, fam)

    @classmethod
    def parse(cls, text: str) -> "VertexFamily":
        """Parse ``"1,2|3"`` into ``({1, 2}, {3})``."""
        try:
            return cls(
                [int(v) for v in part.split(",") if v.strip()]
                for part in text.split("|")
            )
        except ValueError as exc:
            raise SimplexError(f"malformed family spec {text!r}") from exc

    @property
    def k(self) -> int:
        return len(self)

    @property
    def union(self) -> VertexSet:
        return frozenset().union(*self)

    def __repr__(self) -> str:
        return "VertexFamily(" + "|".join(",".join(map(str, sorted(c))) for c in self) + ")"


def characteristic_vector(n: int, s: Iterable[int]) -> SimplexPoint:
    s = frozenset(s)
    if not s:
        raise SimplexError("characteristic vector of an empty set")
    if not all(1 <= v <= n for v in s):
        raise SimplexError(f"set {sorted(s)} not within 1..{n}")
    w = Fraction(1, len(s))
    return SimplexPoint(w if i + 1 in s else 0 for i in range(n))


def support(x: Sequence) -> VertexSet:
    return frozenset(i + 1 for i, v in enumerate(x) if v != 0)


def is_characteristic(x: Sequence) -> bool:
    return len({v for v in x if v != 0}) == 1


def induced_partition(x: Sequence) -> VertexFamily:
    """Classes of equal nonzero coordinates, largest value first."""
    groups: dict[Fraction, list[int]] = {}
    for i, v in enumerate(x):
        if v != 0:
            groups.setdefault(v, []).append(i + 1)
    ordered = sorted(groups.items(), key=lambda kv: (-kv[0], kv[1][0]))
    return VertexFamily(members for _, members in ordered)


def _check_partitions_support(x: Sequence, p: Sequence[VertexSet]) -> None:
    union = frozenset().union(*p)
    if sum(len(c) for c in p) != len(union) or union != support(x):
        raise SimplexError("family does not partition the support")


def separates_distinct_values(x: Sequence, p: Sequence[Iterable[int]]) -> bool:
    p = VertexFamily(p)
    _check_partitions_support(x, p)
    return all(len({x[v - 1] for v in c}) == 1 for c in p)


def in_hull_of_family(x: Sequence, fam: Sequence[Iterable[int]]) -> bool:
    """Membership in the convex hull of the characteristic vectors of a disjoint family.

    For disjoint classes the hull equals the simplex intersected with their
    linear span, so the test is: nonnegative, sums to one, constant on every
    class and zero off the union.
    """
    fam = VertexFamily(fam)
    if any(v < 0 for v in x) or sum(x) != 1:
        return False
    union = fam.union
    if any(x[i] != 0 for i in range(len(x)) if i + 1 not in union):
        return False
    return all(len({x[v - 1] for v in c}) == 1 for c in fam)


class BarycentricCoords(tuple):
    """Weights ``y`` in the k-simplex with ``x = sum_l y_l x^{V_l}``."""

    family: VertexFamily

    def __new__(cls, y: Iterable, family: VertexFamily):
        obj = super().__new__(cls, (Fraction(v) for v in y))
        obj.family = family
        return obj

    def reconstruct(self, n: int) -> SimplexPoint:
        return combine(n, self.family, self)


def barycentric(x: Sequence, fam: Sequence[Iterable[int]]) -> BarycentricCoords:
    fam = VertexFamily(fam)
    if max(max(c) for c in fam) > len(x):
        raise SimplexError("family refers to vertices beyond the point's dimension")
    if not in_hull_of_family(x, fam):
        raise SimplexError("not representable: point outside the hull of the family")
    y = BarycentricCoords((len(c) * x[min(c) - 1] for c in fam), fam)
    assert y.reconstruct(len(x)) == tuple(x)
    return y


def combine(n: int, fam: Sequence[Iterable[int]], y: Sequence) -> SimplexPoint:
    """Lift weights ``y`` to ``sum_l y_l x^{V_l}`` in the n-simplex."""
    fam = VertexFamily(fam)
    if len(y) != len(fam):
        raise SimplexError("weight vector length does not match family size")
    coords = [Fraction(0)] * n
    for c, w in zip(fam, y):
        share = Fraction(w) / len(c)
        for v in c:
            coords[v - 1] += share
    return SimplexPoint(coords)
