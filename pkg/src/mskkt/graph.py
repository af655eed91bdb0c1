"""Undirected simple graphs and the combinatorial primitives used throughout.

Vertices are labelled ``1..n`` at the API boundary; internally rows of the
adjacency relation are stored as integer bitmasks indexed from zero.
Everything in this module is exact: densities are :class:`Fraction` and the
singularity test uses rational elimination.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from ._linalg import determinant

VertexSet = frozenset  # frozenset[int] of 1-based labels

DEFAULT_AUTOMORPHISM_LIMIT = 16


class GraphError(ValueError):
    pass


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """Immutable undirected graph on vertices ``1..n``."""

    __slots__ = ("n", "_adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise GraphError("vertex count must be nonnegative")
        adj = [0] * n
        for i, j in edges:
            if not (1 <= i <= n and 1 <= j <= n):
                raise GraphError(f"edge ({i}, {j}) out of range 1..{n}")
            if i == j:
                raise GraphError("loops not allowed")
            adj[i - 1] |= 1 << (j - 1)
            adj[j - 1] |= 1 << (i - 1)
        self.n = n
        self._adj = tuple(adj)

    @classmethod
    def _from_masks(cls, masks: Sequence[int]) -> "Graph":
        g = cls.__new__(cls)
        g.n = len(masks)
        g._adj = tuple(masks)
        return g

    @classmethod
    def from_adjacency(cls, rows: Sequence[Sequence[int]]) -> "Graph":
        n = len(rows)
        for i in range(n):
            if len(rows[i]) != n:
                raise GraphError("adjacency matrix must be square")
            if rows[i][i]:
                raise GraphError("loops not allowed")
            for j in range(n):
                if bool(rows[i][j]) != bool(rows[j][i]):
                    raise GraphError("adjacency matrix must be symmetric")
        return cls._from_masks(
            [sum(1 << j for j in range(n) if rows[i][j]) for i in range(n)]
        )

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls._from_masks([full & ~(1 << i) for i in range(n)])

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls(n, [(i, i % n + 1) for i in range(1, n + 1)])

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls(n, [(i, i + 1) for i in range(1, n)])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self._adj == other._adj

    def __hash__(self) -> int:
        return hash(self._adj)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"

    @property
    def vertices(self) -> VertexSet:
        return frozenset(range(1, self.n + 1))

    def adjacent(self, i: int, j: int) -> bool:
        return bool(self._adj[i - 1] >> (j - 1) & 1)

    def neighbors(self, i: int) -> VertexSet:
        return frozenset(b + 1 for b in _bits(self._adj[i - 1]))

    def degree(self, i: int) -> int:
        return bin(self._adj[i - 1]).count("1")

    def degrees(self) -> list[int]:
        return [bin(m).count("1") for m in self._adj]

    def edges(self) -> list[tuple[int, int]]:
        return [
            (i + 1, j + 1)
            for i in range(self.n)
            for j in _bits(self._adj[i])
            if j > i
        ]

    def edge_count(self) -> int:
        return sum(self.degrees()) // 2

    def adjacency_matrix(self) -> list[list[int]]:
        return [[(m >> j) & 1 for j in range(self.n)] for m in self._adj]

    def mask(self, s: Iterable[int]) -> int:
        m = 0
        for v in s:
            if not 1 <= v <= self.n:
                raise GraphError(f"vertex {v} out of range 1..{self.n}")
            m |= 1 << (v - 1)
        return m


def _nonempty(s: Iterable[int], what: str = "vertex set") -> VertexSet:
    s = frozenset(s)
    if not s:
        raise GraphError(f"empty {what}")
    return s


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph._from_masks([full & ~m & ~(1 << i) for i, m in enumerate(g._adj)])


def induced_subgraph(g: Graph, s: Iterable[int]) -> tuple[Graph, tuple[int, ...]]:
    """Return ``(G[s], labels)`` where ``labels[k]`` is the original label of new vertex ``k+1``."""
    s = frozenset(s)
    if not s:
        raise GraphError("empty induced set")
    labels = tuple(sorted(s))
    g.mask(labels)
    pos = {v: k for k, v in enumerate(labels)}
    masks = []
    for v in labels:
        row = g._adj[v - 1]
        masks.append(sum(1 << pos[u + 1] for u in _bits(row) if u + 1 in pos))
    return Graph._from_masks(masks), labels


def is_regular(g: Graph) -> tuple[bool, int | None]:
    """Return ``(True, degree)`` for a regular graph, ``(False, None)`` otherwise."""
    if g.n < 1:
        raise GraphError("regularity needs at least one vertex")
    degs = set(g.degrees())
    if len(degs) == 1:
        return True, degs.pop()
    return False, None


def is_clique(g: Graph, s: Iterable[int]) -> bool:
    s = list(s)
    return all(g.adjacent(i, j) for i, j in combinations(s, 2))


def is_independent(g: Graph, s: Iterable[int]) -> bool:
    s = list(s)
    return not any(g.adjacent(i, j) for i, j in combinations(s, 2))


def edge_count_between(g: Graph, s1: Iterable[int], s2: Iterable[int]) -> int:
    """Ordered adjacent pairs in ``s1 x s2``; edges inside the overlap count twice."""
    s1 = _nonempty(s1)
    s2 = _nonempty(s2)
    m2 = g.mask(s2)
    g.mask(s1)
    return sum(bin(g._adj[i - 1] & m2).count("1") for i in s1)


def edge_density(g: Graph, s1: Iterable[int], s2: Iterable[int]) -> Fraction:
    s1 = _nonempty(s1)
    s2 = _nonempty(s2)
    return Fraction(edge_count_between(g, s1, s2), len(s1) * len(s2))


class DensityMatrix:
    """Pairwise edge densities ``D`` of an ordered family plus the class sizes ``Lambda``."""

    __slots__ = ("D", "sizes")

    def __init__(self, D: Sequence[Sequence[Fraction]], sizes: Sequence[int]):
        self.D = tuple(tuple(Fraction(v) for v in row) for row in D)
        self.sizes = tuple(sizes)

    @property
    def k(self) -> int:
        return len(self.sizes)

    @property
    def Lambda(self) -> tuple[tuple[int, ...], ...]:
        k = self.k
        return tuple(tuple(self.sizes[i] if i == j else 0 for j in range(k)) for i in range(k))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, DensityMatrix)
            and self.D == other.D
            and self.sizes == other.sizes
        )

    def __repr__(self) -> str:
        return f"DensityMatrix(D={[[str(v) for v in r] for r in self.D]}, sizes={self.sizes})"


def check_family(classes: Sequence[Iterable[int]], n: int | None = None) -> tuple[VertexSet, ...]:
    """Validate an ordered family of pairwise-disjoint nonempty vertex sets."""
    out = tuple(frozenset(c) for c in classes)
    if not out:
        raise GraphError("family must have at least one class")
    seen: set[int] = set()
    for c in out:
        if not c:
            raise GraphError("empty class in family")
        if seen & c:
            raise GraphError(f"classes overlap on {sorted(seen & c)}")
        if n is not None and not all(1 <= v <= n for v in c):
            raise GraphError(f"class {sorted(c)} not within 1..{n}")
        seen |= c
    return out


def density_matrix(g: Graph, classes: Sequence[Iterable[int]]) -> DensityMatrix:
    fam = check_family(classes, g.n)
    D = [[edge_density(g, a, b) for b in fam] for a in fam]
    return DensityMatrix(D, [len(c) for c in fam])


def maximal_cliques(g: Graph) -> list[VertexSet]:
    """All maximal cliques via Bron-Kerbosch with Tomita pivoting, sorted lexicographically."""
    adj = g._adj
    found: list[int] = []

    def expand(r: int, p: int, x: int) -> None:
        if not p and not x:
            found.append(r)
            return
        px = p | x
        pivot = max(_bits(px), key=lambda u: bin(p & adj[u]).count("1"))
        for v in _bits(p & ~adj[pivot]):
            bit = 1 << v
            expand(r | bit, p & adj[v], x & adj[v])
            p &= ~bit
            x |= bit

    if g.n:
        expand(0, (1 << g.n) - 1, 0)
    cliques = [tuple(b + 1 for b in _bits(m)) for m in found]
    return [frozenset(c) for c in sorted(cliques)]


def clique_number(g: Graph) -> int:
    if g.n < 1:
        raise GraphError("clique number needs at least one vertex")
    return max(len(c) for c in maximal_cliques(g))


def automorphisms(g: Graph, limit: int = DEFAULT_AUTOMORPHISM_LIMIT) -> list[tuple[int, ...]]:
    """The full automorphism group as explicit permutations.

    Each permutation is a tuple ``p`` with ``p[i-1] = sigma(i)``. Backtracking
    assigns images vertex by vertex, restricted to vertices of equal degree and
    consistent adjacency with everything already placed.
    """
    n = g.n
    if n < 1:
        raise GraphError("automorphisms need at least one vertex")
    if n > limit:
        raise GraphError(f"automorphism search limit: n={n} exceeds {limit}")
    adj = g._adj
    deg = g.degrees()
    # place high-degree, well-connected vertices first to prune early
    order = sorted(range(n), key=lambda v: (-deg[v], v))
    image = [-1] * n
    used = 0
    result: list[tuple[int, ...]] = []

    def extend(pos: int) -> None:
        nonlocal used
        if pos == n:
            result.append(tuple(i + 1 for i in image))
            return
        v = order[pos]
        for w in range(n):
            if used >> w & 1 or deg[w] != deg[v]:
                continue
            ok = True
            for u in order[:pos]:
                if (adj[v] >> u & 1) != (adj[w] >> image[u] & 1):
                    ok = False
                    break
            if ok:
                image[v] = w
                used |= 1 << w
                extend(pos + 1)
                used &= ~(1 << w)
                image[v] = -1

    extend(0)
    result.sort()
    return result


def subgraph_automorphisms(
    g: Graph, s: Iterable[int], limit: int = DEFAULT_AUTOMORPHISM_LIMIT
) -> list[dict[int, int]]:
    """Automorphisms of ``G[s]`` written as maps between original labels."""
    sub, labels = induced_subgraph(g, s)
    return [
        {labels[k]: labels[p[k] - 1] for k in range(len(labels))}
        for p in automorphisms(sub, limit)
    ]


def is_c_eigenvalue_free(g: Graph, s: Iterable[int], c) -> bool:
    """True iff ``-c`` is not an eigenvalue of ``A[S,S]``, i.e. ``det(A[S,S] + cI) != 0``."""
    s = sorted(_nonempty(s))
    c = Fraction(c)
    rows = [[c if i == j else Fraction(int(g.adjacent(i, j))) for j in s] for i in s]
    return determinant(rows) != 0
