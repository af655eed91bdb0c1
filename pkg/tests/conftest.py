"""Shared fixtures, hypothesis strategies and independent oracles."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import networkx as nx
import pytest
import sympy
from hypothesis import settings
from hypothesis import strategies as st

from mskkt.graph import Graph

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


# -- named graphs ------------------------------------------------------------------

@pytest.fixture
def cherry() -> Graph:
    # path 1-3-2: vertex 3 is the centre
    return Graph(3, [(1, 3), (2, 3)])


@pytest.fixture
def counterexample() -> Graph:
    return Graph(4, [(1, 2), (1, 3), (1, 4), (3, 4)])


@pytest.fixture
def bowtie() -> Graph:
    # two triangles {1,2,3} and {1,4,5} sharing vertex 1
    return Graph(5, [(1, 2), (1, 3), (2, 3), (1, 4), (1, 5), (4, 5)])


# -- enumerations ------------------------------------------------------------------

def labeled_graphs(n: int):
    pairs = list(combinations(range(1, n + 1), 2))
    for mask in range(1 << len(pairs)):
        yield Graph(n, [e for k, e in enumerate(pairs) if mask >> k & 1])


@lru_cache(maxsize=None)
def atlas_graphs(max_n: int) -> tuple[Graph, ...]:
    """All graphs up to isomorphism on 1..max_n vertices (max_n <= 7)."""
    out = []
    for h in nx.graph_atlas_g():
        if 1 <= h.number_of_nodes() <= max_n:
            out.append(from_nx(h))
    return tuple(out)


def from_nx(h) -> Graph:
    idx = {v: k + 1 for k, v in enumerate(sorted(h.nodes()))}
    return Graph(len(idx), [(idx[u], idx[v]) for u, v in h.edges()])


def to_nx(g: Graph):
    h = nx.Graph()
    h.add_nodes_from(range(1, g.n + 1))
    h.add_edges_from(g.edges())
    return h


# -- strategies --------------------------------------------------------------------

@st.composite
def graphs(draw, min_n: int = 1, max_n: int = 7) -> Graph:
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(1, n + 1), 2))
    bits = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [e for e, b in zip(pairs, bits) if b])


rationals = st.fractions(min_value=-3, max_value=3, max_denominator=12)


@st.composite
def simplex_points(draw, n: int, max_den: int = 12, allow_zero: bool = True):
    lo = 0 if allow_zero else 1
    w = draw(st.lists(st.integers(lo, max_den), min_size=n, max_size=n).filter(lambda v: sum(v) > 0))
    t = sum(w)
    return tuple(Fraction(v, t) for v in w)


@st.composite
def graph_and_point(draw, min_n: int = 1, max_n: int = 7):
    g = draw(graphs(min_n, max_n))
    return g, draw(simplex_points(g.n))


# -- oracles -----------------------------------------------------------------------

def oracle_payoffs(g: Graph, c, x):
    """(A + cI)x with sympy rationals, built from the edge list only."""
    n = g.n
    a = sympy.zeros(n, n)
    for i, j in g.edges():
        a[i - 1, j - 1] = a[j - 1, i - 1] = 1
    m = a + sympy.Rational(c.numerator, c.denominator) * sympy.eye(n)
    xv = sympy.Matrix([sympy.Rational(v.numerator, v.denominator) for v in x])
    return m * xv, (xv.T * m * xv)[0]


def oracle_verdict(g: Graph, c, x) -> str:
    mx, lam = oracle_payoffs(g, Fraction(c), x)
    on = [i for i in range(g.n) if x[i] != 0]
    if any(mx[i] != lam for i in on):
        return "NOT_STATIONARY"
    if any(mx[i] > lam for i in range(g.n) if x[i] == 0):
        return "GENERALIZED_ONLY"
    return "KKT"


def brute_clique_number(g: Graph) -> int:
    for k in range(g.n, 0, -1):
        for s in combinations(range(1, g.n + 1), k):
            if all(g.adjacent(i, j) for i, j in combinations(s, 2)):
                return k
    return 0


def oracle_highly_regular(g: Graph, fam) -> bool:
    """Each class induces a regular graph and cross-degrees between classes are constant."""
    for a in fam:
        degs = {sum(g.adjacent(i, j) for j in a) for i in a}
        if len(degs) != 1:
            return False
    for a in fam:
        for b in fam:
            if a is b:
                continue
            if len({sum(g.adjacent(i, j) for j in b) for i in a}) != 1:
                return False
    return True


# -- acceptance summary --------------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
