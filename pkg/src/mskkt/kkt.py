"""KKT and generalized KKT points of the parametric program

    maximize  x^T (A + cI) x   over the standard simplex,

with exact rational membership tests, multiplier recovery and the
support-level results built on top of them (symmetrization, the
three-vertex obstruction, support-constrained solving, complement duality).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from . import _linalg
from .graph import (
    Graph,
    complement,
    induced_subgraph,
    is_c_eigenvalue_free,
    is_regular,
    subgraph_automorphisms,
)
from .simplex import SimplexPoint, is_characteristic, support

DEFAULT_MAX_DENOMINATOR = 10**6
DEFAULT_TOLERANCE = 1e-7


class KktError(ValueError):
    pass


class Verdict(str, enum.Enum):
    KKT = "KKT"
    GENERALIZED_ONLY = "GENERALIZED_ONLY"
    NOT_STATIONARY = "NOT_STATIONARY"

    @property
    def stationary(self) -> bool:
        return self is not Verdict.NOT_STATIONARY


@dataclass(frozen=True)
class ParametricProgram:
    graph: Graph
    c: Fraction

    def __post_init__(self):
        if isinstance(self.c, float):
            raise KktError("parameter c must be exact; pass a Fraction or an int")
        object.__setattr__(self, "c", Fraction(self.c))

    @property
    def n(self) -> int:
        return self.graph.n

    def payoffs(self, x: Sequence) -> list[Fraction]:
        """``(A + cI) x``."""
        g, c = self.graph, self.c
        out = []
        for i in range(1, g.n + 1):
            acc = c * x[i - 1]
            for j in g.neighbors(i):
                acc += x[j - 1]
            out.append(acc)
        return out


@dataclass(frozen=True)
class KktCertificate:
    verdict: Verdict
    lam: Fraction
    mu: tuple
    witness: int | None = None
    approximate: bool = False

    @property
    def stationary(self) -> bool:
        return self.verdict.stationary


def _point(p: ParametricProgram, x: Sequence) -> SimplexPoint:
    if len(x) != p.n:
        raise KktError(f"dimension mismatch: point has {len(x)} coordinates, graph has {p.n} vertices")
    return x if isinstance(x, SimplexPoint) else SimplexPoint(x)


def objective(p: ParametricProgram, x: Sequence) -> Fraction:
    x = _point(p, x)
    return sum((xi * mi for xi, mi in zip(x, p.payoffs(x))), Fraction(0))


def classify(p: ParametricProgram, x: Sequence) -> KktCertificate:
    x = _point(p, x)
    mx = p.payoffs(x)
    lam = sum((xi * mi for xi, mi in zip(x, mx)), Fraction(0))
    mu = tuple(2 * (lam - m) for m in mx)
    for i, (xi, mi) in enumerate(zip(x, mx)):
        if xi != 0 and mi != lam:
            return KktCertificate(Verdict.NOT_STATIONARY, lam, mu, i + 1)
    for i, (xi, mi) in enumerate(zip(x, mx)):
        if xi == 0 and mi > lam:
            return KktCertificate(Verdict.GENERALIZED_ONLY, lam, mu, i + 1)
    return KktCertificate(Verdict.KKT, lam, mu)


def is_gkkt(p: ParametricProgram, x: Sequence) -> bool:
    return classify(p, x).stationary


def is_kkt(p: ParametricProgram, x: Sequence) -> bool:
    return classify(p, x).verdict is Verdict.KKT


def classify_approx(
    graph: Graph, c: float, x: Sequence[float], tol: float = DEFAULT_TOLERANCE
) -> KktCertificate:
    """Floating-point classification with tolerance ``tol``.

    Coordinates at or below ``tol`` are treated as outside the support.
    The certificate is marked ``approximate``.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (graph.n,):
        raise KktError("dimension mismatch")
    M = np.asarray(graph.adjacency_matrix(), dtype=float) + float(c) * np.eye(graph.n)
    mx = M @ x
    lam = float(x @ mx)
    mu = tuple(2.0 * (lam - mx))
    on = x > tol
    for i in np.flatnonzero(on):
        if abs(mx[i] - lam) > tol:
            return KktCertificate(Verdict.NOT_STATIONARY, lam, mu, int(i) + 1, approximate=True)
    for i in np.flatnonzero(~on):
        if mx[i] - lam > tol:
            return KktCertificate(Verdict.GENERALIZED_ONLY, lam, mu, int(i) + 1, approximate=True)
    return KktCertificate(Verdict.KKT, lam, mu, approximate=True)


def rationalize(
    x: Sequence[float], max_denominator: int = DEFAULT_MAX_DENOMINATOR
) -> SimplexPoint | None:
    """Round each coordinate to the nearest fraction with bounded denominator.

    Returns ``None`` when the rounded coordinates do not sum to exactly one.
    """
    vals = [max(Fraction(float(v)).limit_denominator(max_denominator), Fraction(0)) for v in x]
    if sum(vals) != 1:
        return None
    return SimplexPoint(vals)


def snap(
    p: ParametricProgram, x: Sequence[float], support_tol: float = 1e-6
) -> SimplexPoint | None:
    """Exact generalized KKT point nearest to a numerical one.

    The support is read off ``x`` with threshold ``support_tol`` and the
    stationarity system is solved exactly on it. Falls back to
    :func:`rationalize` when the system is degenerate.
    """
    s = frozenset(i + 1 for i, v in enumerate(x) if v > support_tol)
    if not s:
        return None
    sol = solve_on_support(p, s)
    if sol.status is SupportStatus.UNIQUE:
        return sol.points[0]
    if sol.status is SupportStatus.NON_UNIQUE:
        r = rationalize(x)
        if r is not None and support(r) == s and is_gkkt(p, r):
            return r
    return None


# -- characteristic vectors ------------------------------------------------


def characteristic_gkkt_test(g: Graph, s: Iterable[int]) -> bool:
    """A characteristic vector is stationary iff its support induces a regular graph."""
    sub, _ = induced_subgraph(g, s)
    return is_regular(sub)[0]


def unique_c_recovery(g: Graph, x: Sequence) -> Fraction | None:
    """The single ``c`` making a non-characteristic ``x`` stationary, if any."""
    x = SimplexPoint(x)
    if len(x) != g.n:
        raise KktError("dimension mismatch")
    if is_characteristic(x):
        raise KktError(
            "c not unique or membership c-independent: x is a characteristic vector"
        )
    ax = ParametricProgram(g, 0).payoffs(x)
    s = sorted(support(x))
    i = s[0]
    j = next(j for j in s if x[j - 1] != x[i - 1])
    # (Ax)_i + c x_i = (Ax)_j + c x_j
    c = (ax[j - 1] - ax[i - 1]) / (x[i - 1] - x[j - 1])
    lam = ax[i - 1] + c * x[i - 1]
    if all(ax[k - 1] + c * x[k - 1] == lam for k in s):
        return c
    return None


# -- symmetries --------------------------------------------------------------


def _check_group(g: Graph, s: frozenset, group: Sequence[Mapping[int, int]]) -> list[dict[int, int]]:
    group = [dict(sigma) for sigma in group]
    if not group:
        raise KktError("group must contain at least the identity")
    for sigma in group:
        if set(sigma) != s or set(sigma.values()) != s:
            raise KktError("group element is not a permutation of the support")
        for i, j in combinations(sorted(s), 2):
            if g.adjacent(i, j) != g.adjacent(sigma[i], sigma[j]):
                raise KktError(f"group element {sigma} is not an automorphism of G[S]")
    keys = {tuple(sorted(sigma.items())) for sigma in group}
    for a in group:
        for b in group:
            comp = tuple(sorted((i, a[b[i]]) for i in s))
            if comp not in keys:
                raise KktError("group not closed under composition")
    return group


def symmetrize(
    p: ParametricProgram, x: Sequence, group: Sequence[Mapping[int, int]]
) -> SimplexPoint:
    """Average of the pull-backs of ``x`` over a group of automorphisms of ``G[supp x]``.

    The result keeps the support, stays stationary and is constant on every
    orbit; all three properties are checked exactly before returning.
    """
    x = _point(p, x)
    if not is_gkkt(p, x):
        raise KktError("x is not a generalized KKT point")
    s = support(x)
    group = _check_group(p.graph, s, group)
    acc = [Fraction(0)] * p.n
    for sigma in group:
        for i in s:
            acc[i - 1] += x[sigma[i] - 1]
    xhat = SimplexPoint(v / len(group) for v in acc)
    assert support(xhat) == s
    assert is_gkkt(p, xhat)
    assert all(xhat[sigma[i] - 1] == xhat[i - 1] for sigma in group for i in s)
    return xhat


def orbit_invariance_check(
    p: ParametricProgram, x: Sequence, check_spectrum: bool = True
) -> bool:
    """Whether every automorphism of ``G[supp x]`` preserves the coordinates of ``x``.

    For a KKT point with ``-c`` outside the spectrum of ``A[S,S]`` this is
    guaranteed. With ``check_spectrum=False`` the spectral precondition is
    skipped and the check simply reports what it finds.
    """
    x = _point(p, x)
    if classify(p, x).verdict is not Verdict.KKT:
        raise KktError("precondition violated: x is not a KKT point")
    s = support(x)
    if check_spectrum and not is_c_eigenvalue_free(p.graph, s, p.c):
        raise KktError("precondition violated: -c is an eigenvalue of A[S,S]")
    return all(
        x[sigma[i] - 1] == x[i - 1]
        for sigma in subgraph_automorphisms(p.graph, s)
        for i in s
    )


# -- supports ------------------------------------------------------------------


@dataclass(frozen=True)
class Obstruction:
    case: str  # "a" blocks c = 1, "b" blocks c = 0
    witness: tuple[int, int, int]

    @property
    def blocked_c(self) -> Fraction:
        return Fraction(1) if self.case == "a" else Fraction(0)


def obstruction_applies(
    g: Graph, s: Iterable[int], case: str | None = None
) -> Obstruction | None:
    """Search for a triple ``(i1, i2, i3)`` in ``s`` ruling out stationary points with support ``s``.

    Hypotheses: ``i1 !~ i3``, ``i2 ~ i3`` and every other vertex of ``s``
    adjacent to ``i1`` is adjacent to ``i2``. Case ``a`` (``i1 ~ i2``) rules
    out ``c = 1``; case ``b`` (``i1 !~ i2``) rules out ``c = 0``. Triples are
    tried in lexicographic order; ``case`` restricts the search.
    """
    if case not in (None, "a", "b"):
        raise KktError("case must be 'a', 'b' or None")
    s = frozenset(s)
    for i1, i2, i3 in permutations(sorted(s), 3):
        if g.adjacent(i1, i3) or not g.adjacent(i2, i3):
            continue
        this = "a" if g.adjacent(i1, i2) else "b"
        if case is not None and this != case:
            continue
        rest = s - {i1, i2, i3}
        if all(g.adjacent(j, i2) for j in rest if g.adjacent(j, i1)):
            return Obstruction(this, (i1, i2, i3))
    return None


class SupportStatus(str, enum.Enum):
    UNIQUE = "UNIQUE"
    EMPTY = "EMPTY"
    NON_UNIQUE = "NON_UNIQUE"


@dataclass(frozen=True)
class SupportSolution:
    """Generalized KKT points whose support is exactly ``support``.

    ``UNIQUE``: ``points`` holds the single point. ``EMPTY``: nothing.
    ``NON_UNIQUE``: the stationarity system has a positive-dimensional
    solution set ``base + span(directions)`` (vectors over all n
    coordinates); ``points`` holds one exactly verified member with the
    right support when one exists, otherwise it is empty.
    """

    support: frozenset
    status: SupportStatus
    points: tuple = ()
    base: tuple | None = None
    directions: tuple = ()
    lam: Fraction | None = None

    def __iter__(self) -> Iterator[SimplexPoint]:
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __bool__(self) -> bool:
        return bool(self.points)


def _positive_member(
    base: list[Fraction], dirs: list[list[Fraction]], max_denominator: int = DEFAULT_MAX_DENOMINATOR
) -> list[Fraction] | None:
    """A strictly positive member of ``base + span(dirs)``, or ``None``.

    Maximizes the smallest coordinate with a linear program, then rounds
    the direction weights to rationals so the returned point lies exactly
    on the affine set. Positivity is re-checked exactly.
    """
    from scipy.optimize import linprog

    m = len(dirs)
    B = np.array([[float(d[i]) for d in dirs] for i in range(len(base))]).reshape(len(base), m)
    b0 = np.array([float(v) for v in base])
    # variables (t_1..t_m, s): maximize s subject to b0 + B t >= s, s <= 1
    cost = np.zeros(m + 1)
    cost[-1] = -1.0
    A_ub = np.hstack([-B, np.ones((len(base), 1))])
    bounds = [(None, None)] * m + [(None, 1.0)]
    res = linprog(cost, A_ub=A_ub, b_ub=b0, bounds=bounds, method="highs")
    if res.status != 0 or -res.fun <= 1e-12:
        return None
    for den in (max_denominator, 10**9, 10**12):
        t = [Fraction(float(v)).limit_denominator(den) for v in res.x[:m]]
        z = [base[i] + sum((tj * d[i] for tj, d in zip(t, dirs)), Fraction(0)) for i in range(len(base))]
        if all(v > 0 for v in z):
            return z
    return None


def relint_stationary(q: Sequence[Sequence]) -> tuple[SupportStatus, list, list | None, list, Fraction | None]:
    """Solve ``q y = lam 1``, ``sum(y) = 1``, ``y > 0`` for a square rational ``q``.

    Returns ``(status, members, base, directions, lam)``. ``members`` holds
    the unique positive solution, or one exactly verified positive member of
    a degenerate solution set; ``base``/``directions`` describe the whole
    affine solution set in the degenerate case.
    """
    k = len(q)
    fam = _linalg.stationary_family(q)
    if fam is None:
        return SupportStatus.EMPTY, [], None, [], None
    part, basis = fam
    if not basis:
        if all(v > 0 for v in part[:k]):
            return SupportStatus.UNIQUE, [part[:k]], part[:k], [], part[k]
        return SupportStatus.EMPTY, [], None, [], None
    dirs = [d[:k] for d in basis]
    member = _positive_member(part[:k], dirs)
    lam = part[k] if all(d[k] == 0 for d in basis) else None
    return SupportStatus.NON_UNIQUE, [member] if member is not None else [], part[:k], dirs, lam


def solve_on_support(p: ParametricProgram, s: Iterable[int]) -> SupportSolution:
    """Generalized KKT points of ``p`` with support exactly ``s``.

    Solves ``(A + cI)[S,S] x_S = lam * 1`` with ``sum(x_S) = 1`` exactly.
    """
    s = frozenset(s)
    if not s:
        raise KktError("empty support")
    idx = sorted(s)
    p.graph.mask(idx)
    g, c = p.graph, p.c
    q = [[c if i == j else Fraction(int(g.adjacent(i, j))) for j in idx] for i in idx]
    status, members, base, dirs, lam = relint_stationary(q)

    def embed(vec: Sequence[Fraction]) -> tuple:
        out = [Fraction(0)] * p.n
        for pos, v in enumerate(idx):
            out[v - 1] = vec[pos]
        return tuple(out)

    points = tuple(SimplexPoint(embed(m)) for m in members)
    for pt in points:
        assert support(pt) == s and is_gkkt(p, pt)
    if status is SupportStatus.NON_UNIQUE:
        return SupportSolution(
            s, status, points, base=embed(base), directions=tuple(embed(d) for d in dirs), lam=lam
        )
    return SupportSolution(s, status, points, lam=lam)


def _subsets(n: int, max_size: int | None) -> Iterator[frozenset]:
    top = n if max_size is None else min(n, max_size)
    for size in range(1, top + 1):
        for comb in combinations(range(1, n + 1), size):
            yield frozenset(comb)


def scan(p: ParametricProgram, max_support: int | None = None) -> list[SupportSolution]:
    """Solve on every nonempty support (up to ``max_support`` vertices)."""
    return [solve_on_support(p, s) for s in _subsets(p.n, max_support)]


def kkt_points(p: ParametricProgram, max_support: int | None = None) -> list[SimplexPoint]:
    """Every exact generalized KKT point found by :func:`scan` that is also KKT."""
    return [x for sol in scan(p, max_support) for x in sol if is_kkt(p, x)]


def complement_duality_check(g: Graph, c, x: Sequence) -> bool:
    """Whether stationarity for ``(complement(G), c)`` matches that for ``(G, 1 - c)``."""
    c = Fraction(c)
    left = is_gkkt(ParametricProgram(complement(g), c), x)
    right = is_gkkt(ParametricProgram(g, 1 - c), x)
    return left == right
