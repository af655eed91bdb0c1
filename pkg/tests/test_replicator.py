import subprocess
import sys
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mskkt import _core_py
from mskkt.graph import Graph
from mskkt.kkt import ParametricProgram, Verdict, classify, classify_approx, snap
from mskkt.replicator import (
    ReplicatorError,
    auto_shift,
    discrete_step,
    exact_vector_field,
    integrate,
    iterate_discrete,
    kkt_residual,
    payoff_matrix,
    random_interior_point,
    vector_field,
)

from conftest import graph_and_point, graphs, oracle_verdict

try:
    from mskkt import _core as _core_c
except ImportError:  # pragma: no cover
    _core_c = None

needs_compiled = pytest.mark.skipif(_core_c is None, reason="compiled extension not built")


def test_field_examples(cherry):
    for v in range(3):
        e = np.eye(3)[v]
        assert np.all(vector_field(cherry, 0.7, e) == 0)
    assert np.max(np.abs(vector_field(cherry, 0.0, [0.25, 0.25, 0.5]))) < 1e-12
    f = vector_field(cherry, 0.0, [1 / 3, 1 / 3, 1 / 3])
    assert f[2] > 0 and f[0] < 0 and f[1] < 0
    assert np.allclose(f, [1 / 3 * (1 / 3 - 4 / 9)] * 2 + [1 / 3 * (2 / 3 - 4 / 9)])


def test_field_rejects_off_simplex(cherry):
    with pytest.raises(ReplicatorError):
        vector_field(cherry, 0.0, [0.5, 0.5, 0.5])


def test_integrate_errors(cherry):
    x0 = [1 / 3] * 3
    with pytest.raises(ReplicatorError):
        integrate(cherry, 0.0, x0, 10.0, -0.1)
    with pytest.raises(ReplicatorError):
        integrate(cherry, 0.0, x0, 0.0, 0.1)


def test_cherry_from_barycentre(cherry):
    traj = integrate(cherry, 0.0, [1 / 3] * 3, 200.0, 0.01)
    xt = traj.terminal
    assert np.max(np.abs(xt - [0.25, 0.25, 0.5])) < 1e-6
    assert traj.is_monotone()
    assert classify_approx(cherry, 0.0, xt).verdict is Verdict.KKT
    assert snap(ParametricProgram(cherry, 0), xt) == (F(1, 4), F(1, 4), F(1, 2))


def test_stationary_start_stays_put(cherry):
    x0 = np.array([0.25, 0.25, 0.5])
    traj = integrate(cherry, 0.0, x0, 10.0, 0.01, stop_tol=0.0)
    assert np.max(np.abs(traj.states - x0)) < 1e-8


def test_k3_barycentre():
    g = Graph.complete(3)
    traj = integrate(g, 0.5, [0.5, 0.3, 0.2], 100.0, 0.01)
    assert np.allclose(traj.terminal, [1 / 3] * 3, atol=1e-8)
    assert classify(ParametricProgram(g, F(1, 2)), snap(ParametricProgram(g, F(1, 2)), traj.terminal)).verdict is Verdict.KKT


def test_trajectory_records(cherry):
    traj = integrate(cherry, 0.0, [1 / 3] * 3, 1.0, 0.1, record_every=5)
    lines = list(traj.records())
    assert [int(l.split()[0]) for l in lines] == [0, 5, 10]
    first = lines[0].split()
    assert len(first) == 1 + 1 + 3 + 1
    assert float(first[-1]) == pytest.approx(4 / 9)


def test_discrete_examples(cherry):
    g = Graph.complete(3)
    x = np.array([0.5, 0.25, 0.25])
    y = discrete_step(g, 0.5, x)
    assert abs(y.sum() - 1) < 1e-12
    m = payoff_matrix(g, 0.5)
    assert y @ m @ y >= x @ m @ x
    q = np.array([0.25, 0.25, 0.5])
    with pytest.raises(ReplicatorError, match="shift c"):
        discrete_step(cherry, 0.0, [1.0, 0.0, 0.0])
    assert np.allclose(discrete_step(cherry, 0.0, q, shift=1.0), q, atol=1e-12)
    traj = iterate_discrete(cherry, 1.0, [1 / 3] * 3, 10_000)
    assert traj.is_monotone()
    assert classify_approx(cherry, 1.0, traj.terminal, tol=1e-3).verdict is not Verdict.NOT_STATIONARY


def test_auto_shift():
    assert auto_shift(0.5) == 0.0
    assert auto_shift(-2.0) == 3.0


def test_residual_definition(cherry):
    assert kkt_residual(cherry, 0.0, [0.25, 0.25, 0.5]) < 1e-15
    # (1/2,1/2,0) is stationary but vertex 3 earns 1 > 0
    assert kkt_residual(cherry, 0.0, [0.5, 0.5, 0.0]) == pytest.approx(1.0)


def test_pure_python_env_selects_fallback():
    out = subprocess.run(
        [sys.executable, "-c", "from mskkt import replicator; print(replicator.BACKEND)"],
        env={"MSKKT_PURE_PYTHON": "1", "PATH": ""},
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "python"


# -- properties ----------------------------------------------------------------------

@given(graph_and_point(max_n=7), st.fractions(min_value=-3, max_value=3, max_denominator=6))
def test_exact_zero_field_iff_stationary(gx, c):
    g, x = gx
    zero = all(v == 0 for v in exact_vector_field(g, c, x))
    assert zero == (oracle_verdict(g, c, x) != "NOT_STATIONARY")


@given(graphs(min_n=2, max_n=8), st.floats(-2, 2), st.integers(0, 2**32 - 1))
def test_field_sums_to_zero(g, c, seed):
    x = random_interior_point(g.n, np.random.default_rng(seed))
    assert abs(vector_field(g, c, x).sum()) < 1e-9


@given(graphs(min_n=2, max_n=8), st.floats(-2, 2), st.integers(0, 2**32 - 1))
def test_integration_invariants(g, c, seed):
    x0 = random_interior_point(g.n, np.random.default_rng(seed))
    traj = integrate(g, c, x0, 20.0, 0.05)
    assert np.all(traj.states >= -1e-12)
    assert np.all(np.abs(traj.states.sum(axis=1) - 1) < 1e-9)
    assert traj.is_monotone(1e-9)


@given(graphs(min_n=2, max_n=8), st.floats(-2, 2), st.integers(0, 2**32 - 1))
def test_discrete_invariants(g, c, seed):
    rng = np.random.default_rng(seed)
    x0 = random_interior_point(g.n, rng)
    x0[rng.integers(g.n)] = 0.0
    x0 /= x0.sum()
    traj = iterate_discrete(g, c, x0, 200)
    assert np.all(traj.states[:, x0 == 0] == 0)
    assert np.all(np.abs(traj.states.sum(axis=1) - 1) < 1e-9)
    assert traj.is_monotone(1e-9)


@needs_compiled
@given(graphs(min_n=2, max_n=9), st.floats(-2, 2), st.integers(0, 2**32 - 1))
def test_backend_parity(g, c, seed):
    x0 = random_interior_point(g.n, np.random.default_rng(seed))
    m = payoff_matrix(g, c)
    a = _core_c.integrate_rk4(m, x0, 0.05, 400, 1e-10, 50)
    b = _core_py.integrate_rk4(m, x0, 0.05, 400, 1e-10, 50)
    assert a[3] == b[3]
    assert np.array_equal(a[1], b[1])
    assert np.allclose(a[0], b[0], atol=1e-12)
    assert np.allclose(a[2], b[2], atol=1e-12)
    shift = auto_shift(c)
    a = _core_c.iterate_discrete(payoff_matrix(g, c, shift), x0, 300, 1e-10, 25)
    b = _core_py.iterate_discrete(payoff_matrix(g, c, shift), x0, 300, 1e-10, 25)
    assert a[3] == b[3] and np.allclose(a[0], b[0], atol=1e-12)
