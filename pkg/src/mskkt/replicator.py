"""Replicator dynamics with payoff matrix ``A + cI``.

Continuous time uses fixed-step RK4 with projection back onto the simplex
after every step; discrete time uses the multiplicative map. The inner loops
live in a compiled extension (``mskkt._core``) when it is available and fall
back to numpy (``mskkt._core_py``) otherwise. Set ``MSKKT_PURE_PYTHON=1`` to
force the fallback.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .graph import Graph

if os.environ.get("MSKKT_PURE_PYTHON"):
    from . import _core_py as _core

    BACKEND = "python"
else:
    try:
        from . import _core  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:  # pragma: no cover - depends on the build
        from . import _core_py as _core

        BACKEND = "python"

STOP_TOL = 1e-10
SIMPLEX_TOL = 1e-9


class ReplicatorError(ValueError):
    pass


def payoff_matrix(g: Graph, c: float, shift: float = 0.0) -> np.ndarray:
    M = np.asarray(g.adjacency_matrix(), dtype=float).reshape(g.n, g.n)
    M += float(c) * np.eye(g.n)
    if shift:
        M += shift
    return np.ascontiguousarray(M)


def _check_point(g: Graph, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (g.n,):
        raise ReplicatorError(f"point has shape {x.shape}, expected ({g.n},)")
    if abs(x.sum() - 1.0) > SIMPLEX_TOL or x.min() < -SIMPLEX_TOL:
        raise ReplicatorError("point is not on the simplex")
    return x


def vector_field(g: Graph, c: float, x) -> np.ndarray:
    x = _check_point(g, x)
    mx = payoff_matrix(g, c) @ x
    return x * (mx - x @ mx)


def exact_vector_field(g: Graph, c, x: Sequence) -> list[Fraction]:
    """The same field evaluated in rational arithmetic."""
    c = Fraction(c)
    x = [Fraction(v) for v in x]
    mx = [c * x[i - 1] + sum((x[j - 1] for j in g.neighbors(i)), Fraction(0)) for i in range(1, g.n + 1)]
    f = sum((a * b for a, b in zip(x, mx)), Fraction(0))
    return [a * (m - f) for a, m in zip(x, mx)]


def kkt_residual(g: Graph, c: float, x, support_tol: float = 1e-8) -> float:
    """Infinity-norm violation of the KKT conditions at a float point.

    Coordinates above ``support_tol`` count as the support: there the payoff
    must equal the objective; elsewhere it must not exceed it.
    """
    x = np.asarray(x, dtype=float)
    mx = payoff_matrix(g, c) @ x
    gap = mx - x @ mx
    on = x > support_tol
    r_on = np.max(np.abs(gap[on])) if on.any() else 0.0
    r_off = np.max(np.maximum(gap[~on], 0.0)) if (~on).any() else 0.0
    return float(max(r_on, r_off))


@dataclass(frozen=True)
class Trajectory:
    states: np.ndarray  # recorded states, shape (r, n)
    times: np.ndarray  # time (or step index for the discrete map) of each recorded state
    fvals: np.ndarray  # objective after every step, length steps + 1
    c: float
    step_mode: str  # "continuous" | "discrete"
    dt: float | None = None
    steps: int = 0
    shift: float = 0.0
    converged: bool = False

    @property
    def terminal(self) -> np.ndarray:
        return self.states[-1]

    def min_increment(self) -> float:
        """Smallest one-step change of the objective (``inf`` if no steps)."""
        if len(self.fvals) < 2:
            return math.inf
        return float(np.min(np.diff(self.fvals)))

    def is_monotone(self, slack: float = 1e-9) -> bool:
        return self.min_increment() >= -slack

    def records(self) -> Iterator[str]:
        """Line-oriented export: ``step time x_1 .. x_n f_c``."""
        step_of = np.rint(self.times / self.dt).astype(int) if self.dt else self.times.astype(int)
        for k, t, x in zip(step_of, self.times, self.states):
            coords = " ".join(format(v, ".17g") for v in x)
            yield f"{k} {format(float(t), '.17g')} {coords} {format(float(self.fvals[k]), '.17g')}"


def integrate(
    g: Graph,
    c: float,
    x0,
    t_end: float,
    dt: float,
    stop_tol: float = STOP_TOL,
    record_every: int = 1,
) -> Trajectory:
    """Fixed-step RK4 integration for ``ceil(t_end / dt)`` steps.

    Stops early once the sup-norm of the field drops below ``stop_tol``.
    ``record_every`` thins the stored states; the objective is kept for every
    step regardless.
    """
    if not dt > 0 or not t_end > 0:
        raise ReplicatorError("t_end and dt must be positive")
    x0 = _check_point(g, x0)
    n_steps = math.ceil(t_end / dt - 1e-9)
    states, steps, fvals, taken = _core.integrate_rk4(
        payoff_matrix(g, c), np.ascontiguousarray(x0), float(dt), int(n_steps), float(stop_tol), int(record_every)
    )
    return Trajectory(
        states=states,
        times=steps * dt,
        fvals=fvals,
        c=float(c),
        step_mode="continuous",
        dt=float(dt),
        steps=int(taken),
        converged=taken < n_steps,
    )


def auto_shift(c: float) -> float:
    """All-ones shift making every payoff on the simplex positive (0 when ``c > 0``)."""
    return 0.0 if c > 0 else 1.0 - float(c)


def discrete_step(g: Graph, c: float, x, shift: float = 0.0) -> np.ndarray:
    x = _check_point(g, x)
    mx = payoff_matrix(g, c, shift) @ x
    if np.any((x > 0) & (mx <= 0)):
        raise ReplicatorError("discrete map undefined; shift c")
    y = x * mx / (x @ mx)
    return y / y.sum()


def iterate_discrete(
    g: Graph,
    c: float,
    x0,
    n_steps: int,
    shift: float | None = None,
    stop_tol: float = STOP_TOL,
    record_every: int = 1,
) -> Trajectory:
    """Iterate the multiplicative map; ``shift=None`` picks :func:`auto_shift`.

    ``fvals`` holds the unshifted objective.
    """
    x0 = _check_point(g, x0)
    kappa = auto_shift(c) if shift is None else float(shift)
    try:
        states, steps, fvals, taken = _core.iterate_discrete(
            payoff_matrix(g, c, kappa), np.ascontiguousarray(x0), int(n_steps), float(stop_tol), int(record_every)
        )
    except ValueError as exc:
        raise ReplicatorError(str(exc)) from exc
    return Trajectory(
        states=states,
        times=steps.astype(float),
        fvals=fvals - kappa,
        c=float(c),
        step_mode="discrete",
        steps=int(taken),
        shift=kappa,
        converged=taken < n_steps,
    )


def random_interior_point(n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.dirichlet(np.ones(n))
