"""Pure-Python (numpy) replicator kernels; fallback for the compiled ``_core``."""

import numpy as np


def _field(M, x):
    mx = M @ x
    f = float(x @ mx)
    return x * (mx - f), mx, f


def _project(x):
    np.maximum(x, 0.0, out=x)
    x /= x.sum()


def integrate_rk4(M, x0, dt, n_steps, stop_tol, record_every):
    M = np.ascontiguousarray(M, dtype=float)
    x = np.array(x0, dtype=float)
    fvals = np.empty(n_steps + 1)
    states = [x.copy()]
    steps = [0]
    k1, _, fvals[0] = _field(M, x)
    step = 0
    h2, h6 = 0.5 * dt, dt / 6.0
    while step < n_steps and np.max(np.abs(k1)) >= stop_tol:
        k2 = _field(M, x + h2 * k1)[0]
        k3 = _field(M, x + h2 * k2)[0]
        k4 = _field(M, x + dt * k3)[0]
        x += h6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        _project(x)
        step += 1
        k1, _, fvals[step] = _field(M, x)
        if record_every > 0 and step % record_every == 0:
            states.append(x.copy())
            steps.append(step)
    if steps[-1] != step:
        states.append(x.copy())
        steps.append(step)
    return np.array(states), np.array(steps, dtype=np.int64), fvals[: step + 1].copy(), step


def iterate_discrete(M, x0, n_steps, stop_tol, record_every):
    M = np.ascontiguousarray(M, dtype=float)
    x = np.array(x0, dtype=float)
    fvals = np.empty(n_steps + 1)
    states = [x.copy()]
    steps = [0]
    fld, mx, f = _field(M, x)
    fvals[0] = f
    step = 0
    while step < n_steps and np.max(np.abs(fld)) >= stop_tol:
        if np.any((x > 0.0) & (mx <= 0.0)):
            raise ValueError("discrete map undefined; shift c")
        x = x * mx / f
        _project(x)
        step += 1
        fld, mx, f = _field(M, x)
        fvals[step] = f
        if record_every > 0 and step % record_every == 0:
            states.append(x.copy())
            steps.append(step)
    if steps[-1] != step:
        states.append(x.copy())
        steps.append(step)
    return np.array(states), np.array(steps, dtype=np.int64), fvals[: step + 1].copy(), step
