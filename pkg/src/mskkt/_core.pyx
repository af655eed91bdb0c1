# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled replicator kernels. Same signatures as ``_core_py``."""

import numpy as np

cdef double _field(const double[:, ::1] M, const double[::1] x, double[::1] mx,
                   double[::1] out, Py_ssize_t n) noexcept nogil:
    """Write x_i((Mx)_i - x'Mx) into ``out``; return x'Mx."""
    cdef Py_ssize_t i, j
    cdef double acc, f = 0.0
    for i in range(n):
        acc = 0.0
        for j in range(n):
            acc += M[i, j] * x[j]
        mx[i] = acc
        f += x[i] * acc
    for i in range(n):
        out[i] = x[i] * (mx[i] - f)
    return f


cdef double _inf_norm(const double[::1] v, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i
    cdef double m = 0.0, a
    for i in range(n):
        a = v[i] if v[i] >= 0 else -v[i]
        if a > m:
            m = a
    return m


cdef void _project(double[::1] x, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i
    cdef double s = 0.0
    for i in range(n):
        if x[i] < 0.0:
            x[i] = 0.0
        s += x[i]
    for i in range(n):
        x[i] /= s


def integrate_rk4(double[:, ::1] M, double[::1] x0, double dt, long n_steps,
                  double stop_tol, long record_every):
    """Classical RK4 on the replicator field with projection after every step.

    Returns ``(states, steps, fvals, taken)``: recorded states and their step
    indices, the objective at every step (length ``taken + 1``) and the number
    of steps performed before reaching ``n_steps`` or ``stop_tol``.
    """
    cdef Py_ssize_t n = x0.shape[0]
    cdef Py_ssize_t i
    cdef long step = 0, last_recorded = 0
    x_arr = np.array(x0, dtype=np.float64)
    cdef double[::1] x = x_arr
    cdef double[::1] tmp = np.empty(n)
    cdef double[::1] mx = np.empty(n)
    cdef double[::1] k1 = np.empty(n)
    cdef double[::1] k2 = np.empty(n)
    cdef double[::1] k3 = np.empty(n)
    cdef double[::1] k4 = np.empty(n)
    fvals_arr = np.empty(n_steps + 1)
    cdef double[::1] fvals = fvals_arr
    states = [x_arr.copy()]
    steps = [0]
    cdef double h2 = 0.5 * dt, h6 = dt / 6.0

    fvals[0] = _field(M, x, mx, k1, n)
    with nogil:
        while step < n_steps and _inf_norm(k1, n) >= stop_tol:
            for i in range(n):
                tmp[i] = x[i] + h2 * k1[i]
            _field(M, tmp, mx, k2, n)
            for i in range(n):
                tmp[i] = x[i] + h2 * k2[i]
            _field(M, tmp, mx, k3, n)
            for i in range(n):
                tmp[i] = x[i] + dt * k3[i]
            _field(M, tmp, mx, k4, n)
            for i in range(n):
                x[i] += h6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            _project(x, n)
            step += 1
            fvals[step] = _field(M, x, mx, k1, n)
            if record_every > 0 and step % record_every == 0:
                with gil:
                    states.append(x_arr.copy())
                    steps.append(step)
                last_recorded = step
    if last_recorded != step:
        states.append(x_arr.copy())
        steps.append(step)
    return np.array(states), np.array(steps, dtype=np.int64), fvals_arr[: step + 1].copy(), step


def iterate_discrete(double[:, ::1] M, double[::1] x0, long n_steps,
                     double stop_tol, long record_every):
    """Multiplicative map x_i <- x_i (Mx)_i / x'Mx; same return layout as ``integrate_rk4``.

    Raises ``ValueError`` if a payoff on the support is not positive.
    """
    cdef Py_ssize_t n = x0.shape[0]
    cdef Py_ssize_t i
    cdef long step = 0, last_recorded = 0
    cdef double f
    cdef int bad = 0
    x_arr = np.array(x0, dtype=np.float64)
    cdef double[::1] x = x_arr
    cdef double[::1] mx = np.empty(n)
    cdef double[::1] fld = np.empty(n)
    fvals_arr = np.empty(n_steps + 1)
    cdef double[::1] fvals = fvals_arr
    states = [x_arr.copy()]
    steps = [0]

    f = _field(M, x, mx, fld, n)
    fvals[0] = f
    with nogil:
        while step < n_steps and _inf_norm(fld, n) >= stop_tol:
            for i in range(n):
                if x[i] > 0.0 and mx[i] <= 0.0:
                    bad = 1
            if bad:
                break
            for i in range(n):
                x[i] = x[i] * mx[i] / f
            _project(x, n)
            step += 1
            f = _field(M, x, mx, fld, n)
            fvals[step] = f
            if record_every > 0 and step % record_every == 0:
                with gil:
                    states.append(x_arr.copy())
                    steps.append(step)
                last_recorded = step
    if bad:
        raise ValueError("discrete map undefined; shift c")
    if last_recorded != step:
        states.append(x_arr.copy())
        steps.append(step)
    return np.array(states), np.array(steps, dtype=np.int64), fvals_arr[: step + 1].copy(), step
