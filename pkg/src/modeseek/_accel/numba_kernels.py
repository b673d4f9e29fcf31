"""Compiled inner loops over the (sorted) sample array.

Every function takes the samples ``xs`` as a contiguous float64 array and a
profile code (see ``common``).  Sums run left to right; from
``COMPENSATED_MIN_N`` samples upward they use Neumaier compensation.
"""
import math

import numpy as np
from numba import njit

from .common import (
    COMPENSATED_MIN_N,
    CONVERGED,
    DEGENERATE,
    GAUSSIAN,
    MAX_ITERATIONS,
)


@njit(cache=True, inline="always")
def _k(u, code):
    if code == GAUSSIAN:
        return math.exp(-0.5 * u)
    if u <= 1.0:
        return 1.0 - u
    return 0.0


@njit(cache=True, inline="always")
def _g(u, code):
    if code == GAUSSIAN:
        return 0.5 * math.exp(-0.5 * u)
    if u < 1.0:
        return 1.0
    return 0.0


@njit(cache=True, inline="always")
def _add(s, c, t, compensated):
    if compensated:
        tot = s + t
        if abs(s) >= abs(t):
            c += (s - tot) + t
        else:
            c += (t - tot) + s
        return tot, c
    return s + t, c


@njit(cache=True)
def density_sum(xs, code, x, h):
    """Sum of k(((x - x_i)/h)^2)."""
    comp = xs.size >= COMPENSATED_MIN_N
    s = 0.0
    c = 0.0
    for i in range(xs.size):
        d = (x - xs[i]) / h
        s, c = _add(s, c, _k(d * d, code), comp)
    return s + c


@njit(cache=True)
def gradient_sum(xs, code, x, h):
    """Sum of g(((x - x_i)/h)^2) * (x_i - x)."""
    comp = xs.size >= COMPENSATED_MIN_N
    s = 0.0
    c = 0.0
    for i in range(xs.size):
        d = (x - xs[i]) / h
        s, c = _add(s, c, _g(d * d, code) * (xs[i] - x), comp)
    return s + c


@njit(cache=True)
def weighted_mean(xs, code, y, h):
    """g-weighted mean of the samples seen from y; NaN when all weights vanish."""
    n = xs.size
    comp = n >= COMPENSATED_MIN_N
    u = np.empty(n)
    umin = np.inf
    for i in range(n):
        d = (y - xs[i]) / h
        u[i] = d * d
        if u[i] < umin:
            umin = u[i]
    w = np.empty(n)
    s = 0.0
    c = 0.0
    for i in range(n):
        if code == GAUSSIAN:
            # common factor 0.5*exp(-umin/2) dropped: keeps far starts from underflowing
            w[i] = math.exp(-0.5 * (u[i] - umin))
        else:
            w[i] = _g(u[i], code)
        s, c = _add(s, c, w[i], comp)
    total = s + c
    if not total > 0.0:
        return np.nan
    s = 0.0
    c = 0.0
    for i in range(n):
        s, c = _add(s, c, (w[i] / total) * xs[i], comp)
    m = s + c
    # exact value lies in the hull; clamp rounding excursions
    if m < xs[0]:
        m = xs[0]
    elif m > xs[n - 1]:
        m = xs[n - 1]
    return m


@njit(cache=True)
def density_many(xs, code, at, h):
    out = np.empty(at.size)
    for j in range(at.size):
        out[j] = density_sum(xs, code, at[j], h)
    return out


@njit(cache=True)
def gradient_many(xs, code, at, h):
    out = np.empty(at.size)
    for j in range(at.size):
        out[j] = gradient_sum(xs, code, at[j], h)
    return out


@njit(cache=True)
def weighted_mean_many(xs, code, at, h):
    out = np.empty(at.size)
    for j in range(at.size):
        out[j] = weighted_mean(xs, code, at[j], h)
    return out


@njit(cache=True)
def run_trajectory(xs, code, h, start, epsilon, max_iterations):
    """Iterate the weighted-mean map from ``start``.

    Returns ``(ys, dens, grads, status)`` with raw (unnormalized) density and
    gradient sums at each recorded estimate.
    """
    ys = np.empty(max_iterations + 1)
    dens = np.empty(max_iterations + 1)
    grads = np.empty(max_iterations + 1)
    ys[0] = start
    dens[0] = density_sum(xs, code, start, h)
    grads[0] = gradient_sum(xs, code, start, h)
    count = 1
    status = MAX_ITERATIONS
    for _ in range(max_iterations):
        y = ys[count - 1]
        y_next = weighted_mean(xs, code, y, h)
        if np.isnan(y_next):
            status = DEGENERATE
            break
        ys[count] = y_next
        dens[count] = density_sum(xs, code, y_next, h)
        grads[count] = gradient_sum(xs, code, y_next, h)
        count += 1
        if abs(y_next - y) < epsilon:
            status = CONVERGED
            break
    return ys[:count].copy(), dens[:count].copy(), grads[:count].copy(), status
