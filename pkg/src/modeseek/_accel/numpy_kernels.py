"""Pure-numpy twins of ``numba_kernels``.

Same signatures, plus optional ``kfun``/``gfun`` callables so user-registered
profiles (``code == CUSTOM``) can run here.  Below ``COMPENSATED_MIN_N`` terms
the sum is a sequential ``cumsum`` so the order matches the compiled loops;
above it ``math.fsum`` stands in for Neumaier compensation.
"""
import math

import numpy as np

from .common import (
    COMPENSATED_MIN_N,
    CONVERGED,
    DEGENERATE,
    EPANECHNIKOV,
    GAUSSIAN,
    MAX_ITERATIONS,
)


def _total(terms):
    if terms.size >= COMPENSATED_MIN_N:
        return math.fsum(terms)
    return float(np.cumsum(terms)[-1])


def _k(u, code, kfun):
    if code == GAUSSIAN:
        return np.exp(-0.5 * u)
    if code == EPANECHNIKOV:
        return np.where(u <= 1.0, 1.0 - u, 0.0)
    return np.asarray(kfun(u), dtype=float)


def _g(u, code, gfun):
    if code == GAUSSIAN:
        return 0.5 * np.exp(-0.5 * u)
    if code == EPANECHNIKOV:
        return np.where(u < 1.0, 1.0, 0.0)
    return np.asarray(gfun(u), dtype=float)


def _sq(xs, x, h):
    d = (x - xs) / h
    return d * d


def density_sum(xs, code, x, h, kfun=None):
    return _total(_k(_sq(xs, x, h), code, kfun))


def gradient_sum(xs, code, x, h, gfun=None):
    return _total(_g(_sq(xs, x, h), code, gfun) * (xs - x))


def weighted_mean(xs, code, y, h, gfun=None):
    u = _sq(xs, y, h)
    if code == GAUSSIAN:
        w = np.exp(-0.5 * (u - u.min()))
    else:
        w = _g(u, code, gfun)
    total = _total(w)
    if not total > 0.0:
        return np.nan
    m = _total((w / total) * xs)
    return min(max(m, xs[0]), xs[-1])


def density_many(xs, code, at, h, kfun=None):
    return np.array([density_sum(xs, code, x, h, kfun) for x in at], dtype=float)


def gradient_many(xs, code, at, h, gfun=None):
    return np.array([gradient_sum(xs, code, x, h, gfun) for x in at], dtype=float)


def weighted_mean_many(xs, code, at, h, gfun=None):
    return np.array([weighted_mean(xs, code, x, h, gfun) for x in at], dtype=float)


def run_trajectory(xs, code, h, start, epsilon, max_iterations, kfun=None, gfun=None):
    ys = [start]
    dens = [density_sum(xs, code, start, h, kfun)]
    grads = [gradient_sum(xs, code, start, h, gfun)]
    status = MAX_ITERATIONS
    for _ in range(max_iterations):
        y = ys[-1]
        y_next = weighted_mean(xs, code, y, h, gfun)
        if np.isnan(y_next):
            status = DEGENERATE
            break
        ys.append(y_next)
        dens.append(density_sum(xs, code, y_next, h, kfun))
        grads.append(gradient_sum(xs, code, y_next, h, gfun))
        if abs(y_next - y) < epsilon:
            status = CONVERGED
            break
    return np.array(ys), np.array(dens), np.array(grads), status
