"""Mean shift fixed-point iteration.

The update map is m(y) = sum_i x_i g_i(y) / sum_i g_i(y), the g-weighted
mean of the samples; the mean shift scalar is m(y) - y.  ``run`` iterates the
map until two consecutive estimates are closer than ``epsilon``.
"""
from dataclasses import dataclass
import enum
import math
from typing import NamedTuple

import numpy as np

from ._accel import CONVERGED, CUSTOM, DEGENERATE, numpy_kernels
from .errors import DegenerateWeightsError

__all__ = [
    "IterationConfig",
    "Termination",
    "StepRecord",
    "Trajectory",
    "mean_shift_scalar",
    "mode_update",
    "run",
    "map_derivative",
    "polish_fixed_point",
]


@dataclass(frozen=True)
class IterationConfig:
    epsilon: float = 0.0005
    max_iterations: int = 10_000

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon!r}")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ValueError(f"max_iterations must be a positive integer, got {self.max_iterations!r}")


class Termination(str, enum.Enum):
    CONVERGED = "converged"
    MAX_ITERATIONS = "max_iterations"
    DEGENERATE_WEIGHTS = "degenerate_weights"


_STATUS = {
    CONVERGED: Termination.CONVERGED,
    DEGENERATE: Termination.DEGENERATE_WEIGHTS,
}


class StepRecord(NamedTuple):
    y: float
    f_hat: float
    f_hat_prime: float
    step: float  # |y_{j+1} - y_j|, NaN for the last estimate


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Mode estimates y_1, y_2, ... with the density and slope at each one.

    ``y[0]`` is the start.  ``step[j] = |y[j+1] - y[j]|`` so ``step`` is one
    shorter than ``y``.  ``iterations`` counts applied updates.
    """

    start: float
    y: np.ndarray
    f_hat: np.ndarray
    f_hat_prime: np.ndarray
    terminated_by: Termination
    epsilon: float

    def __post_init__(self):
        for name in ("y", "f_hat", "f_hat_prime"):
            arr = np.array(getattr(self, name), dtype=np.float64)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if self.y.size == 0:
            raise ValueError("a trajectory holds at least its start")
        if not (self.y.size == self.f_hat.size == self.f_hat_prime.size):
            raise ValueError("y, f_hat and f_hat_prime must have equal length")
        object.__setattr__(self, "terminated_by", Termination(self.terminated_by))

    @property
    def step(self):
        return np.abs(np.diff(self.y))

    @property
    def final(self):
        return float(self.y[-1])

    @property
    def iterations(self):
        return self.y.size - 1

    @property
    def converged(self):
        return self.terminated_by is Termination.CONVERGED

    def __len__(self):
        return self.y.size

    @property
    def steps(self):
        steps = self.step
        return [
            StepRecord(float(y), float(f), float(fp), float(steps[j]) if j < steps.size else math.nan)
            for j, (y, f, fp) in enumerate(zip(self.y, self.f_hat, self.f_hat_prime))
        ]

    def __eq__(self, other):
        if not isinstance(other, Trajectory):
            return NotImplemented
        return (
            self.terminated_by is other.terminated_by
            and self.start == other.start
            and self.epsilon == other.epsilon
            and self.y.tobytes() == other.y.tobytes()
            and self.f_hat.tobytes() == other.f_hat.tobytes()
            and self.f_hat_prime.tobytes() == other.f_hat_prime.tobytes()
        )


def mode_update(model, y):
    """One mean shift update: the g-weighted mean of the samples seen from ``y``."""
    m = model._weighted_mean(y)
    if math.isnan(m):
        raise DegenerateWeightsError(y)
    return float(m)


def mean_shift_scalar(model, x):
    return mode_update(model, x) - x


def run(model, start, config=None):
    """Iterate ``mode_update`` from ``start`` and record every estimate.

    Stops once |y_{j+1} - y_j| < epsilon, after ``max_iterations`` updates, or
    when the weights vanish; the reason is in ``terminated_by``.
    """
    config = config or IterationConfig()
    start = float(start)
    if not math.isfinite(start):
        raise ValueError(f"start must be finite, got {start!r}")
    xs, p, h = model.samples.sorted_points, model.profile, model.bandwidth
    if p.code == CUSTOM:
        ys, dens, grads, status = numpy_kernels.run_trajectory(
            xs, p.code, h, start, config.epsilon, int(config.max_iterations), p.k, p.g
        )
    else:
        ys, dens, grads, status = model._kern.run_trajectory(
            xs, p.code, h, start, float(config.epsilon), int(config.max_iterations)
        )
    return Trajectory(
        start=start,
        y=ys,
        f_hat=dens * model.density_scale,
        f_hat_prime=grads * model.gradient_scale,
        terminated_by=_STATUS.get(status, Termination.MAX_ITERATIONS),
        epsilon=float(config.epsilon),
    )


def _update_many(model, at):
    out = model._many("weighted_mean_many", at)
    bad = np.isnan(out)
    if bad.any():
        raise DegenerateWeightsError(float(np.asarray(at, dtype=float).ravel()[bad][0]))
    return out


def map_derivative(model, x, fd_step=None):
    """Central-difference estimate of m'(x), default step 1e-5 * h.

    ``x`` may be an array, in which case an array is returned.
    """
    if fd_step is None:
        fd_step = 1e-5 * model.bandwidth
    if not fd_step > 0:
        raise ValueError("fd_step must be positive")
    x_arr = np.asarray(x, dtype=float)
    flat = x_arr.ravel()
    plus = _update_many(model, flat + fd_step)
    minus = _update_many(model, flat - fd_step)
    _update_many(model, flat)  # the centre itself must be weight-nondegenerate
    d = (plus - minus) / (2.0 * fd_step)
    if x_arr.ndim == 0:
        return float(d[0])
    return d.reshape(x_arr.shape)


def polish_fixed_point(model, y, tol=1e-13, max_iterations=100_000):
    """Keep iterating from ``y`` until the update moves less than ``tol * max(1, |y|)``.

    Used to stand in for the exact limit of a trajectory that was stopped at
    a coarse epsilon.  Near marginal fixed points convergence is sublinear and
    the result is only as good as ``max_iterations`` allows.
    """
    y = float(y)
    for _ in range(max_iterations):
        y_next = mode_update(model, y)
        if abs(y_next - y) <= tol * max(1.0, abs(y)):
            return y_next
        y = y_next
    return y
