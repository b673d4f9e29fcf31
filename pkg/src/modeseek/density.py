"""Kernel density estimate and its analytic derivative in one dimension."""
from dataclasses import dataclass, field
import math

import numpy as np

from . import _accel
from ._accel import CUSTOM, numpy_kernels
from .kernel import KernelProfile

__all__ = [
    "SampleSet",
    "DensityModel",
    "density_at",
    "density_gradient_at",
    "density_on",
    "gradient_on",
]


class SampleSet:
    """Immutable ordered 1-D samples.

    ``points`` keeps the caller's order (cluster assignments index into it).
    All sums run over ``sorted_points`` instead, so results do not depend on
    how the samples were ordered.
    """

    __slots__ = ("_points", "_sorted", "_d_max")

    def __init__(self, points):
        arr = np.array(points, dtype=np.float64).ravel()
        if arr.size < 1:
            raise ValueError("a SampleSet needs at least one point")
        if not np.all(np.isfinite(arr)):
            raise ValueError("sample points must be finite")
        arr.flags.writeable = False
        srt = np.sort(arr, kind="stable")
        srt.flags.writeable = False
        self._points = arr
        self._sorted = srt
        self._d_max = float(srt[-1] - srt[0])

    @property
    def points(self):
        return self._points

    @property
    def sorted_points(self):
        return self._sorted

    @property
    def d_max(self):
        """Largest pairwise distance, max - min for 1-D data."""
        return self._d_max

    @property
    def lo(self):
        return float(self._sorted[0])

    @property
    def hi(self):
        return float(self._sorted[-1])

    def __len__(self):
        return self._points.size

    def __iter__(self):
        return iter(self._points.tolist())

    def __eq__(self, other):
        if not isinstance(other, SampleSet):
            return NotImplemented
        return np.array_equal(self._points, other._points)

    def __hash__(self):
        return hash(self._points.tobytes())

    def __repr__(self):
        return f"SampleSet(n={len(self)}, range=[{self.lo:g}, {self.hi:g}])"


@dataclass(frozen=True)
class DensityModel:
    samples: SampleSet
    profile: KernelProfile
    bandwidth: float
    _kern: object = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.samples, SampleSet):
            object.__setattr__(self, "samples", SampleSet(self.samples))
        h = float(self.bandwidth)
        if not (h > 0 and math.isfinite(h)):
            raise ValueError(f"bandwidth must be a positive finite number, got {self.bandwidth!r}")
        object.__setattr__(self, "bandwidth", h)
        kern = _accel.kernels if self.profile.code != CUSTOM else numpy_kernels
        object.__setattr__(self, "_kern", kern)

    @property
    def n(self):
        return len(self.samples)

    @property
    def density_scale(self):
        """c / (n h): multiplies the raw profile sum."""
        return self.profile.norm_const_1d / (self.n * self.bandwidth)

    @property
    def gradient_scale(self):
        """2c / (n h^3): multiplies the raw sum of g * (x_i - x)."""
        h = self.bandwidth
        return 2.0 * self.profile.norm_const_1d / (self.n * h * h * h)

    # raw kernel calls, shared with meanshift/modes
    def _density_sum(self, x):
        xs, p = self.samples.sorted_points, self.profile
        if p.code == CUSTOM:
            return numpy_kernels.density_sum(xs, p.code, x, self.bandwidth, p.k)
        return self._kern.density_sum(xs, p.code, float(x), self.bandwidth)

    def _gradient_sum(self, x):
        xs, p = self.samples.sorted_points, self.profile
        if p.code == CUSTOM:
            return numpy_kernels.gradient_sum(xs, p.code, x, self.bandwidth, p.g)
        return self._kern.gradient_sum(xs, p.code, float(x), self.bandwidth)

    def _weighted_mean(self, y):
        xs, p = self.samples.sorted_points, self.profile
        if p.code == CUSTOM:
            return numpy_kernels.weighted_mean(xs, p.code, y, self.bandwidth, p.g)
        return self._kern.weighted_mean(xs, p.code, float(y), self.bandwidth)

    def _many(self, name, at):
        at = np.ascontiguousarray(at, dtype=np.float64).ravel()
        xs, p = self.samples.sorted_points, self.profile
        if p.code == CUSTOM:
            extra = p.k if name == "density_many" else p.g
            return getattr(numpy_kernels, name)(xs, p.code, at, self.bandwidth, extra)
        return getattr(self._kern, name)(xs, p.code, at, self.bandwidth)


def density_at(model, x):
    """f(x) = c/(n h) * sum_i k(((x - x_i)/h)^2)."""
    return model.density_scale * model._density_sum(x)


def density_gradient_at(model, x):
    """Analytic f'(x); positive where the density increases with x."""
    return model.gradient_scale * model._gradient_sum(x)


def density_on(model, xs):
    """Vectorized ``density_at`` over an array of query points."""
    return model.density_scale * model._many("density_many", xs)


def gradient_on(model, xs):
    """Vectorized ``density_gradient_at``."""
    return model.gradient_scale * model._many("gradient_many", xs)
