"""Mode locations: a brute-force grid oracle, pruning of iteration endpoints,
and clustering of samples by the mode their trajectory reaches."""
from dataclasses import dataclass, field
import math

import numpy as np

from .density import density_at, density_gradient_at, density_on, gradient_on
from .errors import DegenerateWeightsError
from .meanshift import IterationConfig, Termination, run

__all__ = [
    "ModeSet",
    "UNASSIGNED",
    "default_window",
    "grid_modes_oracle",
    "prune_modes",
    "assign_clusters",
]

UNASSIGNED = -1
DEFAULT_RESOLUTION = 4097
BISECTION_STEPS = 60


@dataclass(frozen=True)
class ModeSet:
    modes: tuple
    densities: tuple
    assignments: tuple = ()
    endpoints: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        modes = tuple(float(m) for m in self.modes)
        if any(b <= a for a, b in zip(modes, modes[1:])):
            raise ValueError("modes must be strictly increasing")
        if len(self.densities) != len(modes):
            raise ValueError("one density per mode")
        if any(not (a == UNASSIGNED or 0 <= a < len(modes)) for a in self.assignments):
            raise ValueError("assignment index out of range")
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "densities", tuple(float(d) for d in self.densities))
        object.__setattr__(self, "assignments", tuple(int(a) for a in self.assignments))

    def __len__(self):
        return len(self.modes)

    def cluster_sizes(self):
        counts = [0] * len(self.modes)
        for a in self.assignments:
            if a != UNASSIGNED:
                counts[a] += 1
        return counts


def default_window(model):
    """[min - 3h, max + 3h]: the hull plus a margin for boundary slope behaviour."""
    h = model.bandwidth
    return model.samples.lo - 3.0 * h, model.samples.hi + 3.0 * h


def _bisect_slope(model, a, b):
    # invariant: f'(a) > 0 > f'(b)
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (a + b)
        s = density_gradient_at(model, mid)
        if s > 0:
            a = mid
        elif s < 0:
            b = mid
        else:
            return mid
    return 0.5 * (a + b)


def grid_modes_oracle(model, lo=None, hi=None, resolution=DEFAULT_RESOLUTION):
    """Locate every local maximum of the density on [lo, hi] without iterating the mean shift map.

    The analytic slope is evaluated on a uniform grid; each + to - sign change
    is refined by bisection.  A run of exact zeros between + and - reports its
    midpoint.  Flat stationary regions can therefore show up as extra modes.
    """
    if lo is None or hi is None:
        wlo, whi = default_window(model)
        lo = wlo if lo is None else lo
        hi = whi if hi is None else hi
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    if resolution < 3:
        raise ValueError("resolution must be at least 3")
    grid = np.linspace(lo, hi, int(resolution))
    sign = np.sign(gradient_on(model, grid))
    found = []
    n = grid.size
    i = 0
    while i < n - 1:
        if sign[i] > 0:
            j = i + 1
            while j < n and sign[j] == 0:
                j += 1
            if j < n and sign[j] < 0:
                if j == i + 1:
                    found.append(_bisect_slope(model, grid[i], grid[j]))
                else:
                    found.append(0.5 * (grid[i + 1] + grid[j - 1]))
            i = j
        else:
            i += 1
    found.sort()
    return ModeSet(found, [density_at(model, x) for x in found])


def _valley_between(model, a, b, samples=65):
    # at least eight probes per bandwidth so narrow dips are not stepped over
    samples = max(samples, int(8 * (b - a) / model.bandwidth) + 1)
    slope = gradient_on(model, np.linspace(a, b, samples))
    falling = np.flatnonzero(slope < 0)
    return falling.size > 0 and bool(np.any(slope[falling[0]:] > 0))


def prune_modes(estimates, model, merge_radius=None, config=None, tau=None, merge_same_hill=True):
    """Collapse iteration endpoints into distinct modes.

    Sorted estimates are grouped while consecutive gaps are at most
    ``merge_radius`` (default twice the stopping epsilon) or, with
    ``merge_same_hill``, while the density has no valley between them.  Each
    group is represented by its member of highest density; representatives
    whose fixed point is repelling are dropped.
    """
    from .diagnostics import StabilityClass, classify_fixed_point

    est = sorted(float(e) for e in estimates)
    if not est:
        raise ValueError("no estimates to prune")
    if any(not math.isfinite(e) for e in est):
        raise ValueError("estimates must be finite")
    if merge_radius is None:
        merge_radius = 2.0 * (config or IterationConfig()).epsilon
    if not merge_radius > 0:
        raise ValueError("merge_radius must be positive")

    groups = [[est[0]]]
    for prev, cur in zip(est, est[1:]):
        # the hill test is anchored at the group's first member so that a chain
        # down one side and up the next cannot bridge a valley
        anchor = groups[-1][0]
        if cur - prev <= merge_radius or (merge_same_hill and not _valley_between(model, anchor, cur)):
            groups[-1].append(cur)
        else:
            groups.append([cur])

    modes = []
    for group in groups:
        dens = density_on(model, group)
        rep = group[int(np.argmax(dens))]
        try:
            report = classify_fixed_point(model, rep, tau)
        except DegenerateWeightsError:
            report = None
        if report is not None and report.stability_class is StabilityClass.REPELLING:
            continue
        if modes and rep - modes[-1] <= merge_radius:
            continue
        modes.append(rep)
    return ModeSet(modes, [density_at(model, m) for m in modes])


def _nearest(modes, x):
    arr = np.asarray(modes)
    return int(np.argmin(np.abs(arr - x)))


def assign_clusters(samples, model, config=None, merge_radius=None):
    """Run the iteration from every sample and label each sample by the mode it reaches.

    Samples whose trajectory hits degenerate weights get ``UNASSIGNED``.
    ``endpoints`` on the result holds each sample's final estimate (NaN when
    degenerate), in sample order.
    """
    samples = model.samples if samples is None else samples
    config = config or IterationConfig()
    cache = {}
    endpoints = []
    for x in samples.points.tolist():
        if x not in cache:
            traj = run(model, x, config)
            bad = traj.terminated_by is Termination.DEGENERATE_WEIGHTS
            cache[x] = math.nan if bad else traj.final
        endpoints.append(cache[x])
    finite = [e for e in endpoints if not math.isnan(e)]
    if not finite:
        return ModeSet((), (), [UNASSIGNED] * len(endpoints), tuple(endpoints))
    pruned = prune_modes(finite, model, merge_radius, config)
    if not pruned.modes:
        assignments = [UNASSIGNED] * len(endpoints)
    else:
        assignments = [UNASSIGNED if math.isnan(e) else _nearest(pruned.modes, e) for e in endpoints]
    return ModeSet(pruned.modes, pruned.densities, assignments, tuple(endpoints))
