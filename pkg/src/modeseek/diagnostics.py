"""Runtime checks of the convergence properties of a mean shift trajectory.

A finite run cannot assert a limit, so the limit statements become checks on
the last recorded estimate: the final step is below epsilon and the density
slope there is small.  Slack constants live in ``Tolerances``; every check
accepts an override.
"""
from dataclasses import asdict, dataclass
import enum
import math
from typing import NamedTuple, Optional
import warnings

import numpy as np

from .density import density_gradient_at
from .errors import InapplicableCheckError, TheoremPreconditionWarning
from .meanshift import Termination, map_derivative, polish_fixed_point

__all__ = [
    "Tolerances",
    "DEFAULT_TOLERANCES",
    "AscentResult",
    "StepInequalityRecord",
    "MonotoneTailReport",
    "StabilityClass",
    "FixedPointReport",
    "Lemma1Record",
    "TrajectoryDiagnostics",
    "phi_bound",
    "check_density_ascent",
    "check_step_inequality",
    "detect_monotone_tail",
    "check_gradient_at_limit",
    "classify_fixed_point",
    "lemma1_ratio_records",
    "check_lemma1_ratio",
    "diagnose",
]


@dataclass(frozen=True)
class Tolerances:
    ascent_slack: float = 1e-12
    inequality_slack: float = 1e-12
    ratio_slack: float = 0.05  # relative, on both ends of the sampled |m'| range
    marginal_band: float = 0.05  # tau: |m'| within tau of 1 is "marginal"
    gradient_rel: float = 1e-2  # of max |f'| along the trajectory
    gradient_floor: float = 1e-6
    lemma_noise_factor: float = 10.0  # skip pairs with e_j below this times epsilon
    lemma_samples: int = 33


DEFAULT_TOLERANCES = Tolerances()


def _need_steps(traj, what):
    if len(traj) < 2:
        raise InapplicableCheckError(f"{what} needs a trajectory with at least 2 estimates")


class AscentResult(NamedTuple):
    holds: bool
    first_violation: Optional[int]  # 0-based j with f(y_{j+1}) < f(y_j) - slack

    def __bool__(self):
        return self.holds


def check_density_ascent(traj, slack=None):
    _need_steps(traj, "density ascent")
    slack = DEFAULT_TOLERANCES.ascent_slack if slack is None else slack
    bad = np.flatnonzero(np.diff(traj.f_hat) < -slack)
    if bad.size:
        return AscentResult(False, int(bad[0]))
    return AscentResult(True, None)


def phi_bound(profile, d, h):
    """g(d^2/h^2): the smallest weight any sample can get inside the hull."""
    return float(profile.g(np.asarray((d / h) ** 2)))


class StepInequalityRecord(NamedTuple):
    j: int
    lhs: float
    rhs: float
    holds: bool


def check_step_inequality(traj, model, slack=None):
    """Compare each density increment with its quadratic lower bound.

    The bound is (c_k / h^2) * (y_{j+1} - y_j)^2 * g(d^2/h^2) where c_k is the
    normalization of the bandwidth-scaled kernel, c / h.
    """
    slack = DEFAULT_TOLERANCES.inequality_slack if slack is None else slack
    profile, h = model.profile, model.bandwidth
    if not profile.convex_profile:
        warnings.warn(
            f"profile {profile.name!r} is not convex; the step bound is not guaranteed",
            TheoremPreconditionWarning,
            stacklevel=2,
        )
    phi = phi_bound(profile, model.samples.d_max, h)
    c_k = profile.norm_const_1d / h
    coef = c_k / (h * h) * phi
    lhs = np.diff(traj.f_hat)
    rhs = coef * np.diff(traj.y) ** 2
    return [
        StepInequalityRecord(j, float(a), float(b), bool(a >= b - slack))
        for j, (a, b) in enumerate(zip(lhs, rhs))
    ]


class MonotoneTailReport(NamedTuple):
    tail_start: int  # 1-based N: y_N, y_{N+1}, ... is monotone
    direction: str  # "increasing", "decreasing" or "constant"
    is_fully_monotone: bool
    tail_length: int


def detect_monotone_tail(traj):
    y = np.asarray(traj.y if hasattr(traj, "y") else traj, dtype=float)
    if y.size < 2:
        raise InapplicableCheckError("monotone tail needs at least 2 estimates")
    d = np.diff(y)

    def suffix_start(ok):
        i = d.size - 1
        while i >= 0 and ok[i]:
            i -= 1
        return i + 2

    n_inc = suffix_start(d >= 0)
    n_dec = suffix_start(d <= 0)
    n = min(n_inc, n_dec)
    if n_inc == n_dec:
        direction = "constant"
    elif n_inc < n_dec:
        direction = "increasing"
    else:
        direction = "decreasing"
    return MonotoneTailReport(n, direction, n == 1, int(y.size - n + 1))


def check_gradient_at_limit(traj, model, tol=None, strict=True, tolerances=None):
    """|f'(final estimate)| < tol.

    Default ``tol`` is ``gradient_rel * max|f'|`` along the trajectory,
    floored at ``gradient_floor``.  Non-converged trajectories raise unless
    ``strict`` is False; degenerate ones always raise.
    """
    t = tolerances or DEFAULT_TOLERANCES
    if traj.terminated_by is Termination.DEGENERATE_WEIGHTS or (
        strict and traj.terminated_by is not Termination.CONVERGED
    ):
        raise InapplicableCheckError(
            f"gradient-at-limit needs a converged trajectory, got {traj.terminated_by.value}"
        )
    if tol is None:
        tol = max(t.gradient_rel * float(np.max(np.abs(traj.f_hat_prime))), t.gradient_floor)
    return bool(abs(density_gradient_at(model, traj.final)) < tol)


class StabilityClass(str, enum.Enum):
    ATTRACTING = "attracting"
    REPELLING = "repelling"
    MARGINAL = "marginal"


class FixedPointReport(NamedTuple):
    location: float
    map_derivative_abs: float
    stability_class: StabilityClass
    gradient_at_limit: float


def classify_fixed_point(model, x_star, tau=None, fd_step=None):
    tau = DEFAULT_TOLERANCES.marginal_band if tau is None else tau
    x_star = float(x_star)
    slope = abs(map_derivative(model, x_star, fd_step))
    if slope < 1.0 - tau:
        cls = StabilityClass.ATTRACTING
    elif slope > 1.0 + tau:
        cls = StabilityClass.REPELLING
    else:
        cls = StabilityClass.MARGINAL
    return FixedPointReport(x_star, slope, cls, float(density_gradient_at(model, x_star)))


class Lemma1Record(NamedTuple):
    j: int
    error: float  # e_j = |x* - y_j|
    next_error: float
    ratio: float
    slope_min: float
    slope_max: float
    checked: bool
    holds: bool


def _fd(fn, step):
    def deriv(x):
        x = np.asarray(x, dtype=float)
        plus = np.array([fn(v) for v in (x + step).ravel()])
        minus = np.array([fn(v) for v in (x - step).ravel()])
        return ((plus - minus) / (2.0 * step)).reshape(x.shape)

    return deriv


def lemma1_ratio_records(model, traj, x_star=None, update_map=None, fd_step=None, tolerances=None):
    """Per-step check that e_{j+1}/e_j lies within the range of |m'| between y_j and x*.

    ``x_star`` defaults to the trajectory's final estimate polished to the
    fixed point.  ``update_map`` replaces the mean shift map (e.g. an analytic
    test double); its derivative is then taken by central differences.
    """
    t = tolerances or DEFAULT_TOLERANCES
    if traj.terminated_by is not Termination.CONVERGED:
        raise InapplicableCheckError("the error-ratio check needs a converged trajectory")
    if update_map is None:
        if model is None:
            raise ValueError("either a model or an update_map is required")
        if not model.profile.strictly_decreasing_g:
            warnings.warn(
                f"profile {model.profile.name!r} has no strictly decreasing g; "
                "the update map need not be differentiable",
                TheoremPreconditionWarning,
                stacklevel=2,
            )
        if x_star is None:
            x_star = polish_fixed_point(model, traj.final)

        def deriv(x):
            return map_derivative(model, x, fd_step)

    else:
        if x_star is None:
            raise ValueError("x_star is required with a custom update_map")
        deriv = _fd(update_map, 1e-6 if fd_step is None else fd_step)

    x_star = float(x_star)
    floor = t.lemma_noise_factor * traj.epsilon
    y = traj.y
    records = []
    for j in range(y.size - 1):
        e0 = abs(x_star - y[j])
        e1 = abs(x_star - y[j + 1])
        if e0 < floor:
            records.append(Lemma1Record(j, e0, e1, math.nan, math.nan, math.nan, False, True))
            continue
        ratio = e1 / e0
        interior = np.linspace(y[j], x_star, t.lemma_samples + 2)[1:-1]
        slopes = np.abs(deriv(interior))
        lo, hi = float(slopes.min()), float(slopes.max())
        ok = lo * (1.0 - t.ratio_slack) <= ratio <= hi * (1.0 + t.ratio_slack)
        records.append(Lemma1Record(j, e0, e1, ratio, lo, hi, True, bool(ok)))
    return records


def check_lemma1_ratio(model, traj, x_star=None, update_map=None, fd_step=None, tolerances=None):
    records = lemma1_ratio_records(model, traj, x_star, update_map, fd_step, tolerances)
    return all(r.holds for r in records)


@dataclass(frozen=True)
class TrajectoryDiagnostics:
    """Everything checked about one trajectory, ready for JSON."""

    start: float
    terminated_by: str
    iterations: int
    final_estimate: float
    density_ascent: Optional[bool]
    step_inequality: Optional[bool]
    monotone_tail: Optional[dict]
    gradient_at_limit: Optional[bool]
    lemma1_ratio: Optional[bool]
    fixed_point: Optional[dict]
    theorem_applicable: bool

    def to_dict(self):
        return asdict(self)


def diagnose(traj, model, tolerances=None):
    """Run every check that applies; inapplicable ones come back as None."""
    t = tolerances or DEFAULT_TOLERANCES
    long_enough = len(traj) >= 2
    converged = traj.terminated_by is Termination.CONVERGED
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TheoremPreconditionWarning)
        ascent = check_density_ascent(traj, t.ascent_slack).holds if long_enough else None
        inequality = (
            all(r.holds for r in check_step_inequality(traj, model, t.inequality_slack))
            if long_enough
            else None
        )
        tail = detect_monotone_tail(traj)._asdict() if long_enough else None
        gradient = check_gradient_at_limit(traj, model, tolerances=t) if converged else None
        try:
            lemma = check_lemma1_ratio(model, traj, tolerances=t) if converged else None
        except ArithmeticError:
            lemma = None
        try:
            fp = classify_fixed_point(model, traj.final, t.marginal_band)
        except ArithmeticError:
            fp = None
    if fp is not None:
        fp = fp._asdict()
        fp["stability_class"] = fp["stability_class"].value
    return TrajectoryDiagnostics(
        start=traj.start,
        terminated_by=traj.terminated_by.value,
        iterations=traj.iterations,
        final_estimate=traj.final,
        density_ascent=ascent,
        step_inequality=inequality,
        monotone_tail=tail,
        gradient_at_limit=gradient,
        lemma1_ratio=lemma,
        fixed_point=fp,
        theorem_applicable=model.profile.theorem_applicable,
    )
