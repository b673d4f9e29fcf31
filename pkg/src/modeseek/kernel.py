"""Kernel profiles.

A radially symmetric kernel is written K(x) = c * k(x**2), where ``k`` is the
profile and ``c`` the normalization constant.  The mean shift weights come
from ``g = -k'``.  Profiles carry capability flags instead of having them
inferred, because the convergence guarantees depend on them.
"""
from dataclasses import dataclass
import math
from typing import Callable, Dict

import numpy as np

from ._accel import CUSTOM, EPANECHNIKOV, GAUSSIAN
from .errors import DomainError

__all__ = [
    "KernelProfile",
    "GAUSSIAN_PROFILE",
    "EPANECHNIKOV_PROFILE",
    "profile_eval",
    "g_eval",
    "get_profile",
    "register_profile",
    "available_profiles",
]


@dataclass(frozen=True)
class KernelProfile:
    """A profile ``k``, its negated derivative ``g`` and what they guarantee.

    ``k`` and ``g`` must accept numpy arrays of nonnegative reals.
    ``code`` selects a compiled fast path for the built-in profiles; custom
    profiles keep the default and run on the numpy path.
    """

    name: str
    k: Callable[[np.ndarray], np.ndarray]
    g: Callable[[np.ndarray], np.ndarray]
    norm_const_1d: float
    strictly_decreasing_g: bool
    convex_profile: bool
    code: int = CUSTOM

    def __post_init__(self):
        if not self.norm_const_1d > 0:
            raise ValueError(f"norm_const_1d must be positive, got {self.norm_const_1d}")

    @property
    def theorem_applicable(self):
        """Whether the monotone-convergence guarantee covers this profile."""
        return self.convex_profile and self.strictly_decreasing_g


def _gaussian_k(u):
    return np.exp(-0.5 * np.asarray(u, dtype=float))


def _gaussian_g(u):
    return 0.5 * np.exp(-0.5 * np.asarray(u, dtype=float))


def _epanechnikov_k(u):
    u = np.asarray(u, dtype=float)
    return np.where(u <= 1.0, 1.0 - u, 0.0)


def _epanechnikov_g(u):
    # g(1) = 0: right-continuous, keeps points exactly one bandwidth away out of the mean
    u = np.asarray(u, dtype=float)
    return np.where(u < 1.0, 1.0, 0.0)


GAUSSIAN_PROFILE = KernelProfile(
    name="gaussian",
    k=_gaussian_k,
    g=_gaussian_g,
    norm_const_1d=1.0 / math.sqrt(2.0 * math.pi),
    strictly_decreasing_g=True,
    convex_profile=True,
    code=GAUSSIAN,
)

EPANECHNIKOV_PROFILE = KernelProfile(
    name="epanechnikov",
    k=_epanechnikov_k,
    g=_epanechnikov_g,
    norm_const_1d=0.75,
    strictly_decreasing_g=False,
    convex_profile=True,
    code=EPANECHNIKOV,
)

_REGISTRY: Dict[str, KernelProfile] = {
    GAUSSIAN_PROFILE.name: GAUSSIAN_PROFILE,
    EPANECHNIKOV_PROFILE.name: EPANECHNIKOV_PROFILE,
}


def _check_domain(x):
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise DomainError(f"profile argument must be nonnegative, got {x!r}")
    return arr


def _result(value, like):
    return float(value) if np.ndim(like) == 0 else value


def profile_eval(profile, x):
    """Evaluate k(x); ``x`` may be a scalar or an array."""
    arr = _check_domain(x)
    return _result(profile.k(arr), x)


def g_eval(profile, x):
    """Evaluate g(x) = -k'(x)."""
    arr = _check_domain(x)
    return _result(profile.g(arr), x)


def get_profile(name):
    try:
        return _REGISTRY[name]
    except KeyError:
        raise KeyError(
            f"unknown kernel {name!r}; available: {', '.join(sorted(_REGISTRY))}"
        ) from None


def register_profile(profile, *, replace=False):
    if not isinstance(profile, KernelProfile):
        raise TypeError("expected a KernelProfile")
    if profile.name in _REGISTRY and not replace:
        raise ValueError(f"kernel {profile.name!r} is already registered")
    _REGISTRY[profile.name] = profile
    return profile


def available_profiles():
    return sorted(_REGISTRY)
