"""One-dimensional mean shift mode seeking with convergence diagnostics."""
from ._accel import BACKEND
from .density import DensityModel, SampleSet, density_at, density_gradient_at
from .diagnostics import (
    check_density_ascent,
    check_gradient_at_limit,
    check_lemma1_ratio,
    check_step_inequality,
    classify_fixed_point,
    detect_monotone_tail,
    diagnose,
)
from .errors import DegenerateWeightsError, DomainError, InapplicableCheckError, ModeSeekError
from .kernel import EPANECHNIKOV_PROFILE, GAUSSIAN_PROFILE, KernelProfile, get_profile, register_profile
from .meanshift import IterationConfig, Trajectory, map_derivative, mean_shift_scalar, mode_update, run
from .modes import ModeSet, assign_clusters, grid_modes_oracle, prune_modes

__version__ = "0.1.0"
