"""Sample files, the seeded two-Gaussian mixture, and experiment orchestration.

``run_experiment`` writes three files into the output directory:

``trajectories.csv``
    ``start, iteration, y, f_hat, f_hat_prime, step`` -- one row per recorded
    estimate, ``iteration`` 1-based (row 1 is the start).  ``step`` is
    ``|y_{j+1} - y_j|`` and empty on a trajectory's last row.
``summary.csv``
    One row per start: updates used, termination reason, final estimate, the
    mode it was assigned to, and the estimate at iterations 1, 5, 10, 20, 40,
    80 (empty when the trajectory is shorter).
``diagnostics.json``
    The configuration, the pruned modes with cluster sizes, and one entry per
    start with every convergence check (``null`` where inapplicable).

Floats are written in shortest round-trip form, so identical inputs give
byte-identical files.
"""
from dataclasses import dataclass, field
import csv
import json
import math
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .density import DensityModel, SampleSet
from .diagnostics import DEFAULT_TOLERANCES, diagnose
from .errors import SampleParseError
from .kernel import get_profile
from .meanshift import IterationConfig, Termination, run
from .modes import UNASSIGNED, prune_modes
from .rng import NormalStream

__all__ = [
    "REPLICA_STARTS",
    "REPLICA_SEED",
    "TABLE_ITERATIONS",
    "MixtureSource",
    "FileSource",
    "ExperimentConfig",
    "ExperimentSummary",
    "generate_mixture",
    "load_samples",
    "write_samples",
    "replica_config",
    "run_experiment",
]

REPLICA_STARTS = (6.045, -6.575, 0.905, -0.575, 4.457, -4.759, 0.588, -0.602, 5.076, -5.160)
REPLICA_SEED = 12345
TABLE_ITERATIONS = (1, 5, 10, 20, 40, 80)
ALL_SAMPLES = "all-samples"


def generate_mixture(seed, n_pos, n_neg, mu_pos, mu_neg, sigma):
    """``n_pos`` draws from N(mu_pos, sigma^2) followed by ``n_neg`` from N(mu_neg, sigma^2)."""
    if n_pos < 0 or n_neg < 0 or n_pos + n_neg < 1:
        raise ValueError(f"need nonnegative counts with a positive total, got {n_pos}, {n_neg}")
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    stream = NormalStream(seed)
    pos = stream.normal(mu_pos, sigma, int(n_pos))
    neg = stream.normal(mu_neg, sigma, int(n_neg))
    return SampleSet(pos + neg)


def load_samples(path):
    """Read one number per line; blank lines and lines starting with '#' are skipped."""
    path = Path(path)
    values = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                value = float(text)
            except ValueError:
                raise SampleParseError(path, lineno, line) from None
            if not math.isfinite(value):
                raise SampleParseError(path, lineno, line)
            values.append(value)
    if not values:
        raise ValueError(f"{path}: no samples found")
    return SampleSet(values)


def write_samples(path, samples):
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        for x in samples.points.tolist():
            fh.write(format(x, ".17g") + "\n")


@dataclass(frozen=True)
class MixtureSource:
    seed: int = REPLICA_SEED
    n_pos: int = 500
    n_neg: int = 500
    mu_pos: float = 3.0
    mu_neg: float = -3.0
    sigma: float = 1.0

    def load(self):
        return generate_mixture(self.seed, self.n_pos, self.n_neg, self.mu_pos, self.mu_neg, self.sigma)

    def describe(self):
        return {"type": "mixture", "seed": self.seed, "n_pos": self.n_pos, "n_neg": self.n_neg,
                "mu_pos": self.mu_pos, "mu_neg": self.mu_neg, "sigma": self.sigma}


@dataclass(frozen=True)
class FileSource:
    path: str

    def load(self):
        return load_samples(self.path)

    def describe(self):
        return {"type": "file", "path": str(self.path)}


@dataclass(frozen=True)
class ExperimentConfig:
    data_source: Union[MixtureSource, FileSource] = field(default_factory=MixtureSource)
    kernel_name: str = "gaussian"
    bandwidth: float = 1.0
    epsilon: float = 0.0005
    max_iterations: int = 10_000
    starts: Union[Sequence[float], str] = REPLICA_STARTS
    out_dir: Optional[str] = "."
    trajectories_name: str = "trajectories.csv"
    diagnostics_name: str = "diagnostics.json"
    summary_name: str = "summary.csv"

    def __post_init__(self):
        if not self.bandwidth > 0:
            raise ValueError("bandwidth must be positive")
        IterationConfig(self.epsilon, self.max_iterations)
        get_profile(self.kernel_name)
        if isinstance(self.starts, str):
            if self.starts != ALL_SAMPLES:
                raise ValueError(f"starts must be a list of numbers or {ALL_SAMPLES!r}")
        else:
            starts = tuple(float(s) for s in self.starts)
            if not starts or not all(math.isfinite(s) for s in starts):
                raise ValueError("starts must be a nonempty list of finite numbers")
            object.__setattr__(self, "starts", starts)

    @property
    def iteration(self):
        return IterationConfig(self.epsilon, self.max_iterations)

    def describe(self):
        return {
            "kernel": self.kernel_name,
            "bandwidth": self.bandwidth,
            "epsilon": self.epsilon,
            "max_iterations": self.max_iterations,
            "data_source": self.data_source.describe(),
            "starts": self.starts if isinstance(self.starts, str) else list(self.starts),
        }


def replica_config(out_dir=".", **overrides):
    """Two unit-variance Gaussians at +-3, 500 samples each, h = 1, epsilon = 0.0005, the ten published starts."""
    return ExperimentConfig(out_dir=out_dir, **overrides)


@dataclass
class ExperimentSummary:
    model: DensityModel
    trajectories: list
    diagnostics: list
    modes: tuple
    mode_densities: tuple
    assignments: list
    paths: dict

    @property
    def cluster_sizes(self):
        sizes = [0] * len(self.modes)
        for a in self.assignments:
            if a != UNASSIGNED:
                sizes[a] += 1
        return sizes

    @property
    def final_estimates(self):
        return [t.final for t in self.trajectories]


def _num(x):
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        return ""
    return repr(x)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return None if not math.isfinite(v) else v
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _write_trajectories(path, trajectories):
    with path.open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["start", "iteration", "y", "f_hat", "f_hat_prime", "step"])
        for traj in trajectories:
            steps = traj.step
            for j in range(len(traj)):
                w.writerow([
                    _num(traj.start), j + 1, _num(traj.y[j]), _num(traj.f_hat[j]),
                    _num(traj.f_hat_prime[j]), _num(steps[j]) if j < steps.size else "",
                ])


def _write_summary(path, trajectories, modes, assignments):
    with path.open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(
            ["start", "iterations", "terminated_by", "final_estimate", "mode_index", "assigned_mode"]
            + [f"y_at_{k}" for k in TABLE_ITERATIONS]
            + ["y_final"]
        )
        for traj, a in zip(trajectories, assignments):
            sampled = [_num(traj.y[k - 1]) if k <= len(traj) else "" for k in TABLE_ITERATIONS]
            w.writerow(
                [_num(traj.start), traj.iterations, traj.terminated_by.value, _num(traj.final),
                 a if a != UNASSIGNED else "", _num(modes[a]) if a != UNASSIGNED else ""]
                + sampled
                + [_num(traj.final)]
            )


def run_experiment(config, tolerances=None):
    """Run the iteration from every start, check each trajectory, and write the three output files."""
    samples = config.data_source.load()
    model = DensityModel(samples, get_profile(config.kernel_name), config.bandwidth)
    it = config.iteration
    starts = samples.points.tolist() if isinstance(config.starts, str) else list(config.starts)

    trajectories = [run(model, s, it) for s in starts]
    diags = [diagnose(t, model, tolerances or DEFAULT_TOLERANCES) for t in trajectories]

    usable = [t.final for t in trajectories if t.terminated_by is not Termination.DEGENERATE_WEIGHTS]
    if usable:
        pruned = prune_modes(usable, model, config=it)
        modes, densities = pruned.modes, pruned.densities
    else:
        modes, densities = (), ()
    assignments = []
    for t in trajectories:
        if not modes or t.terminated_by is Termination.DEGENERATE_WEIGHTS:
            assignments.append(UNASSIGNED)
        else:
            assignments.append(int(np.argmin(np.abs(np.asarray(modes) - t.final))))

    paths = {}
    if config.out_dir is not None:
        out = Path(config.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = {
            "trajectories": out / config.trajectories_name,
            "summary": out / config.summary_name,
            "diagnostics": out / config.diagnostics_name,
        }
        _write_trajectories(paths["trajectories"], trajectories)
        _write_summary(paths["summary"], trajectories, modes, assignments)
        sizes = [assignments.count(i) for i in range(len(modes))]
        report = {
            "config": config.describe(),
            "n_samples": len(samples),
            "modes": [
                {"index": i, "location": m, "density": d, "cluster_size": s}
                for i, (m, d, s) in enumerate(zip(modes, densities, sizes))
            ],
            "trajectories": [d.to_dict() for d in diags],
        }
        with paths["diagnostics"].open("w", encoding="utf-8", newline="\n") as fh:
            json.dump(_jsonable(report), fh, indent=2, allow_nan=False)
            fh.write("\n")

    return ExperimentSummary(model, trajectories, diags, tuple(modes), tuple(densities), assignments, paths)
