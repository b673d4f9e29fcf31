"""Command line entry point: ``modeseek run ...``."""
import argparse
import sys

from .errors import ModeSeekError
from .io import ALL_SAMPLES, REPLICA_STARTS, ExperimentConfig, FileSource, MixtureSource, run_experiment
from .kernel import available_profiles

_MIXTURE_KEYS = {
    "seed": ("seed", int),
    "npos": ("n_pos", int),
    "nneg": ("n_neg", int),
    "mupos": ("mu_pos", float),
    "muneg": ("mu_neg", float),
    "sigma": ("sigma", float),
}


def parse_mixture(text):
    """``seed=1,npos=500,...`` -> MixtureSource; omitted keys keep the two-Gaussian defaults."""
    kwargs = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        key, sep, value = part.partition("=")
        if not sep or key.strip() not in _MIXTURE_KEYS:
            raise argparse.ArgumentTypeError(
                f"bad mixture field {part!r}; expected key=value with key in {', '.join(_MIXTURE_KEYS)}"
            )
        name, conv = _MIXTURE_KEYS[key.strip()]
        try:
            kwargs[name] = conv(value)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad value for {key}: {value!r}") from None
    return MixtureSource(**kwargs)


def parse_starts(text):
    text = text.strip()
    if text in ("all", ALL_SAMPLES):
        return ALL_SAMPLES
    if text == "replica":
        return REPLICA_STARTS
    try:
        return tuple(float(s) for s in text.split(",") if s.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"starts must be 'all', 'replica' or comma-separated numbers, got {text!r}") from None


def build_parser():
    parser = argparse.ArgumentParser(prog="modeseek", description="One-dimensional mean shift with convergence diagnostics.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", help="run the iteration from a set of starts and write CSV/JSON reports")
    p.add_argument("--kernel", choices=available_profiles(), default="gaussian")
    p.add_argument("--bandwidth", type=float, default=1.0)
    p.add_argument("--epsilon", type=float, default=0.0005)
    p.add_argument("--max-iterations", type=int, default=10_000)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--data", metavar="FILE", help="newline-delimited samples, '#' comments allowed")
    src.add_argument(
        "--mixture", nargs="?", const="", type=parse_mixture, metavar="SPEC",
        help="seeded two-Gaussian mixture, e.g. seed=12345,npos=500,nneg=500,mupos=3,muneg=-3,sigma=1 (default when --data is absent)",
    )
    p.add_argument("--starts", type=parse_starts, default=REPLICA_STARTS,
                   help="comma-separated start values, 'all' for every sample, or 'replica' (default)")
    p.add_argument("--out-dir", default=".")
    p.add_argument("--quiet", action="store_true")
    return parser


def _print_summary(summary, out):
    print(f"{'start':>10} {'iters':>6} {'final':>12}  status", file=out)
    for traj in summary.trajectories[:50]:
        print(f"{traj.start:>10.4f} {traj.iterations:>6d} {traj.final:>12.6f}  {traj.terminated_by.value}", file=out)
    if len(summary.trajectories) > 50:
        print(f"... {len(summary.trajectories) - 50} more rows in summary.csv", file=out)
    sizes = summary.cluster_sizes
    for i, (m, s) in enumerate(zip(summary.modes, sizes)):
        print(f"mode {i}: {m:.6f} (trajectories: {s})", file=out)
    for name, path in summary.paths.items():
        print(f"wrote {name}: {path}", file=out)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    source = FileSource(args.data) if args.data else (args.mixture or MixtureSource())
    try:
        config = ExperimentConfig(
            data_source=source,
            kernel_name=args.kernel,
            bandwidth=args.bandwidth,
            epsilon=args.epsilon,
            max_iterations=args.max_iterations,
            starts=args.starts,
            out_dir=args.out_dir,
        )
        summary = run_experiment(config)
    except (ModeSeekError, ValueError, KeyError, OSError) as exc:
        print(f"modeseek: error: {exc}", file=sys.stderr)
        return 2
    if not args.quiet:
        _print_summary(summary, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
