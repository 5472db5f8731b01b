"""
Command-line front end.

Usage:
    python cluster.py run --input points.csv --algo minsp --k 3 --L 2
    python cluster.py compare --input blobs.csv --k 5 --seeds 0,1,2,3,4
    python cluster.py singletons --input points.csv --k-min 2 --k-max 40
    python cluster.py dendrogram --input points.csv --out merges.csv
    python cluster.py stability --input points.csv --k 5 --L 20 --seeds 0,1,2
    python cluster.py oracle verify --n 8 --k 3 --L 2 --trials 20 --seed 0
    python cluster.py oracle sched --sizes 5,4,3,3,2 --k 2
    python cluster.py schema

Exit codes: 0 success, 2 invalid input or parameters, 3 infeasible
instance, 1 anything else. Errors are reported on standard error.
"""

import argparse
import csv
import json
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from src.experiments import (
    ComparisonMetrics,
    run_comparison,
    singleton_table,
    split_stability,
    write_comparison_csv,
)

from .baseline import kmeans
from .config import configure_logging, override_settings
from .constrained import MaxMstTrace, SizeConstraint, algo_min_sp, constrained_max_mst
from .dataset import DistanceModel, load_input
from .errors import ConfigError, DatasetError, InfeasibleError
from .linkage import cut, export_dendrogram, single_linkage
from .oracle import verify_trials
from .report import SCHEMA_PATH, write_schema
from .scheduling import exact_schedule, lpt_schedule
from .spacing import report
from .types import Algo, EllSchedule, InputKind, Labels, Scheduler, parse_enum

logger = logging.getLogger("CLI")

CONSTRAINED_ALGOS = (Algo.MINSP, Algo.MAXMST, Algo.MAXMST_FAST)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3


# ============================================================================
# CONFIG
# ============================================================================

@dataclass(frozen=True)
class RunConfig:
    """
    Validated options of one CLI invocation.

    Attributes:
        command: Subcommand name
        input: Input file
        kind: points or matrix
        algo: Algorithm (run)
        k: Number of groups
        L: Minimum group size (constrained algorithms)
        epsilon: Size relaxation as decimal text
        seed: Seed for every random choice
        scheduler: Scheduler inside AlgoMinSp
        schedule: ℓ schedule of Constrained-MaxMST
        out_labels: Labels CSV path
        out_report: Report JSON path (stdout when absent)
        out_trace: Constrained-MaxMST trace JSON path
        timing: Record runtimes in the report
        has_header: Skip the first input line
        label_col: Drop the last input column
    """
    command: str
    input: Path
    kind: InputKind = InputKind.POINTS
    algo: Optional[Algo] = None
    k: Optional[int] = None
    L: Optional[int] = None
    epsilon: str = "0"
    seed: int = 0
    scheduler: Scheduler = Scheduler.LPT
    schedule: EllSchedule = EllSchedule.FULL
    out_labels: Optional[Path] = None
    out_report: Optional[Path] = None
    out_trace: Optional[Path] = None
    timing: bool = False
    has_header: bool = False
    label_col: bool = False

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        """Build and validate the config of the run subcommand."""
        algo = parse_enum(Algo, args.algo)
        if args.fast and algo == Algo.MAXMST:
            algo = Algo.MAXMST_FAST
        if algo in CONSTRAINED_ALGOS and args.L is None:
            raise ConfigError(f"--L is required for algo {algo.value}")
        if args.out_trace and algo not in (Algo.MAXMST, Algo.MAXMST_FAST):
            raise ConfigError("--out-trace needs algo maxmst or maxmst-fast")
        if args.seed < 0:
            raise ConfigError(f"--seed must be non-negative, got {args.seed}")

        return cls(
            command="run",
            input=Path(args.input),
            kind=InputKind.MATRIX if args.matrix else InputKind.POINTS,
            algo=algo,
            k=args.k,
            L=args.L if algo in CONSTRAINED_ALGOS else None,
            epsilon=args.epsilon,
            seed=args.seed,
            scheduler=_scheduler(args),
            schedule=EllSchedule.FAST if algo == Algo.MAXMST_FAST else EllSchedule.FULL,
            out_labels=Path(args.out_labels) if args.out_labels else None,
            out_report=Path(args.out_report) if args.out_report else None,
            out_trace=Path(args.out_trace) if args.out_trace else None,
            timing=args.timing,
            has_header=args.header,
            label_col=args.label_col,
        )


def _scheduler(args: argparse.Namespace) -> Scheduler:
    if getattr(args, "exact_sched", False):
        return Scheduler.EXACT
    return parse_enum(Scheduler, args.scheduler)


def parse_seeds(text: str) -> List[int]:
    """Comma-separated non-negative integers, e.g. "0,1,2"."""
    try:
        seeds = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"--seeds must be comma-separated integers, got '{text}'")
    if not seeds or any(s < 0 for s in seeds):
        raise ConfigError(f"--seeds must list non-negative integers, got '{text}'")
    return seeds


def _load(args: argparse.Namespace) -> DistanceModel:
    kind = InputKind.MATRIX if args.matrix else InputKind.POINTS
    return load_input(args.input, kind, has_header=args.header, label_col=args.label_col)


def _write_text(path: Optional[Path], text: str):
    """Write to path, or to stdout when no path is given."""
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _dump_json(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def write_labels(labels: Labels, path: Path):
    """Labels CSV with columns point,group."""
    with Path(path).open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["point", "group"])
        for point, group in enumerate(labels.assign.tolist()):
            writer.writerow([point, group])


# ============================================================================
# COMMANDS
# ============================================================================

def run_algorithm(model: DistanceModel, algo: Algo, k: int, L: Optional[int] = None, epsilon: str = "0",
                  seed: int = 0, scheduler: Scheduler = Scheduler.LPT,
                  schedule_kind: Optional[EllSchedule] = None) -> Tuple[Labels, Optional[MaxMstTrace],
                                                                        Optional[SizeConstraint]]:
    """
    Run one algorithm on a loaded instance.

    Returns:
        (labels, trace for Constrained-MaxMST else None, size constraint or None)
    """
    algo = Algo(algo)
    if not 2 <= k <= model.n:
        raise ConfigError(f"k must lie in [2, {model.n}], got {k}")
    if algo in CONSTRAINED_ALGOS and L is None:
        raise ConfigError(f"L is required for algo {algo.value}")
    c = SizeConstraint.parse(L, epsilon) if algo in CONSTRAINED_ALGOS else None
    if schedule_kind is None:
        schedule_kind = EllSchedule.FAST if algo == Algo.MAXMST_FAST else EllSchedule.FULL

    if algo == Algo.KMEANS:
        return kmeans(model, k, seed=seed).labels, None, None
    seq = single_linkage(model)
    if algo == Algo.SINGLE_LINKAGE:
        return cut(seq, model.n - k), None, None
    if algo == Algo.MINSP:
        return algo_min_sp(model, seq, k, c, scheduler=scheduler), None, c
    labels, trace = constrained_max_mst(model, seq, k, c, seed=seed, schedule_kind=schedule_kind,
                                        scheduler=scheduler)
    return labels, trace, c


def cmd_run(config: RunConfig) -> int:
    """Cluster one input file and write labels, report and trace."""
    model = load_input(config.input, config.kind, has_header=config.has_header, label_col=config.label_col)

    start = time.perf_counter()
    labels, trace, c = run_algorithm(model, config.algo, config.k, L=config.L, epsilon=config.epsilon,
                                     seed=config.seed, scheduler=config.scheduler, schedule_kind=config.schedule)
    elapsed = time.perf_counter() - start

    rep = report(model, labels, algo=config.algo.value, L=config.L,
                 epsilon=float(c.epsilon) if c is not None else None, seed=config.seed,
                 runtime_s=round(elapsed, 3) if config.timing else None)

    if config.out_labels is not None:
        write_labels(labels, config.out_labels)
    _write_text(config.out_report, rep.to_json())
    if config.out_trace is not None and trace is not None:
        _write_text(config.out_trace, _dump_json(trace.to_dict()))
    logger.info(f"{config.algo.value}: k={config.k}, Min-Sp {rep.min_sp:.6g}, MST-Sp {rep.mst_sp:.6g}, "
                f"sizes {rep.sizes}")
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    """Experimental protocol against k-means, one CSV row per (seed, algo)."""
    if args.matrix:
        raise ConfigError("compare runs k-means and needs coordinates, not a distance matrix")
    model = _load(args)
    if not 2 <= args.k <= model.n:
        raise ConfigError(f"--k must lie in [2, {model.n}], got {args.k}")
    rows = run_comparison(model, args.k, parse_seeds(args.seeds), epsilon=args.epsilon,
                          scheduler=_scheduler(args), timing=args.timing)
    write_comparison_csv(rows, args.out if args.out else sys.stdout)
    if args.report:
        ComparisonMetrics(rows).print_report()
    return EXIT_OK


def cmd_singletons(args: argparse.Namespace) -> int:
    """CSV of (k, proportion of singleton groups) for single-linkage."""
    model = _load(args)
    rows = singleton_table(model, args.k_min, args.k_max)
    lines = ["k,proportion"] + [f"{k},{prop!r}" for k, prop in rows]
    _write_text(Path(args.out) if args.out else None, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_dendrogram(args: argparse.Namespace) -> int:
    model = _load(args)
    export_dendrogram(single_linkage(model), args.out)
    return EXIT_OK


def cmd_stability(args: argparse.Namespace) -> int:
    """MST-Sp of Constrained-MaxMST across split seeds, as JSON."""
    model = _load(args)
    if not 2 <= args.k <= model.n:
        raise ConfigError(f"--k must lie in [2, {model.n}], got {args.k}")
    result = split_stability(model, args.k, args.L, parse_seeds(args.seeds), epsilon=args.epsilon,
                             schedule_kind=EllSchedule.FAST if args.fast else EllSchedule.FULL,
                             scheduler=_scheduler(args))
    data = {"k": args.k, "L": args.L, "seeds": list(result.seeds), "mst_sp": list(result.mst_sp),
            "mean": result.mean, "std": result.std}
    _write_text(Path(args.out) if args.out else None, _dump_json(data))
    return EXIT_OK


def cmd_oracle_verify(args: argparse.Namespace) -> int:
    """Brute-force guarantee checks on random tiny instances; exit 1 on any violation."""
    summary = verify_trials(args.n, args.k, args.L, args.trials, seed=args.seed, epsilon=args.epsilon,
                            dim=args.dim)
    _write_text(Path(args.out) if args.out else None, _dump_json(summary))
    return EXIT_OK if summary["failed"] == 0 else EXIT_INTERNAL


def cmd_oracle_sched(args: argparse.Namespace) -> int:
    """LPT and exact schedules of one item list, side by side."""
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    except ValueError:
        raise ConfigError(f"--sizes must be comma-separated integers, got '{args.sizes}'")
    lpt = lpt_schedule(sizes, args.k)
    exact = exact_schedule(sizes, args.k)

    def _as_dict(s):
        return {"machine_of": list(s.machine_of), "loads": list(s.loads), "min_load": s.min_load}

    data = {"sizes": sizes, "k": args.k, "lpt": _as_dict(lpt), "exact": _as_dict(exact),
            "lpt_ratio": lpt.min_load / exact.min_load if exact.min_load else 1.0}
    _write_text(None, _dump_json(data))
    return EXIT_OK


def cmd_schema(args: argparse.Namespace) -> int:
    write_schema(args.out)
    logger.info(f"Wrote report schema to {args.out}")
    return EXIT_OK


# ============================================================================
# PARSER
# ============================================================================

def _input_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--input", required=True, help="CSV of points (one row per point) or a distance matrix")
    parent.add_argument("--matrix", action="store_true", help="Input is an n×n distance matrix")
    parent.add_argument("--label-col", action="store_true", help="Ignore the last column (class labels)")
    parent.add_argument("--header", action="store_true", help="Skip the first line")
    return parent


def _constraint_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--epsilon", default="0", help="Size relaxation in [0, 1) (default: 0)")
    parent.add_argument("--scheduler", default="lpt", help="Scheduler inside AlgoMinSp: lpt or exact (default: lpt)")
    parent.add_argument("--exact-sched", action="store_true", help="Shorthand for --scheduler exact")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cluster", description="Size-constrained separation clustering")
    parser.add_argument("--log-level", default=None, help="Logging level (default: SPACING_CLUST_LOG_LEVEL or INFO)")
    parser.add_argument("--threads", type=int, default=None, help="Worker thread cap (default: SPACING_CLUST_THREADS)")
    sub = parser.add_subparsers(dest="command", required=True)
    inputs, constraint = _input_options(), _constraint_options()

    run = sub.add_parser("run", parents=[inputs, constraint], help="Cluster one input file")
    run.add_argument("--algo", required=True, help="single-linkage, minsp, maxmst, maxmst-fast or kmeans")
    run.add_argument("--k", type=int, required=True, help="Number of groups")
    run.add_argument("--L", type=int, default=None, help="Minimum group size (minsp, maxmst)")
    run.add_argument("--seed", type=int, default=0, help="Random seed (default: 0)")
    run.add_argument("--fast", action="store_true", help="Use the fast ℓ schedule for maxmst")
    run.add_argument("--out-labels", default=None, help="Write labels CSV (point,group)")
    run.add_argument("--out-report", default=None, help="Write report JSON (default: stdout)")
    run.add_argument("--out-trace", default=None, help="Write the Constrained-MaxMST trace JSON")
    run.add_argument("--timing", action="store_true", help="Record runtime in the report")
    run.set_defaults(handler=lambda a: cmd_run(RunConfig.from_args(a)))

    compare = sub.add_parser("compare", parents=[inputs, constraint], help="Compare every algorithm against k-means")
    compare.add_argument("--k", type=int, required=True, help="Number of groups")
    compare.add_argument("--seeds", default="0", help="Comma-separated seeds (default: 0)")
    compare.add_argument("--out", default=None, help="Comparison CSV (default: stdout)")
    compare.add_argument("--timing", action="store_true", help="Record runtimes")
    compare.add_argument("--report", action="store_true", help="Print averaged report to stdout")
    compare.set_defaults(handler=cmd_compare)

    singletons = sub.add_parser("singletons", parents=[inputs], help="Proportion of singleton groups per k")
    singletons.add_argument("--k-min", type=int, default=2, help="Smallest k (default: 2)")
    singletons.add_argument("--k-max", type=int, required=True, help="Largest k")
    singletons.add_argument("--out", default=None, help="CSV path (default: stdout)")
    singletons.set_defaults(handler=cmd_singletons)

    dendrogram = sub.add_parser("dendrogram", parents=[inputs], help="Export the single-linkage merge sequence")
    dendrogram.add_argument("--out", required=True, help="CSV path")
    dendrogram.set_defaults(handler=cmd_dendrogram)

    stability = sub.add_parser("stability", parents=[inputs, constraint], help="MST-Sp across split seeds")
    stability.add_argument("--k", type=int, required=True, help="Number of groups")
    stability.add_argument("--L", type=int, required=True, help="Minimum group size")
    stability.add_argument("--seeds", default="0,1,2,3,4,5,6,7,8,9", help="Comma-separated seeds")
    stability.add_argument("--fast", action="store_true", help="Use the fast ℓ schedule")
    stability.add_argument("--out", default=None, help="JSON path (default: stdout)")
    stability.set_defaults(handler=cmd_stability)

    oracle = sub.add_parser("oracle", help="Brute-force checks on tiny instances")
    oracle_sub = oracle.add_subparsers(dest="oracle_command", required=True)
    verify = oracle_sub.add_parser("verify", help="Check every guarantee on random instances")
    verify.add_argument("--n", type=int, required=True, help="Points per instance (≤ 12)")
    verify.add_argument("--k", type=int, required=True, help="Number of groups")
    verify.add_argument("--L", type=int, default=1, help="Minimum group size (default: 1)")
    verify.add_argument("--trials", type=int, default=10, help="Number of instances (default: 10)")
    verify.add_argument("--seed", type=int, default=0, help="Base seed (default: 0)")
    verify.add_argument("--epsilon", default="0", help="Size relaxation (default: 0)")
    verify.add_argument("--dim", type=int, default=2, help="Point dimension (default: 2)")
    verify.add_argument("--out", default=None, help="JSON path (default: stdout)")
    verify.set_defaults(handler=cmd_oracle_verify)
    sched = oracle_sub.add_parser("sched", help="Compare LPT with the exact scheduler")
    sched.add_argument("--sizes", required=True, help="Comma-separated positive item sizes")
    sched.add_argument("--k", type=int, required=True, help="Number of machines")
    sched.set_defaults(handler=cmd_oracle_sched)

    schema = sub.add_parser("schema", help="Regenerate the report JSON schema")
    schema.add_argument("--out", default=str(SCHEMA_PATH), help="Schema path")
    schema.set_defaults(handler=cmd_schema)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, dispatch and map failures to exit codes."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        override_settings(threads=args.threads, log_level=args.log_level)
        configure_logging()
        return args.handler(args)
    except (ConfigError, DatasetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except Exception as exc:
        logger.exception(f"Internal error: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
