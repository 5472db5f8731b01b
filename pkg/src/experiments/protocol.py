#!/usr/bin/env python3
"""
Experimental Protocol for the Separation-Based Clustering Algorithms

Runs every algorithm side by side on one instance and records the metrics
they are compared on:

🎯 KEY METRICS:
  📏 Min-Sp: smallest distance between two groups (higher is better)
  🌲 MST-Sp: weight of the spanning tree over the groups (higher is better)

📊 Additional Metrics:
  - Smallest group size
  - Quadratic loss, absolute and relative to k-means
  - Runtime (only with timing enabled, so output files stay reproducible)

Protocol:
  1. Run k-means for the seed
  2. L = ⌈(4/3)·s⌉ for k-means' smallest group size s (capped at ⌊n/k⌋)
  3. Run single-linkage, AlgoMinSp and Constrained-MaxMST (full and fast)
  4. Repeat per seed, average per algorithm

Usage:
    python cluster.py compare --input blobs.csv --k 5 --seeds 0,1,2,3,4,5,6,7,8,9
"""

import csv
import logging
import time
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np
from sklearn.datasets import make_blobs as sklearn_make_blobs

from src.spacing_clust.baseline import derive_L, kmeans
from src.spacing_clust.constrained import SizeConstraint, algo_min_sp, constrained_max_mst
from src.spacing_clust.dataset import DistanceModel
from src.spacing_clust.errors import ConfigError, DatasetError
from src.spacing_clust.linkage import cut, single_linkage, singleton_sweep
from src.spacing_clust.parallel import map_ordered
from src.spacing_clust.spacing import min_sp, mst_sp, quadratic_loss, spacing_graph
from src.spacing_clust.types import Algo, EllSchedule, Labels, Scheduler

logger = logging.getLogger("Experiments")


@dataclass(frozen=True)
class ComparisonRow:
    """Metrics of one algorithm on one seed."""
    seed: int
    algo: str
    k: int
    L: int
    min_sp: float
    mst_sp: float
    smallest_size: int
    quad_loss: Optional[float]
    rel_quad_loss: Optional[float]
    runtime_s: Optional[float] = None


COMPARISON_COLUMNS = [f.name for f in fields(ComparisonRow)]


def make_blobs(n: int, k: int, d: int = 2, seed: int = 0, spread: float = 0.5) -> Tuple[np.ndarray, np.ndarray]:
    """
    Synthetic point set with k well-separated Gaussian blobs.

    Centres sit 10 units apart on a line (d = 1) or on a circle of
    circumference ≈ 10·k in the first two coordinates. Blob sizes differ by
    at most one and points come grouped by blob.

    Returns:
        (points n×d, true blob id per point)
    """
    if k < 1 or n < k:
        raise DatasetError(f"need 1 ≤ k ≤ n, got n={n}, k={k}")
    if d < 1:
        raise DatasetError(f"dimension must be positive, got {d}")

    centres = np.zeros((k, d))
    if d == 1:
        centres[:, 0] = 10.0 * np.arange(k)
    else:
        radius = 10.0 * k / (2 * np.pi) if k > 1 else 0.0
        angles = 2 * np.pi * np.arange(k) / k + np.random.default_rng(seed).uniform(0, 2 * np.pi)
        centres[:, 0] = radius * np.cos(angles)
        centres[:, 1] = radius * np.sin(angles)

    points, truth = sklearn_make_blobs(n_samples=n, centers=centres, cluster_std=spread,
                                       shuffle=False, random_state=seed)
    return points, truth


def _row(model: DistanceModel, labels: Labels, seed: int, algo: Algo, L: int,
         base_loss: Optional[float], runtime: Optional[float]) -> ComparisonRow:
    g = spacing_graph(model, labels, workers=1)
    loss = quadratic_loss(model, labels)
    return ComparisonRow(
        seed=seed,
        algo=algo.value,
        k=labels.k,
        L=L,
        min_sp=min_sp(g),
        mst_sp=mst_sp(g).total,
        smallest_size=int(labels.sizes().min()),
        quad_loss=loss,
        rel_quad_loss=loss / base_loss if base_loss else None,
        runtime_s=runtime,
    )


def run_comparison(model: DistanceModel, k: int, seeds: Sequence[int], epsilon: str = "0",
                   scheduler: Scheduler = Scheduler.LPT, timing: bool = False,
                   workers: Optional[int] = None) -> List[ComparisonRow]:
    """
    k-means, single-linkage, AlgoMinSp and Constrained-MaxMST (full, fast) per seed.

    Seeds may run on several threads; rows come back in seed order, five per
    seed. Runtimes of the single-linkage based algorithms include the shared
    single-linkage run.

    Args:
        model: Points-mode instance
        k: Number of groups
        seeds: Seeds, one k-means run each
        epsilon: Size relaxation for the constrained algorithms
        scheduler: Scheduler inside AlgoMinSp
        timing: Record runtimes
        workers: Thread cap for the seed loop

    Returns:
        List of ComparisonRow
    """
    if not model.is_points:
        raise DatasetError("k-means requires coordinates")
    seeds = [int(s) for s in seeds]
    n = model.n

    start = time.perf_counter()
    seq = single_linkage(model)
    linkage_time = time.perf_counter() - start
    sl_labels = cut(seq, n - k)

    def _seed_rows(seed: int) -> List[ComparisonRow]:
        clock = time.perf_counter()
        km = kmeans(model, k, seed=seed)
        km_time = time.perf_counter() - clock
        L = derive_L(km.smallest_group(), n, k)
        c = SizeConstraint.parse(L, epsilon)
        base = km.inertia

        def _timed(fn):
            clock = time.perf_counter()
            labels = fn()
            return labels, linkage_time + time.perf_counter() - clock

        minsp, minsp_time = _timed(lambda: algo_min_sp(model, seq, k, c, scheduler=scheduler))
        (full, _), full_time = _timed(lambda: constrained_max_mst(
            model, seq, k, c, seed=seed, schedule_kind=EllSchedule.FULL, scheduler=scheduler, workers=1))
        (fast, _), fast_time = _timed(lambda: constrained_max_mst(
            model, seq, k, c, seed=seed, schedule_kind=EllSchedule.FAST, scheduler=scheduler, workers=1))

        runs = [
            (Algo.KMEANS, km.labels, km_time),
            (Algo.SINGLE_LINKAGE, sl_labels, linkage_time),
            (Algo.MINSP, minsp, minsp_time),
            (Algo.MAXMST, full, full_time),
            (Algo.MAXMST_FAST, fast, fast_time),
        ]
        rows = [_row(model, labels, seed, algo, L, base, elapsed if timing else None)
                for algo, labels, elapsed in runs]
        logger.info(f"seed={seed}: L={L}, k-means smallest group {km.smallest_group()}")
        return rows

    per_seed = map_ordered(_seed_rows, seeds, workers)
    rows = [row for chunk in per_seed for row in chunk]
    logger.info(f"Comparison over {len(seeds)} seeds finished in {time.perf_counter() - start:.2f}s")
    return rows


def _csv_cell(value):
    if value is None:
        return ""
    return repr(value) if isinstance(value, float) else value


def write_comparison_csv(rows: Sequence[ComparisonRow], out: Union[str, Path, TextIO]):
    """One line per (seed, algo) to a path or an open text stream; floats in repr form, missing values empty."""
    if isinstance(out, (str, Path)):
        with Path(out).open("w", newline="") as handle:
            write_comparison_csv(rows, handle)
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(COMPARISON_COLUMNS)
    for row in rows:
        values = asdict(row)
        writer.writerow([_csv_cell(values[c]) for c in COMPARISON_COLUMNS])


@dataclass(frozen=True)
class StabilityResult:
    """MST-Sp of Constrained-MaxMST across split seeds."""
    seeds: Tuple[int, ...]
    mst_sp: Tuple[float, ...]
    mean: float
    std: float


def split_stability(model: DistanceModel, k: int, L: int, seeds: Sequence[int], epsilon: str = "0",
                    schedule_kind: EllSchedule = EllSchedule.FULL,
                    scheduler: Scheduler = Scheduler.LPT) -> StabilityResult:
    """
    How much the random membership of balanced splits moves MST-Sp.

    The merge sequence is shared; only the split seed changes.
    """
    c = SizeConstraint.parse(L, epsilon)
    seq = single_linkage(model)
    values = []
    for seed in seeds:
        _, trace = constrained_max_mst(model, seq, k, c, seed=int(seed), schedule_kind=schedule_kind,
                                       scheduler=scheduler)
        values.append(trace.chosen.mst_sp)
    arr = np.asarray(values)
    result = StabilityResult(seeds=tuple(int(s) for s in seeds), mst_sp=tuple(values),
                             mean=float(arr.mean()), std=float(arr.std()))
    logger.info(f"Split stability over {len(values)} seeds: mean {result.mean:.6g}, std {result.std:.3g}")
    return result


def singleton_table(model: DistanceModel, k_min: int, k_max: int) -> List[Tuple[int, float]]:
    """Proportion of singleton groups in single-linkage k-clusterings for k_min..k_max."""
    if k_min > k_max:
        raise ConfigError(f"empty k range [{k_min}, {k_max}]")
    return singleton_sweep(model, range(k_min, k_max + 1))
