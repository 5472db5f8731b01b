"""
Single-Linkage Module.

Runs single-linkage agglomeration once, keeps the full merge sequence and
cuts it after any prefix of t merges.

Ties between equal distances are broken by the realized point pair
(smaller index first, then larger index). Both strategies, Kruskal over all
pairs and the O(n)-memory Prim variant, order edges by
(weight, smaller index, larger index), so they produce identical sequences.
"""

import csv
import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Tuple, Union

import numpy as np

from .config import get_settings
from .dataset import DistanceModel
from .errors import ConfigError
from .mst import UnionFind, prim_tree, sort_edges
from .types import Labels, LinkageStrategy

logger = logging.getLogger("Linkage")


@dataclass(frozen=True)
class MergeRecord:
    """One agglomeration step."""
    step: int
    left: int
    right: int
    new: int
    weight: float
    size: int
    point_i: int
    point_j: int


@dataclass(frozen=True)
class MergeSequence:
    """
    The full single-linkage dendrogram: n−1 merges in order.

    Group ids follow the usual dendrogram convention: points are groups
    0..n−1 and merge s creates group n+s. Weights are non-decreasing.
    """
    n: int
    point_i: np.ndarray
    point_j: np.ndarray
    weights: np.ndarray
    left: np.ndarray
    right: np.ndarray
    sizes: np.ndarray

    def __len__(self) -> int:
        return int(self.weights.size)

    @property
    def merges(self) -> List[MergeRecord]:
        return [
            MergeRecord(
                step=s,
                left=int(self.left[s]),
                right=int(self.right[s]),
                new=self.n + s,
                weight=float(self.weights[s]),
                size=int(self.sizes[s]),
                point_i=int(self.point_i[s]),
                point_j=int(self.point_j[s]),
            )
            for s in range(len(self))
        ]


def _replay(n: int, edges_i: np.ndarray, edges_j: np.ndarray, weights: np.ndarray) -> MergeSequence:
    """Turn MST edges (already in merge order) into a MergeSequence."""
    uf = UnionFind(n)
    group_of_root = np.arange(n, dtype=np.int64)
    left = np.empty(n - 1, dtype=np.int64)
    right = np.empty(n - 1, dtype=np.int64)
    sizes = np.empty(n - 1, dtype=np.int64)
    for s in range(n - 1):
        ra, rb = uf.find(int(edges_i[s])), uf.find(int(edges_j[s]))
        left[s] = group_of_root[ra]
        right[s] = group_of_root[rb]
        root = uf.union(ra, rb)
        group_of_root[root] = n + s
        sizes[s] = uf.size[root]

    for arr in (edges_i, edges_j, weights, left, right, sizes):
        arr.setflags(write=False)
    return MergeSequence(n=n, point_i=edges_i, point_j=edges_j, weights=weights,
                         left=left, right=right, sizes=sizes)


def _kruskal_edges(model: DistanceModel) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = model.n
    w = model.condensed()
    ii, jj = np.triu_indices(n, k=1)
    order = np.lexsort((jj, ii, w))

    uf = UnionFind(n)
    out_i, out_j, out_w = [], [], []
    for e in order:
        a, b = int(ii[e]), int(jj[e])
        if uf.find(a) == uf.find(b):
            continue
        uf.union(a, b)
        out_i.append(a)
        out_j.append(b)
        out_w.append(w[e])
        if len(out_w) == n - 1:
            break
    return (np.asarray(out_i, dtype=np.int64), np.asarray(out_j, dtype=np.int64),
            np.asarray(out_w, dtype=np.float64))


def _prim_edges(model: DistanceModel) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    return sort_edges(*prim_tree(model.n, model.row))


def single_linkage(model: DistanceModel,
                   strategy: Union[LinkageStrategy, str] = LinkageStrategy.AUTO) -> MergeSequence:
    """
    Run single-linkage to completion and record every merge.

    Args:
        model: The instance
        strategy: kruskal (sort all pairs), prim (O(n) memory) or auto

    Returns:
        MergeSequence with n−1 merges in non-decreasing weight order
    """
    strategy = LinkageStrategy(strategy)
    if strategy == LinkageStrategy.AUTO:
        strategy = LinkageStrategy.PRIM if model.n >= get_settings().auto_prim_n else LinkageStrategy.KRUSKAL

    start = time.perf_counter()
    if strategy == LinkageStrategy.KRUSKAL:
        edges = _kruskal_edges(model)
    else:
        edges = _prim_edges(model)
    seq = _replay(model.n, *edges)
    logger.info(f"Built merge sequence for n={model.n} ({strategy.value}) in {time.perf_counter() - start:.3f}s")
    return seq


def _check_prefix(seq: MergeSequence, t: int):
    if not 0 <= t <= seq.n - 1:
        raise ConfigError(f"merge count t must lie in [0, {seq.n - 1}], got {t}")


def cut(seq: MergeSequence, t: int) -> Labels:
    """
    Clustering obtained after the first t merges.

    Args:
        seq: Merge sequence
        t: Number of merges to apply, 0 ≤ t ≤ n−1

    Returns:
        Labels with n−t groups
    """
    _check_prefix(seq, t)
    uf = UnionFind(seq.n)
    for s in range(t):
        uf.union(int(seq.point_i[s]), int(seq.point_j[s]))
    return Labels.from_assignment(uf.roots())


def group_sizes_at(seq: MergeSequence, t: int) -> np.ndarray:
    """Sizes of the n−t groups after t merges, in canonical group order."""
    return cut(seq, t).sizes()


def singleton_sweep(model: DistanceModel, k_values: Iterable[int],
                    seq: Optional[MergeSequence] = None) -> List[Tuple[int, float]]:
    """
    Proportion of singleton groups in the single-linkage k-clustering.

    Args:
        model: The instance
        k_values: Group counts, each in [2, n]
        seq: Precomputed merge sequence for model (optional)

    Returns:
        List of (k, proportion) pairs in the order given
    """
    k_values = list(k_values)
    for k in k_values:
        if not 2 <= k <= model.n:
            raise ConfigError(f"k must lie in [2, {model.n}], got {k}")
    if seq is None:
        seq = single_linkage(model)

    out = []
    for k in k_values:
        sizes = cut(seq, model.n - k).sizes()
        out.append((k, float(np.count_nonzero(sizes == 1)) / k))
    return out


def export_dendrogram(seq: MergeSequence, path: Union[str, Path]):
    """Write the merge sequence as CSV with columns step,left,right,weight."""
    with Path(path).open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["step", "left", "right", "weight"])
        for rec in seq.merges:
            writer.writerow([rec.step, rec.left, rec.right, repr(rec.weight)])
    logger.info(f"Wrote {len(seq)} merges to {path}")
