"""
Spacing Module.

Builds the spacing graph G_C induced by a clustering (vertices are groups,
edge weights are the minimum cross-group distances) and evaluates the two
separation criteria on it: Min-Sp and MST-Sp.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .dataset import DistanceModel
from .errors import ConfigError, DatasetError
from .mst import prim_tree
from .parallel import map_ordered
from .report import ClusteringReport
from .types import Labels

logger = logging.getLogger("Spacing")

# rows of the distance matrix materialized per block ≈ BLOCK_CELLS / n
BLOCK_CELLS = 1_000_000


@dataclass(frozen=True)
class SpacingGraph:
    """
    Complete graph on k groups.

    w[i][j] is the spacing between groups i and j; the diagonal holds +inf.
    """
    k: int
    w: np.ndarray


@dataclass(frozen=True)
class MstResult:
    """Minimum spanning tree of a spacing graph."""
    edges: Tuple[Tuple[int, int, float], ...]
    total: float
    sorted_weights: Tuple[float, ...]


def spacing_graph(model: DistanceModel, labels: Labels, workers: Optional[int] = None) -> SpacingGraph:
    """
    Exact inter-group spacings in one pass over all point pairs.

    Row blocks may run on several threads; each block yields a k×k partial
    minimum and blocks are combined with an elementwise minimum, so the
    result does not depend on scheduling.

    Args:
        model: The instance
        labels: Clustering of model's points, k ≥ 2
        workers: Thread cap (default: SPACING_CLUST_THREADS)

    Returns:
        SpacingGraph
    """
    if labels.n != model.n:
        raise ConfigError(f"labels cover {labels.n} points but the model has {model.n}")
    k = labels.k
    if k < 2:
        raise ConfigError("need at least two groups")

    assign = labels.assign
    order = np.argsort(assign, kind="stable")
    starts = np.concatenate(([0], np.cumsum(labels.sizes())[:-1]))

    n = model.n
    block = max(1, BLOCK_CELLS // n)
    blocks = [np.arange(r0, min(r0 + block, n)) for r0 in range(0, n, block)]

    def _partial(rows: np.ndarray) -> np.ndarray:
        dist = model.rows(rows)[:, order]
        mins = np.minimum.reduceat(dist, starts, axis=1)
        part = np.full((k, k), np.inf)
        np.minimum.at(part, assign[rows], mins)
        return part

    w = np.full((k, k), np.inf)
    for part in map_ordered(_partial, blocks, workers):
        np.minimum(w, part, out=w)
    w = np.minimum(w, w.T)
    np.fill_diagonal(w, np.inf)
    w.setflags(write=False)
    return SpacingGraph(k=k, w=w)


def min_sp(g: SpacingGraph) -> float:
    """Smallest spacing between any two groups."""
    return float(g.w.min())


def mst_sp(g: SpacingGraph) -> MstResult:
    """
    Minimum spanning tree of the spacing graph.

    Ties between equal weights prefer the lexicographically smaller (i, j).
    The total is math.fsum over the sorted weights, so it depends only on
    the multiset of tree weights.
    """
    lo, hi, w = prim_tree(g.k, lambda u: g.w[u])
    edges = tuple((int(a), int(b), float(c)) for a, b, c in zip(lo, hi, w))
    sorted_weights = tuple(sorted(float(c) for c in w))
    return MstResult(edges=edges, total=math.fsum(sorted_weights), sorted_weights=sorted_weights)


def quadratic_loss(model: DistanceModel, labels: Labels) -> float:
    """Sum of squared distances from each point to its group centroid."""
    if not model.is_points:
        raise DatasetError("quadratic loss needs coordinates (matrix mode)")
    points = model.points
    counts = labels.sizes().astype(np.float64)
    centroids = np.zeros((labels.k, points.shape[1]))
    np.add.at(centroids, labels.assign, points)
    centroids /= counts[:, None]
    diff = points - centroids[labels.assign]
    return float(np.einsum("ij,ij->", diff, diff))


def report(model: DistanceModel, labels: Labels, algo: str = "", L: Optional[int] = None,
           epsilon: Optional[float] = None, seed: Optional[int] = None,
           runtime_s: Optional[float] = None) -> ClusteringReport:
    """
    Bundle the separation criteria and size statistics of a clustering.

    quad_loss is left empty for matrix-mode models.
    """
    g = spacing_graph(model, labels)
    quad = None
    if model.is_points:
        quad = quadratic_loss(model, labels)
    else:
        logger.info("Quadratic loss unavailable in matrix mode; field left empty")
    return ClusteringReport(
        algo=algo,
        k=labels.k,
        L=L,
        epsilon=epsilon,
        seed=seed,
        min_sp=min_sp(g),
        mst_sp=mst_sp(g).total,
        sizes=sorted(int(s) for s in labels.sizes()),
        quad_loss=quad,
        runtime_s=runtime_s,
    )
