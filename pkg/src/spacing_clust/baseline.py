"""
Baseline Module.

k-means with ++ seeding and Lloyd iterations, the reference method the
separation-based algorithms are compared against.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
from scipy.spatial.distance import cdist

from .dataset import DistanceModel
from .errors import ConfigError, DatasetError
from .types import Labels

logger = logging.getLogger("KMeans")

DEFAULT_MAX_ITER = 300
DEFAULT_TOL = 1e-6


@dataclass(frozen=True)
class KMeansResult:
    """
    Outcome of one seeded k-means run.

    Attributes:
        labels: Canonical labels
        centroids: k×d array, row g is the centroid of group g
        inertia: Sum of squared point-to-centroid distances
        iterations: Lloyd iterations performed
        converged: Centroid shift fell below tol before max_iter
        inertia_history: Inertia after every iteration (non-increasing)
    """
    labels: Labels
    centroids: np.ndarray
    inertia: float
    iterations: int
    converged: bool
    inertia_history: Tuple[float, ...] = field(repr=False)

    def smallest_group(self) -> int:
        return int(self.labels.sizes().min())


def _plus_plus(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding: each new centre is drawn with probability ∝ D(x)²."""
    n = X.shape[0]
    chosen = [int(rng.integers(n))]
    d2 = cdist(X, X[chosen], "sqeuclidean")[:, 0]
    for _ in range(1, k):
        total = d2.sum()
        if total > 0:
            nxt = int(rng.choice(n, p=d2 / total))
        else:
            # every point coincides with a centre already
            free = np.setdiff1d(np.arange(n), chosen)
            nxt = int(rng.choice(free))
        chosen.append(nxt)
        np.minimum(d2, cdist(X, X[[nxt]], "sqeuclidean")[:, 0], out=d2)
    return X[chosen].copy()


def _repair_empty(X: np.ndarray, C: np.ndarray, d2: np.ndarray, assign: np.ndarray, k: int):
    """Reseed every empty cluster at the point farthest from its centroid."""
    counts = np.bincount(assign, minlength=k)
    for empty in np.flatnonzero(counts == 0):
        cost = d2[np.arange(X.shape[0]), assign]
        cost[counts[assign] <= 1] = -1.0
        far = int(np.argmax(cost))
        counts[assign[far]] -= 1
        counts[empty] += 1
        assign[far] = empty
        C[empty] = X[far]
        d2[:, empty] = cdist(X, C[[empty]], "sqeuclidean")[:, 0]
        logger.debug(f"Reseeded empty cluster {empty} at point {far}")


def _means(X: np.ndarray, assign: np.ndarray, k: int) -> np.ndarray:
    sums = np.zeros((k, X.shape[1]))
    np.add.at(sums, assign, X)
    return sums / np.bincount(assign, minlength=k)[:, None]


def kmeans(model: DistanceModel, k: int, seed: int = 0, max_iter: int = DEFAULT_MAX_ITER,
           tol: float = DEFAULT_TOL) -> KMeansResult:
    """
    One k-means run: ++ seeding then Lloyd iterations.

    Assignment ties go to the lower centroid id. Iteration stops when the
    centroid shift relative to the centroid norm drops below tol.

    Args:
        model: Points-mode instance
        k: Number of groups, 1 ≤ k ≤ n
        seed: Seed for the ++ draws
        max_iter: Iteration cap
        tol: Relative centroid-shift tolerance

    Returns:
        KMeansResult
    """
    if not model.is_points:
        raise DatasetError("k-means requires coordinates")
    if not 1 <= k <= model.n:
        raise ConfigError(f"k must lie in [1, {model.n}], got {k}")
    if max_iter < 1:
        raise ConfigError(f"max_iter must be positive, got {max_iter}")

    start = time.perf_counter()
    X = model.points
    n = X.shape[0]
    rng = np.random.default_rng(seed)
    C = _plus_plus(X, k, rng)

    history = []
    converged = False
    iterations = 0
    assign = np.zeros(n, dtype=np.int64)
    for iterations in range(1, max_iter + 1):
        d2 = cdist(X, C, "sqeuclidean")
        assign = np.argmin(d2, axis=1)
        _repair_empty(X, C, d2, assign, k)

        updated = _means(X, assign, k)
        diff = X - updated[assign]
        history.append(float(np.einsum("ij,ij->", diff, diff)))

        shift = np.linalg.norm(updated - C)
        scale = max(float(np.linalg.norm(C)), np.finfo(float).tiny)
        C = updated
        if shift / scale < tol:
            converged = True
            break

    # final assignment against the final centroids, unless it would empty a cluster
    final = np.argmin(cdist(X, C, "sqeuclidean"), axis=1)
    if np.all(np.bincount(final, minlength=k) > 0):
        assign = final
    diff = X - C[assign]
    inertia = float(np.einsum("ij,ij->", diff, diff))
    history.append(inertia)

    labels = Labels.from_assignment(assign)
    centroids = np.empty_like(C)
    _, first_seen = np.unique(assign, return_index=True)
    centroids[labels.assign[first_seen]] = C
    centroids.setflags(write=False)

    logger.info(f"k={k}, seed={seed}: inertia {inertia:.6g} after {iterations} iterations "
                f"({'converged' if converged else 'max_iter reached'}) in {time.perf_counter() - start:.3f}s")
    return KMeansResult(labels=labels, centroids=centroids, inertia=inertia, iterations=iterations,
                        converged=converged, inertia_history=tuple(history))


def derive_L(smallest_group: int, n: int, k: int) -> int:
    """
    Minimum size for the constrained algorithms: ⌈(4/3)·s⌉ for the smallest
    k-means group size s, capped at ⌊n/k⌋ so the instance stays feasible.
    """
    if smallest_group < 1:
        raise ConfigError(f"smallest group size must be positive, got {smallest_group}")
    return max(1, min((4 * smallest_group + 2) // 3, n // k))
