"""
Shared type definitions: option enums and the Labels clustering record.
"""

from dataclasses import dataclass
from enum import Enum
from typing import List, Sequence

import numpy as np

from .errors import ConfigError


class Algo(Enum):
    """Clustering algorithms reachable from the CLI and the service."""
    SINGLE_LINKAGE = "single-linkage"
    MINSP = "minsp"
    MAXMST = "maxmst"
    MAXMST_FAST = "maxmst-fast"
    KMEANS = "kmeans"


class Scheduler(Enum):
    """Max-min scheduling backend used inside AlgoMinSp."""
    LPT = "lpt"
    EXACT = "exact"


class EllSchedule(Enum):
    """Which ℓ values Constrained-MaxMST evaluates."""
    FULL = "full"
    FAST = "fast"


class SearchMode(Enum):
    """How AlgoMinSp looks for the merge prefix t."""
    BINARY = "binary"
    LINEAR = "linear"


class LinkageStrategy(Enum):
    """Implementation used to build the single-linkage merge sequence."""
    AUTO = "auto"
    KRUSKAL = "kruskal"
    PRIM = "prim"


class InputKind(Enum):
    """Shape of an input file."""
    POINTS = "points"
    MATRIX = "matrix"


def parse_enum(enum_cls, value: str):
    """Look up an enum member by value, raising ConfigError on a miss."""
    try:
        return enum_cls(value)
    except ValueError:
        choices = ", ".join(member.value for member in enum_cls)
        raise ConfigError(f"invalid {enum_cls.__name__} '{value}' (choose from: {choices})")


@dataclass(frozen=True)
class Labels:
    """
    Assignment of n points to k groups.

    Group ids are canonical: groups are numbered in order of their smallest
    member, so two equal partitions always produce equal label vectors.
    """
    assign: np.ndarray
    k: int

    def __post_init__(self):
        assign = np.asarray(self.assign, dtype=np.int64)
        if assign.ndim != 1 or assign.size == 0:
            raise ConfigError("labels must be a non-empty 1-D vector")
        if self.k < 1:
            raise ConfigError(f"group count must be positive, got {self.k}")
        if assign.min() < 0 or assign.max() >= self.k:
            raise ConfigError(f"group ids must lie in [0, {self.k})")
        counts = np.bincount(assign, minlength=self.k)
        if np.any(counts == 0):
            empty = int(np.flatnonzero(counts == 0)[0])
            raise ConfigError(f"group {empty} is empty")
        assign.setflags(write=False)
        object.__setattr__(self, "assign", assign)

    @property
    def n(self) -> int:
        return int(self.assign.size)

    def sizes(self) -> np.ndarray:
        """Size of each group, indexed by group id."""
        return np.bincount(self.assign, minlength=self.k)

    def groups(self) -> List[np.ndarray]:
        """Member point ids of each group, ascending."""
        order = np.argsort(self.assign, kind="stable")
        bounds = np.cumsum(self.sizes())[:-1]
        return np.split(order, bounds)

    @classmethod
    def from_assignment(cls, raw: Sequence[int]) -> "Labels":
        """Build canonical labels from any integer assignment vector."""
        raw = np.asarray(raw)
        _, first_seen, inverse = np.unique(raw, return_index=True, return_inverse=True)
        # rank groups by first occurrence
        rank = np.empty(first_seen.size, dtype=np.int64)
        rank[np.argsort(first_seen, kind="stable")] = np.arange(first_seen.size)
        return cls(rank[inverse.reshape(-1)], int(first_seen.size))

    @classmethod
    def from_groups(cls, groups: Sequence[Sequence[int]], n: int) -> "Labels":
        """Build canonical labels from explicit member lists covering [0, n)."""
        raw = np.full(n, -1, dtype=np.int64)
        for gid, members in enumerate(groups):
            members = np.asarray(members, dtype=np.int64)
            if members.size == 0:
                raise ConfigError(f"group {gid} is empty")
            if np.any(raw[members] != -1):
                raise ConfigError("a point was assigned to two groups")
            raw[members] = gid
        if np.any(raw == -1):
            missing = int(np.flatnonzero(raw == -1)[0])
            raise ConfigError(f"point {missing} is not assigned to any group")
        return cls.from_assignment(raw)
