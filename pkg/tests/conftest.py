"""
Shared fixtures: clean settings per test and a few hand-checkable instances.
"""

import numpy as np
import pytest

from src.spacing_clust.config import AUTO_PRIM_ENV, LOG_LEVEL_ENV, THREADS_ENV, reset_settings
from src.spacing_clust.dataset import DistanceModel


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch):
    for name in (THREADS_ENV, LOG_LEVEL_ENV, AUTO_PRIM_ENV):
        monkeypatch.delenv(name, raising=False)
    reset_settings()
    yield
    reset_settings()


def line(*xs) -> DistanceModel:
    """Points on the real line."""
    return DistanceModel.from_points(np.asarray(xs, dtype=float).reshape(-1, 1))


def example_grid(k: int = 3, D: float = 100.0) -> DistanceModel:
    """Points (D·i, j) for i = 1..k−1, j = 1..k, listed column by column."""
    pts = [(D * i, j) for i in range(1, k) for j in range(1, k + 1)]
    return DistanceModel.from_points(np.asarray(pts, dtype=float))


@pytest.fixture
def grid_five() -> DistanceModel:
    """(100,1), (100,2), (200,1), (200,2), (100,3)."""
    return DistanceModel.from_points(np.array([[100, 1], [100, 2], [200, 1], [200, 2], [100, 3]], dtype=float))


@pytest.fixture
def write_csv(tmp_path):
    """Write rows to a CSV file and return its path."""
    def _write(rows, name="data.csv", header=None):
        path = tmp_path / name
        lines = [] if header is None else [header]
        lines += [",".join(str(v) for v in row) for row in rows]
        path.write_text("\n".join(lines) + "\n")
        return path
    return _write
