"""
Dataset Module.

Loads point sets or precomputed distance matrices and exposes them through
one immutable DistanceModel. Downstream code only ever asks for distances.
"""

import csv
import logging
import math
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
from scipy.spatial.distance import cdist

from .errors import DatasetError
from .types import InputKind

logger = logging.getLogger("Dataset")

SYMMETRY_RTOL = 1e-9

PathLike = Union[str, Path]


def _max_coordinate(dim: int) -> float:
    """Largest |coordinate| for which every squared pairwise distance stays finite."""
    return math.sqrt(np.finfo(np.float64).max / max(dim, 1)) / 2


class DistanceModel:
    """
    An instance (X, dist): either points with Euclidean distance or an
    explicit symmetric matrix with zero diagonal.

    Instances are read-only after construction and can be shared between
    threads.
    """

    def __init__(self, points: Optional[np.ndarray] = None, matrix: Optional[np.ndarray] = None):
        if (points is None) == (matrix is None):
            raise DatasetError("provide exactly one of points or matrix")

        if points is not None:
            points = _as_float_array(points, "points")
            if points.ndim == 1:
                points = points.reshape(-1, 1)
            if points.ndim != 2:
                raise DatasetError(f"points must be an n×d array, got {points.ndim} dimensions")
            if not np.all(np.isfinite(points)):
                bad_row, bad_col = np.argwhere(~np.isfinite(points))[0]
                raise DatasetError("non-finite coordinate", row=int(bad_row), column=int(bad_col))
            span = float(np.max(np.abs(points))) if points.size else 0.0
            if span > _max_coordinate(points.shape[1]):
                raise DatasetError(f"coordinates up to {span:g} in magnitude would overflow squared distances")
            points.setflags(write=False)
            n = points.shape[0]
        else:
            matrix = _validated_matrix(matrix)
            n = matrix.shape[0]

        if n < 2:
            raise DatasetError("need at least 2 points")

        self._points = points
        self._matrix = matrix
        self.n = n

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def from_points(cls, points) -> "DistanceModel":
        return cls(points=points)

    @classmethod
    def from_matrix(cls, matrix) -> "DistanceModel":
        return cls(matrix=matrix)

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    @property
    def kind(self) -> InputKind:
        return InputKind.POINTS if self._points is not None else InputKind.MATRIX

    @property
    def is_points(self) -> bool:
        return self._points is not None

    @property
    def points(self) -> np.ndarray:
        """Coordinates (points mode only)."""
        if self._points is None:
            raise DatasetError("this model has no coordinates (matrix mode)")
        return self._points

    @property
    def dim(self) -> Optional[int]:
        return None if self._points is None else int(self._points.shape[1])

    def dist(self, i: int, j: int) -> float:
        """Distance between points i and j."""
        if self._matrix is not None:
            return float(self._matrix[i, j])
        return float(cdist(self._points[[i]], self._points[[j]])[0, 0])

    def rows(self, idx) -> np.ndarray:
        """Distances from the points in idx to every point, shape (len(idx), n)."""
        idx = np.atleast_1d(np.asarray(idx, dtype=np.int64))
        if self._matrix is not None:
            return self._matrix[idx]
        return cdist(self._points[idx], self._points)

    def row(self, i: int) -> np.ndarray:
        """Distances from point i to every point."""
        return self.rows([i])[0]

    def condensed(self) -> np.ndarray:
        """All n(n−1)/2 pair distances in scipy condensed order (i<j, row-major)."""
        iu = np.triu_indices(self.n, k=1)
        return self.full_matrix()[iu]

    def full_matrix(self) -> np.ndarray:
        """Dense n×n distance matrix; same kernel as rows(), so entries agree bit for bit."""
        if self._matrix is not None:
            return self._matrix
        return cdist(self._points, self._points)

    def __repr__(self) -> str:
        detail = f"d={self.dim}" if self.is_points else "matrix"
        return f"DistanceModel(n={self.n}, {detail})"


def _as_float_array(data, what: str) -> np.ndarray:
    try:
        return np.array(data, dtype=np.float64)
    except (TypeError, ValueError):
        raise DatasetError(f"{what} must be a rectangular array of numbers")


def _validated_matrix(matrix) -> np.ndarray:
    matrix = _as_float_array(matrix, "distance matrix")
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DatasetError(f"distance matrix must be square, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        bad_row, bad_col = np.argwhere(~np.isfinite(matrix))[0]
        raise DatasetError("non-finite distance", row=int(bad_row), column=int(bad_col))
    if np.any(matrix < 0):
        bad_row, bad_col = np.argwhere(matrix < 0)[0]
        raise DatasetError("negative distance", row=int(bad_row), column=int(bad_col))
    if not np.allclose(matrix, matrix.T, rtol=SYMMETRY_RTOL, atol=0.0):
        bad_row, bad_col = np.argwhere(~np.isclose(matrix, matrix.T, rtol=SYMMETRY_RTOL, atol=0.0))[0]
        raise DatasetError("asymmetric distance matrix", row=int(bad_row), column=int(bad_col))

    diag = np.diag(matrix)
    scale = float(matrix.max()) if matrix.size else 0.0
    diag_tol = SYMMETRY_RTOL * scale if scale > 0 else SYMMETRY_RTOL
    if np.any(diag > diag_tol):
        bad = int(np.flatnonzero(diag > diag_tol)[0])
        raise DatasetError("non-zero diagonal entry", row=bad, column=bad)

    matrix = (matrix + matrix.T) / 2.0
    np.fill_diagonal(matrix, 0.0)
    matrix.setflags(write=False)
    return matrix


def _read_numeric_rows(path: PathLike, has_header: bool, label_col: bool) -> List[List[float]]:
    path = Path(path)
    if not path.is_file():
        raise DatasetError(f"input file not found: {path}")

    rows: List[List[float]] = []
    width: Optional[int] = None
    skip_header = has_header
    with path.open(newline="") as handle:
        for line_no, record in enumerate(csv.reader(handle), start=1):
            if not record or all(not cell.strip() for cell in record):
                continue
            if skip_header:
                skip_header = False
                continue
            if label_col:
                record = record[:-1]
            if width is None:
                width = len(record)
            elif len(record) != width:
                raise DatasetError(f"expected {width} columns, found {len(record)}", row=line_no)
            values = []
            for col_no, cell in enumerate(record, start=1):
                try:
                    values.append(float(cell.strip()))
                except ValueError:
                    raise DatasetError(f"non-numeric cell '{cell.strip()}'", row=line_no, column=col_no)
            rows.append(values)

    if not rows or not width:
        raise DatasetError(f"no numeric data in {path}")
    return rows


def load_csv(path: PathLike, has_header: bool = False, label_col: bool = False) -> DistanceModel:
    """
    Load a point set from a comma-separated file.

    Args:
        path: CSV file, one point per row
        has_header: Skip the first row
        label_col: Drop the trailing column (class labels)

    Returns:
        Points-mode DistanceModel, row order preserved
    """
    rows = _read_numeric_rows(path, has_header, label_col)
    model = DistanceModel.from_points(np.asarray(rows))
    logger.info(f"Loaded {model.n} points with {model.dim} coordinates from {path}")
    return model


def load_matrix(path: PathLike, has_header: bool = False) -> DistanceModel:
    """
    Load a precomputed distance matrix from a square comma-separated file.

    Args:
        path: CSV file holding an n×n matrix
        has_header: Skip the first row

    Returns:
        Matrix-mode DistanceModel
    """
    rows = _read_numeric_rows(path, has_header, label_col=False)
    model = DistanceModel.from_matrix(np.asarray(rows))
    logger.info(f"Loaded {model.n}×{model.n} distance matrix from {path}")
    return model


def load_input(path: PathLike, kind: InputKind, has_header: bool = False, label_col: bool = False) -> DistanceModel:
    """Dispatch to load_csv or load_matrix."""
    if kind == InputKind.MATRIX:
        return load_matrix(path, has_header=has_header)
    return load_csv(path, has_header=has_header, label_col=label_col)
