import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.spacing_clust.dataset import DistanceModel, load_csv, load_input, load_matrix
from src.spacing_clust.errors import DatasetError
from src.spacing_clust.types import InputKind


def test_load_csv_distances(write_csv):
    model = load_csv(write_csv([(0, 0), (3, 4), (0, 1)]))
    assert model.n == 3
    assert model.dim == 2
    assert model.dist(0, 1) == 5.0
    assert model.dist(0, 2) == 1.0


def test_load_csv_grid_points(write_csv):
    path = write_csv([(100, 1), (100, 2), (200, 1), (200, 2), (100, 3)])
    model = load_csv(path)
    assert model.n == 5
    assert model.dist(0, 2) == 100.0


def test_load_csv_header_and_label_column(write_csv):
    path = write_csv([(0, 0, "a"), (3, 4, "b")], header="x,y,label")
    model = load_csv(path, has_header=True, label_col=True)
    assert model.n == 2
    assert model.dim == 2
    assert model.dist(0, 1) == 5.0


def test_load_csv_header_after_blank_lines(tmp_path):
    path = tmp_path / "blank_first.csv"
    path.write_text("\n\nx,y\n0,0\n3,4\n")
    model = load_csv(path, has_header=True)
    assert model.n == 2
    assert model.dist(0, 1) == 5.0


def test_load_csv_needs_two_points(write_csv):
    with pytest.raises(DatasetError, match="need at least 2 points"):
        load_csv(write_csv([(1, 2)]))


def test_load_csv_reports_bad_cell(write_csv):
    with pytest.raises(DatasetError) as exc:
        load_csv(write_csv([(0, 0), (1, "x"), (2, 2)]))
    assert exc.value.row == 2
    assert exc.value.column == 2
    assert "row 2" in str(exc.value)


def test_load_csv_ragged_rows(write_csv):
    with pytest.raises(DatasetError, match="expected 2 columns"):
        load_csv(write_csv([(0, 0), (1, 2, 3)]))


def test_load_csv_missing_file(tmp_path):
    with pytest.raises(DatasetError, match="not found"):
        load_csv(tmp_path / "absent.csv")


def test_load_matrix(write_csv):
    model = load_matrix(write_csv([(0, 7), (7, 0)]))
    assert model.kind == InputKind.MATRIX
    assert model.dist(0, 1) == 7.0


def test_load_matrix_asymmetric(write_csv):
    with pytest.raises(DatasetError, match="asymmetric"):
        load_matrix(write_csv([(0, 7), (6, 0)]))


def test_load_matrix_all_ties_is_valid(write_csv):
    model = load_matrix(write_csv([(0, 0, 0), (0, 0, 0), (0, 0, 0)]))
    assert model.n == 3
    assert model.dist(1, 2) == 0.0


@pytest.mark.parametrize("rows, message", [
    ([(0, 1, 2), (1, 0, 3)], "square"),
    ([(0, -1), (-1, 0)], "negative"),
    ([(1, 2), (2, 0)], "diagonal"),
])
def test_load_matrix_rejects(write_csv, rows, message):
    with pytest.raises(DatasetError, match=message):
        load_matrix(write_csv(rows))


def test_matrix_within_tolerance_is_symmetrized():
    model = DistanceModel.from_matrix([[0.0, 1.0], [1.0 + 1e-12, 0.0]])
    assert model.dist(0, 1) == model.dist(1, 0)


def test_load_input_dispatch(write_csv):
    path = write_csv([(0, 2), (2, 0)])
    assert load_input(path, InputKind.MATRIX).kind == InputKind.MATRIX
    assert load_input(path, InputKind.POINTS).kind == InputKind.POINTS


def test_ragged_points_rejected():
    with pytest.raises(DatasetError, match="rectangular"):
        DistanceModel.from_points([[0, 0], [1]])


def test_non_finite_rejected():
    with pytest.raises(DatasetError, match="non-finite"):
        DistanceModel.from_points([[0.0], [np.nan]])


def test_overflowing_coordinates_rejected():
    with pytest.raises(DatasetError, match="overflow"):
        DistanceModel.from_points([[1e200], [-1e200], [0.0]])


def test_large_coordinates_still_finite():
    model = DistanceModel.from_points([[1e150], [-1e150]])
    assert model.dist(0, 1) == pytest.approx(2e150)
    assert np.all(np.isfinite(model.full_matrix()))


def test_exactly_one_source():
    with pytest.raises(DatasetError):
        DistanceModel()
    with pytest.raises(DatasetError):
        DistanceModel(points=[[0], [1]], matrix=[[0, 1], [1, 0]])


def test_matrix_mode_has_no_points():
    model = DistanceModel.from_matrix([[0, 1], [1, 0]])
    with pytest.raises(DatasetError):
        _ = model.points
    assert model.dim is None


def test_condensed_agrees_with_dist():
    rng = np.random.default_rng(3)
    model = DistanceModel.from_points(rng.random((7, 3)))
    pairs = list(itertools.combinations(range(model.n), 2))
    condensed = model.condensed()
    assert condensed.size == model.n * (model.n - 1) // 2 == len(set(pairs))
    for value, (i, j) in zip(condensed, pairs):
        assert value == pytest.approx(model.dist(i, j), rel=1e-15)


def test_model_is_read_only():
    model = DistanceModel.from_points([[0.0], [1.0]])
    with pytest.raises(ValueError):
        model.points[0, 0] = 5.0


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_points_metric_axioms(seed):
    rng = np.random.default_rng(seed)
    model = DistanceModel.from_points(rng.normal(size=(6, 2)))
    for x, y, z in itertools.permutations(range(model.n), 3):
        assert model.dist(x, y) == model.dist(y, x)
        assert model.dist(x, z) <= model.dist(x, y) + model.dist(y, z) + 1e-12
