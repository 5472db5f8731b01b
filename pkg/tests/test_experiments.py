import csv
import io

import numpy as np
import pytest
from sklearn.datasets import make_blobs as sklearn_make_blobs

from conftest import line
from src.experiments import (
    ComparisonMetrics,
    ComparisonRow,
    make_blobs,
    run_comparison,
    singleton_table,
    split_stability,
    summarize,
    write_comparison_csv,
)
from src.experiments.protocol import COMPARISON_COLUMNS
from src.spacing_clust.constrained import SizeConstraint, size_floor
from src.spacing_clust.dataset import DistanceModel
from src.spacing_clust.errors import ConfigError, DatasetError

ALGO_ORDER = ["kmeans", "single-linkage", "minsp", "maxmst", "maxmst-fast"]


def blob_model(n=60, k=3, seed=0):
    points, _ = make_blobs(n, k, seed=seed)
    return DistanceModel.from_points(points)


def test_make_blobs_shape_and_sizes():
    points, truth = make_blobs(31, 4, d=3, seed=2)
    assert points.shape == (31, 3)
    assert sorted(np.bincount(truth).tolist()) == [7, 8, 8, 8]


def test_make_blobs_on_a_line():
    points, truth = make_blobs(40, 4, d=1, seed=0, spread=0.0)
    assert points[:, 0].tolist() == (10.0 * truth).tolist()


def test_make_blobs_draws_like_sklearn():
    points, truth = make_blobs(25, 3, d=1, seed=7, spread=0.3)
    expected, expected_truth = sklearn_make_blobs(n_samples=25, centers=[[0.0], [10.0], [20.0]],
                                                  cluster_std=0.3, shuffle=False, random_state=7)
    assert np.array_equal(points, expected)
    assert truth.tolist() == expected_truth.tolist() == sorted(truth.tolist())


def test_make_blobs_rejects_bad_sizes():
    with pytest.raises(DatasetError):
        make_blobs(2, 3)


def test_comparison_rows():
    model = blob_model()
    rows = run_comparison(model, 3, [0, 1], workers=1)
    assert len(rows) == 10
    assert [r.algo for r in rows[:5]] == ALGO_ORDER
    assert [r.seed for r in rows] == [0] * 5 + [1] * 5
    for row in rows:
        assert row.k == 3
        assert row.runtime_s is None
        assert row.quad_loss is not None
    km = rows[0]
    assert km.rel_quad_loss == pytest.approx(1.0)
    assert all(r.L == km.L for r in rows[:5])


def test_comparison_is_independent_of_threads():
    model = blob_model(seed=3)
    assert run_comparison(model, 3, [0, 1, 2], workers=1) == run_comparison(model, 3, [0, 1, 2], workers=3)


def test_comparison_timing():
    rows = run_comparison(blob_model(), 3, [0], timing=True)
    assert all(r.runtime_s is not None and r.runtime_s >= 0 for r in rows)


def test_comparison_needs_coordinates():
    model = DistanceModel.from_matrix([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    with pytest.raises(DatasetError):
        run_comparison(model, 2, [0])


def test_write_comparison_csv_stream():
    row = ComparisonRow(seed=0, algo="minsp", k=2, L=3, min_sp=1.5, mst_sp=1.5, smallest_size=3,
                        quad_loss=None, rel_quad_loss=None)
    out = io.StringIO()
    write_comparison_csv([row], out)
    lines = out.getvalue().splitlines()
    assert lines[0] == ",".join(COMPARISON_COLUMNS)
    assert lines[1] == "0,minsp,2,3,1.5,1.5,3,,,"


def test_write_comparison_csv_path(tmp_path):
    rows = run_comparison(blob_model(), 3, [0])
    path = tmp_path / "compare.csv"
    write_comparison_csv(rows, path)
    with path.open() as handle:
        parsed = list(csv.DictReader(handle))
    assert [r["algo"] for r in parsed] == ALGO_ORDER
    assert float(parsed[2]["min_sp"]) == rows[2].min_sp


def test_metrics_summary():
    rows = [
        ComparisonRow(seed=s, algo=a, k=2, L=1, min_sp=v, mst_sp=v, smallest_size=1,
                      quad_loss=None, rel_quad_loss=None)
        for s, (a, v) in enumerate([("minsp", 1.0), ("minsp", 3.0), ("kmeans", 2.0)])
    ]
    metrics = ComparisonMetrics(rows)
    assert metrics.algos == ["minsp", "kmeans"]
    summary = metrics.summarize()
    assert summary["minsp"]["min_sp"] == {"mean": 2.0, "std": 1.0, "min": 1.0, "max": 3.0}
    assert "quad_loss" not in summary["minsp"]
    assert summarize(rows) == summary


def test_print_report(capsys):
    ComparisonMetrics(run_comparison(blob_model(), 3, [0])).print_report()
    out = capsys.readouterr().out
    assert "MIN_SP" in out
    assert "maxmst-fast" in out


def test_split_stability():
    model = blob_model(n=45, k=3, seed=1)
    result = split_stability(model, 3, 10, [0, 1, 2])
    assert result.seeds == (0, 1, 2)
    assert len(result.mst_sp) == 3
    assert result.mean == pytest.approx(np.mean(result.mst_sp))
    assert result.std >= 0


def test_singleton_table():
    assert singleton_table(line(0, 1, 2, 100), 2, 4) == [(2, 0.5), (3, pytest.approx(2 / 3)), (4, 1.0)]
    with pytest.raises(ConfigError):
        singleton_table(line(0, 1, 2, 100), 4, 2)


@pytest.mark.slow
@pytest.mark.parametrize("k", [3, 5])
@pytest.mark.parametrize("seed", range(5))
def test_separation_algorithms_beat_kmeans_on_blobs(seed, k):
    points, _ = make_blobs(300, k, seed=seed)
    model = DistanceModel.from_points(points)
    rows = {r.algo: r for r in run_comparison(model, k, [seed])}
    km = rows["kmeans"]
    assert rows["minsp"].min_sp >= km.min_sp
    assert rows["maxmst"].mst_sp >= km.mst_sp
    assert rows["maxmst-fast"].mst_sp >= km.mst_sp
    c = SizeConstraint(km.L)
    assert rows["minsp"].smallest_size >= c.min_size
    for algo in ("maxmst", "maxmst-fast"):
        assert rows[algo].smallest_size >= size_floor(model.n, k, c)
