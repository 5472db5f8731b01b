import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import line
from src.spacing_clust.baseline import derive_L, kmeans
from src.spacing_clust.dataset import DistanceModel
from src.spacing_clust.errors import ConfigError, DatasetError
from src.spacing_clust.spacing import quadratic_loss


def test_two_pairs():
    result = kmeans(line(0, 1, 10, 11), 2, seed=0)
    assert result.labels.assign.tolist() == [0, 0, 1, 1]
    assert result.inertia == pytest.approx(1.0)
    assert result.centroids[:, 0].tolist() == pytest.approx([0.5, 10.5])
    assert result.converged
    assert result.smallest_group() == 2


def test_seeded_runs_repeat():
    rng = np.random.default_rng(0)
    model = DistanceModel.from_points(rng.normal(size=(60, 2)))
    a = kmeans(model, 4, seed=7)
    b = kmeans(model, 4, seed=7)
    assert np.array_equal(a.labels.assign, b.labels.assign)
    assert a.inertia == b.inertia


def test_identical_points_keep_k_groups():
    model = DistanceModel.from_points(np.zeros((5, 2)))
    result = kmeans(model, 3, seed=1)
    assert result.labels.k == 3
    assert result.inertia == 0.0


def test_k_equals_n():
    result = kmeans(line(0, 3, 7), 3, seed=0)
    assert result.labels.sizes().tolist() == [1, 1, 1]
    assert result.inertia == 0.0


def test_matrix_mode_rejected():
    model = DistanceModel.from_matrix([[0, 1], [1, 0]])
    with pytest.raises(DatasetError, match="requires coordinates"):
        kmeans(model, 2)


@pytest.mark.parametrize("k", [0, 5])
def test_bad_k(k):
    with pytest.raises(ConfigError):
        kmeans(line(0, 1, 2, 3), k)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(min_value=5, max_value=80),
       st.integers(min_value=1, max_value=6))
def test_inertia_history_and_labels(seed, n, k):
    k = min(k, n)
    rng = np.random.default_rng(seed)
    model = DistanceModel.from_points(rng.normal(size=(n, 2)))
    result = kmeans(model, k, seed=seed)
    history = np.asarray(result.inertia_history)
    assert np.all(np.diff(history) <= 1e-9 * max(1.0, history[0]))
    assert result.labels.k == k
    assert result.labels.sizes().min() >= 1
    # centroids belong to the canonical groups
    for g, members in enumerate(result.labels.groups()):
        assert np.allclose(result.centroids[g], model.points[members].mean(axis=0)) or not result.converged
    assert result.inertia == pytest.approx(quadratic_loss(model, result.labels)) or not result.converged


@pytest.mark.parametrize("s, n, k, expected", [
    (3, 100, 5, 4),
    (6, 100, 5, 8),
    (1, 100, 5, 2),
    (30, 100, 5, 20),
    (1, 3, 3, 1),
])
def test_derive_L(s, n, k, expected):
    assert derive_L(s, n, k) == expected


def test_derive_L_rejects_empty_group():
    with pytest.raises(ConfigError):
        derive_L(0, 10, 2)
