import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.sparse.csgraph import minimum_spanning_tree

from conftest import line
from src.spacing_clust.config import AUTO_PRIM_ENV, reset_settings
from src.spacing_clust.dataset import DistanceModel
from src.spacing_clust.errors import ConfigError
from src.spacing_clust.linkage import cut, export_dendrogram, group_sizes_at, single_linkage, singleton_sweep
from src.spacing_clust.types import LinkageStrategy


def brute_force_weights(model: DistanceModel) -> list:
    """Agglomerate by rescanning every cross-group pair at each step."""
    full = model.full_matrix()
    groups = [{i} for i in range(model.n)]
    weights = []
    while len(groups) > 1:
        best = None
        for a in range(len(groups)):
            for b in range(a + 1, len(groups)):
                w = min(full[x, y] for x in groups[a] for y in groups[b])
                if best is None or w < best[0]:
                    best = (w, a, b)
        w, a, b = best
        weights.append(w)
        groups[a] |= groups.pop(b)
    return weights


def test_three_points_on_a_line():
    seq = single_linkage(line(0, 1, 10))
    merges = seq.merges
    assert len(merges) == 2
    assert (merges[0].left, merges[0].right, merges[0].new, merges[0].weight) == (0, 1, 3, 1.0)
    assert (merges[1].left, merges[1].right, merges[1].new, merges[1].weight) == (3, 2, 4, 9.0)
    assert merges[1].size == 3


def test_grid_tie_break_order(grid_five):
    seq = single_linkage(grid_five)
    assert seq.weights[:3].tolist() == [1.0, 1.0, 1.0]
    pairs = list(zip(seq.point_i.tolist(), seq.point_j.tolist()))
    # (100,1)-(100,2), then (100,3) joins, then (200,1)-(200,2)
    assert pairs[:3] == [(0, 1), (1, 4), (2, 3)]
    assert seq.weights[3] == 100.0


def test_cut_extremes():
    seq = single_linkage(line(0, 1, 10, 11))
    assert cut(seq, 0).k == 4
    assert cut(seq, 0).sizes().tolist() == [1, 1, 1, 1]
    assert cut(seq, 3).k == 1


def test_cut_two_merges():
    seq = single_linkage(line(0, 1, 10, 11))
    labels = cut(seq, 2)
    assert labels.assign.tolist() == [0, 0, 1, 1]
    assert group_sizes_at(seq, 2).tolist() == [2, 2]


@pytest.mark.parametrize("t", [-1, 4])
def test_cut_out_of_range(t):
    seq = single_linkage(line(0, 1, 10, 11))
    with pytest.raises(ConfigError):
        cut(seq, t)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(min_value=2, max_value=9))
def test_weights_match_brute_force_agglomeration(seed, n):
    rng = np.random.default_rng(seed)
    model = DistanceModel.from_points(rng.random((n, 2)))
    seq = single_linkage(model)
    assert seq.weights.tolist() == brute_force_weights(model)
    assert np.all(np.diff(seq.weights) >= 0)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(min_value=2, max_value=40))
def test_kruskal_and_prim_agree(seed, n):
    rng = np.random.default_rng(seed)
    # integer coordinates give many equal distances
    model = DistanceModel.from_points(rng.integers(0, 4, size=(n, 2)))
    kruskal = single_linkage(model, LinkageStrategy.KRUSKAL)
    prim = single_linkage(model, LinkageStrategy.PRIM)
    assert kruskal.point_i.tolist() == prim.point_i.tolist()
    assert kruskal.point_j.tolist() == prim.point_j.tolist()
    assert kruskal.weights.tolist() == prim.weights.tolist()
    assert kruskal.left.tolist() == prim.left.tolist()


@pytest.mark.parametrize("seed", range(5))
def test_merge_weights_are_an_mst(seed):
    rng = np.random.default_rng(seed)
    model = DistanceModel.from_points(rng.random((64, 3)))
    seq = single_linkage(model)
    tree = minimum_spanning_tree(model.full_matrix())
    assert seq.weights.sum() == pytest.approx(tree.sum(), rel=1e-12)
    assert sorted(seq.weights.tolist()) == pytest.approx(sorted(tree.data.tolist()), rel=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(min_value=2, max_value=12))
def test_every_cut_covers_all_points(seed, n):
    rng = np.random.default_rng(seed)
    seq = single_linkage(DistanceModel.from_points(rng.random((n, 2))))
    for t in range(n):
        labels = cut(seq, t)
        assert labels.k == n - t
        assert labels.sizes().sum() == n
        assert labels.sizes().min() >= 1


def test_auto_strategy_switches_to_prim(monkeypatch):
    model = DistanceModel.from_points(np.random.default_rng(1).random((30, 2)))
    expected = single_linkage(model, LinkageStrategy.KRUSKAL)
    monkeypatch.setenv(AUTO_PRIM_ENV, "10")
    reset_settings()
    auto = single_linkage(model)
    assert auto.weights.tolist() == expected.weights.tolist()
    assert auto.point_i.tolist() == expected.point_i.tolist()


def test_matrix_mode_linkage():
    model = DistanceModel.from_matrix([[0, 2, 9], [2, 0, 4], [9, 4, 0]])
    seq = single_linkage(model)
    assert seq.weights.tolist() == [2.0, 4.0]


@pytest.mark.parametrize("xs, k, expected", [
    ((0, 1, 10, 11), 2, 0.0),
    ((0, 1, 2, 100), 2, 0.5),
    ((0, 1, 2, 100), 3, 2 / 3),
    ((0, 1, 2, 100), 4, 1.0),
])
def test_singleton_sweep(xs, k, expected):
    [(got_k, proportion)] = singleton_sweep(line(*xs), [k])
    assert got_k == k
    assert proportion == pytest.approx(expected)


def test_singleton_sweep_rejects_bad_k():
    with pytest.raises(ConfigError):
        singleton_sweep(line(0, 1, 2), [1])
    with pytest.raises(ConfigError):
        singleton_sweep(line(0, 1, 2), [4])


def test_export_dendrogram(tmp_path):
    path = tmp_path / "merges.csv"
    export_dendrogram(single_linkage(line(0, 1, 10)), path)
    assert path.read_text().splitlines() == [
        "step,left,right,weight",
        "0,0,1,1.0",
        "1,3,2,9.0",
    ]
