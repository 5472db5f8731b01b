import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import line
from src.spacing_clust.constrained import SizeConstraint
from src.spacing_clust.dataset import DistanceModel
from src.spacing_clust.errors import ConfigError, InfeasibleError, OracleLimitError
from src.spacing_clust.linkage import cut, single_linkage
from src.spacing_clust.oracle import (
    clustering_criteria,
    count_clusterings,
    enumerate_clusterings,
    optimal_profile,
    random_instance,
    verify_guarantees,
    verify_trials,
)
from src.spacing_clust.spacing import min_sp, mst_sp, spacing_graph


@pytest.mark.parametrize("n, k, L, expected", [
    (3, 2, 1, 3),
    (4, 2, 2, 3),
    (4, 2, 1, 7),
    (5, 3, 1, 25),
    (6, 2, 3, 10),
])
def test_enumeration_counts(n, k, L, expected):
    clusterings = list(enumerate_clusterings(n, k, L))
    assert len(clusterings) == expected == count_clusterings(n, k, L)


@pytest.mark.parametrize("n, k, L", [(6, 3, 1), (7, 2, 3), (8, 3, 2)])
def test_enumeration_is_exhaustive_and_distinct(n, k, L):
    seen = set()
    for labels in enumerate_clusterings(n, k, L):
        key = tuple(labels.assign.tolist())
        assert key not in seen
        seen.add(key)
        assert labels.k == k
        assert labels.sizes().min() >= L
        # restricted growth: canonical labels number groups by first member
        assert key[0] == 0
    assert len(seen) == count_clusterings(n, k, L)


def test_enumeration_limits():
    with pytest.raises(OracleLimitError):
        next(enumerate_clusterings(13, 2))
    with pytest.raises(InfeasibleError):
        next(enumerate_clusterings(5, 3, 2))
    with pytest.raises(ConfigError):
        next(enumerate_clusterings(5, 6))


def test_criteria_match_spacing_module():
    model = random_instance(9, 2, 4)
    for labels in enumerate_clusterings(9, 3, 2):
        value, weights = clustering_criteria(model.full_matrix(), labels)
        g = spacing_graph(model, labels, workers=1)
        assert value == min_sp(g)
        assert weights == mst_sp(g).sorted_weights


def test_profile_two_pairs():
    profile = optimal_profile(line(0, 1, 10, 11), 2)
    assert profile.count == 7
    assert profile.best_min_sp == 9.0
    assert profile.best_mst_sp == 9.0
    assert profile.w_star == (9.0,)
    assert profile.min_sp_argmax.assign.tolist() == [0, 0, 1, 1]


def test_profile_with_size_constraint():
    # the outlier cannot be alone when L = 2
    profile = optimal_profile(line(0, 1, 2, 3, 50), 2, L=2)
    assert profile.best_min_sp == 1.0
    assert profile.count == count_clusterings(5, 2, 2)


def test_profile_visits_every_clustering():
    seen = []
    optimal_profile(line(0, 1, 5, 6, 20), 3, visit=lambda labels, value, weights: seen.append(value))
    assert len(seen) == count_clusterings(5, 3)


@settings(max_examples=15, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(min_value=4, max_value=8),
       st.integers(min_value=2, max_value=3), st.integers(min_value=1, max_value=2))
def test_profile_ignores_point_order(seed, n, k, L):
    if k * L > n:
        L = 1
    rng = np.random.default_rng(seed)
    points = rng.random((n, 2))
    shuffled = points[rng.permutation(n)]
    profile = optimal_profile(DistanceModel.from_points(points), k, L)
    reordered = optimal_profile(DistanceModel.from_points(shuffled), k, L)
    assert reordered.count == profile.count
    assert reordered.best_min_sp == profile.best_min_sp
    assert reordered.best_mst_sp == profile.best_mst_sp
    assert reordered.w_star == profile.w_star


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(min_value=3, max_value=8),
       st.integers(min_value=2, max_value=4))
def test_single_linkage_is_optimal_for_both_criteria(seed, n, k):
    k = min(k, n)
    model = random_instance(n, 2, seed)
    sl = cut(single_linkage(model), n - k)
    g = spacing_graph(model, sl)
    profile = optimal_profile(model, k)
    assert min_sp(g) == profile.best_min_sp
    assert mst_sp(g).total == profile.best_mst_sp


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(min_value=4, max_value=8),
       st.integers(min_value=2, max_value=3))
def test_single_linkage_weights_dominate(seed, n, k):
    model = random_instance(n, 2, seed)
    sl_weights = mst_sp(spacing_graph(model, cut(single_linkage(model), n - k))).sorted_weights
    full = model.full_matrix()
    for labels in enumerate_clusterings(n, k):
        _, weights = clustering_criteria(full, labels)
        assert all(w <= s for w, s in zip(weights, sl_weights))


def test_verify_guarantees_passes_on_grid(grid_five):
    verdict = verify_guarantees(grid_five, 2, SizeConstraint(2))
    assert verdict.passed, verdict.to_dict()
    names = {c.name for c in verdict.checks}
    assert {"single_linkage_min_sp_optimal", "min_sp_optimal", "mst_sp_approximation[full]",
            "mst_sp_approximation[fast]", "upper_bound_ratio_floor[fast]"} <= names


@settings(max_examples=15, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(min_value=4, max_value=8),
       st.integers(min_value=2, max_value=4), st.integers(min_value=1, max_value=3),
       st.sampled_from(["0", "0.3"]))
def test_verify_guarantees_random(seed, n, k, L, epsilon):
    if k * L > n:
        L = n // k
    verdict = verify_guarantees(random_instance(n, 2, seed), k, SizeConstraint.parse(L, epsilon), seed=seed % 7)
    assert verdict.passed, [c.to_dict() for c in verdict.failures]


def test_verify_guarantees_with_ties():
    # integer grid: many equal distances and duplicate points
    points = np.array([[0, 0], [0, 1], [1, 0], [1, 1], [0, 0], [3, 3], [3, 4], [4, 3]], dtype=float)
    model = DistanceModel.from_points(points)
    for k, L in [(2, 3), (3, 2), (4, 2)]:
        verdict = verify_guarantees(model, k, SizeConstraint(L))
        assert verdict.passed, [c.to_dict() for c in verdict.failures]


def test_verify_guarantees_limits():
    with pytest.raises(OracleLimitError):
        verify_guarantees(random_instance(13, 2, 0), 2, SizeConstraint(1))
    with pytest.raises(InfeasibleError):
        verify_guarantees(random_instance(6, 2, 0), 3, SizeConstraint(3))
    with pytest.raises(ConfigError):
        verify_guarantees(random_instance(6, 2, 0), 1, SizeConstraint(1))


def test_verify_trials_summary():
    summary = verify_trials(7, 3, 2, trials=3, seed=1)
    assert summary["trials"] == 3
    assert summary["passed"] == 3
    assert summary["failed"] == 0
    assert summary["failures"] == []
    assert summary["bound_1_over_H"] == pytest.approx(1 / 1.5)
    assert set(summary["check_failures"].values()) == {0}
    assert set(summary["mean_ratio"]) == {"full", "fast"}
    assert all(r >= summary["bound_1_over_H"] * (1 - 1e-12) for r in summary["mean_ratio"].values())


def test_verify_trials_rejects_zero_trials():
    with pytest.raises(ConfigError):
        verify_trials(6, 2, 1, trials=0)


def test_random_instance_is_seeded():
    a = random_instance(5, 3, [1, 2]).points
    b = random_instance(5, 3, [1, 2]).points
    assert np.array_equal(a, b)
    assert a.shape == (5, 3)
    assert np.all((0 <= a) & (a < 1))
