"""
Oracle Module.

Brute-force ground truth for tiny instances: enumerates every k-clustering
(optionally with a minimum group size), computes exact optima of Min-Sp
and MST-Sp, and checks every guarantee of the single-linkage and
size-constrained algorithms against them.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, Iterator, List, Optional, Tuple

import numpy as np

from .constrained import (
    SizeConstraint,
    constrained_max_mst,
    full_ell_schedule,
    harmonic,
    run_algo_min_sp,
    size_floor,
)
from .dataset import DistanceModel
from .errors import ConfigError, InfeasibleError, OracleLimitError
from .linkage import MergeSequence, cut, single_linkage
from .spacing import SpacingGraph, min_sp, mst_sp, spacing_graph
from .types import EllSchedule, Labels, Scheduler, SearchMode

logger = logging.getLogger("Oracle")

MAX_ORACLE_N = 12

# relative slack for comparisons against bounds that involve 1/H_{k−1}
BOUND_RTOL = 1e-9


# ============================================================================
# ENUMERATION
# ============================================================================

def _check_enumeration(n: int, k: int, L: int):
    if n > MAX_ORACLE_N:
        raise OracleLimitError(f"brute force is capped at n = {MAX_ORACLE_N}, got n = {n}")
    if not 1 <= k <= n:
        raise ConfigError(f"k must lie in [1, {n}], got {k}")
    if L < 1:
        raise ConfigError(f"L must be positive, got {L}")
    if k * L > n:
        raise InfeasibleError(f"infeasible: k·L = {k * L} exceeds n = {n}")


@lru_cache(maxsize=None)
def count_clusterings(n: int, k: int, L: int = 1) -> int:
    """
    Number of partitions of n labelled points into k blocks of at least L.

    Counts by the size s of the block holding the first point:
    C(n, k) = Σ_s binom(n−1, s−1) · C(n−s, k−1).
    """
    if k == 0:
        return 1 if n == 0 else 0
    return sum(math.comb(n - 1, s - 1) * count_clusterings(n - s, k - 1, L) for s in range(L, n + 1))


def enumerate_clusterings(n: int, k: int, L: int = 1) -> Iterator[Labels]:
    """
    Every partition of [n] into exactly k blocks of size ≥ L, once each.

    Partitions are produced as restricted growth strings (point i joins an
    existing block or opens the next one), which already is the canonical
    labelling. Branches that cannot reach k blocks of size L are cut.
    """
    _check_enumeration(n, k, L)
    assign = [0] * n
    sizes = [0] * k

    def _extend(i: int, opened: int) -> Iterator[Labels]:
        need = sum(L - sizes[b] for b in range(opened) if sizes[b] < L) + (k - opened) * L
        if need > n - i:
            return
        if i == n:
            yield Labels(np.array(assign, dtype=np.int64), k)
            return
        for b in range(min(opened + 1, k)):
            assign[i] = b
            sizes[b] += 1
            yield from _extend(i + 1, max(opened, b + 1))
            sizes[b] -= 1

    assign[0] = 0
    sizes[0] = 1
    yield from _extend(1, 1)


# ============================================================================
# OPTIMA
# ============================================================================

def clustering_criteria(full: np.ndarray, labels: Labels) -> Tuple[float, Tuple[float, ...]]:
    """
    Min-Sp and sorted MST-Sp edge weights of a clustering, from a dense matrix.

    Args:
        full: n×n distance matrix
        labels: Clustering with k ≥ 2

    Returns:
        (min_sp, sorted spacing-graph MST weights)
    """
    order = np.argsort(labels.assign, kind="stable")
    starts = np.concatenate(([0], np.cumsum(labels.sizes())[:-1]))
    block = full[np.ix_(order, order)]
    w = np.minimum.reduceat(np.minimum.reduceat(block, starts, axis=0), starts, axis=1)
    np.fill_diagonal(w, np.inf)
    g = SpacingGraph(k=labels.k, w=w)
    return min_sp(g), mst_sp(g).sorted_weights


@dataclass(frozen=True)
class OptimalProfile:
    """
    Exact optima over all (k, L)-clusterings of an instance.

    Attributes:
        k: Group count
        L: Minimum group size
        count: Number of clusterings enumerated
        best_min_sp: Largest Min-Sp
        best_mst_sp: Largest MST-Sp
        min_sp_argmax: First clustering attaining best_min_sp
        mst_sp_argmax: First clustering attaining best_mst_sp
        w_star: Sorted MST edge weights of mst_sp_argmax (k−1 values)
    """
    k: int
    L: int
    count: int
    best_min_sp: float
    best_mst_sp: float
    min_sp_argmax: Labels = field(repr=False)
    mst_sp_argmax: Labels = field(repr=False)
    w_star: Tuple[float, ...]


def optimal_profile(model: DistanceModel, k: int, L: int = 1,
                    visit: Optional[Callable[[Labels, float, Tuple[float, ...]], None]] = None) -> OptimalProfile:
    """
    Exact Min-Sp and MST-Sp optima by full enumeration.

    Args:
        model: Instance with n ≤ 12
        k: Group count, 2 ≤ k
        L: Minimum group size
        visit: Called with (labels, min_sp, sorted MST weights) for every clustering

    Returns:
        OptimalProfile
    """
    if k < 2:
        raise ConfigError(f"k must be at least 2, got {k}")
    _check_enumeration(model.n, k, L)
    full = model.full_matrix()

    count = 0
    best_min, best_min_labels = -math.inf, None
    best_mst, best_mst_labels, best_weights = -math.inf, None, ()
    for labels in enumerate_clusterings(model.n, k, L):
        count += 1
        value, weights = clustering_criteria(full, labels)
        total = math.fsum(weights)
        if value > best_min:
            best_min, best_min_labels = value, labels
        if total > best_mst:
            best_mst, best_mst_labels, best_weights = total, labels, weights
        if visit is not None:
            visit(labels, value, weights)

    return OptimalProfile(k=k, L=L, count=count, best_min_sp=best_min, best_mst_sp=best_mst,
                          min_sp_argmax=best_min_labels, mst_sp_argmax=best_mst_labels, w_star=best_weights)


# ============================================================================
# GUARANTEE VERIFICATION
# ============================================================================

@dataclass(frozen=True)
class GuaranteeCheck:
    """Outcome of one inequality; witness describes the failure."""
    name: str
    passed: bool
    detail: str = ""
    witness: Optional[dict] = None

    def to_dict(self) -> dict:
        out = {"name": self.name, "passed": self.passed}
        if self.detail:
            out["detail"] = self.detail
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass(frozen=True)
class GuaranteeVerdict:
    """All guarantee checks for one instance, plus MST-Sp / Σ Min-Sp(A′) per ℓ schedule."""
    n: int
    k: int
    L: int
    epsilon: str
    seed: int
    checks: Tuple[GuaranteeCheck, ...]
    ratios: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[GuaranteeCheck]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "n": self.n, "k": self.k, "L": self.L, "epsilon": self.epsilon, "seed": self.seed,
            "passed": self.passed,
            "ratios": dict(self.ratios),
            "checks": [c.to_dict() for c in self.checks],
        }


def _at_least(value: float, bound: float, rtol: float = 0.0) -> bool:
    return value >= bound - rtol * abs(bound)


def _check(name: str, ok: bool, detail: str, **witness) -> GuaranteeCheck:
    return GuaranteeCheck(name=name, passed=bool(ok), detail=detail, witness=None if ok else witness)


def _single_linkage_checks(model: DistanceModel, seq: MergeSequence, k: int) -> List[GuaranteeCheck]:
    sl = cut(seq, model.n - k)
    sl_min, sl_weights = clustering_criteria(model.full_matrix(), sl)
    sl_total = math.fsum(sl_weights)

    dominated: List[dict] = []

    def _dominance(labels: Labels, _value: float, weights: Tuple[float, ...]):
        if not dominated and any(w > s for w, s in zip(weights, sl_weights)):
            dominated.append({"labels": labels.assign.tolist(), "weights": list(weights),
                              "single_linkage_weights": list(sl_weights)})

    profile = optimal_profile(model, k, 1, visit=_dominance)
    return [
        _check("single_linkage_min_sp_optimal", sl_min == profile.best_min_sp,
               f"single-linkage Min-Sp {sl_min!r} vs best {profile.best_min_sp!r}",
               best_labels=profile.min_sp_argmax.assign.tolist()),
        _check("single_linkage_mst_sp_optimal", sl_total == profile.best_mst_sp,
               f"single-linkage MST-Sp {sl_total!r} vs best {profile.best_mst_sp!r}",
               best_labels=profile.mst_sp_argmax.assign.tolist()),
        _check("single_linkage_mst_weights_dominate", not dominated,
               f"sorted MST weights of all {profile.count} clusterings pointwise ≤ single-linkage",
               **(dominated[0] if dominated else {})),
    ]


def _min_sp_checks(model: DistanceModel, seq: MergeSequence, k: int, c: SizeConstraint,
                   profile: OptimalProfile) -> List[GuaranteeCheck]:
    exact = run_algo_min_sp(seq, k, c, Scheduler.EXACT, SearchMode.BINARY)
    linear = run_algo_min_sp(seq, k, c, Scheduler.EXACT, SearchMode.LINEAR)
    lpt = run_algo_min_sp(seq, k, c, Scheduler.LPT, SearchMode.BINARY)
    value = min_sp(spacing_graph(model, exact.labels, workers=1))
    sizes = exact.labels.sizes().tolist()
    lpt_sizes = lpt.labels.sizes().tolist()
    return [
        _check("min_sp_size_floor", min(sizes) >= c.min_size,
               f"exact-scheduler group sizes ≥ {c.min_size}", sizes=sizes),
        _check("min_sp_optimal", _at_least(value, profile.best_min_sp),
               f"Min-Sp {value!r} ≥ best over (k, L)-clusterings {profile.best_min_sp!r}",
               labels=exact.labels.assign.tolist(), best_labels=profile.min_sp_argmax.assign.tolist()),
        _check("min_sp_search_agreement", np.array_equal(exact.labels.assign, linear.labels.assign),
               f"binary search t={exact.t}, linear scan t={linear.t}", binary_t=exact.t, linear_t=linear.t),
        _check("min_sp_lpt_size_floor", min(lpt_sizes) >= c.min_size,
               f"LPT group sizes ≥ {c.min_size}", sizes=lpt_sizes),
    ]


def _max_mst_checks(model: DistanceModel, seq: MergeSequence, k: int, c: SizeConstraint, seed: int,
                    schedule_kind: EllSchedule, profile: OptimalProfile) -> Tuple[List[GuaranteeCheck], float]:
    tag = schedule_kind.value
    labels, trace = constrained_max_mst(model, seq, k, c, seed=seed, schedule_kind=schedule_kind,
                                        scheduler=Scheduler.EXACT, workers=1)
    w_star = profile.w_star
    rows = [r for r in trace.rows if not r.skipped]
    checks: List[GuaranteeCheck] = []

    bad3 = [r.ell for r in rows if not r.min_sp_prime >= w_star[k - r.ell]]
    checks.append(_check(f"ell_min_sp_lower_bound[{tag}]", not bad3,
                         "Min-Sp(A′_ℓ) ≥ w*_{k−ℓ+1} for every ℓ", ells=bad3, w_star=list(w_star)))

    bad4 = [r.ell for r in rows if not r.mst_sp >= (r.ell - 1) * w_star[k - r.ell]]
    checks.append(_check(f"ell_mst_sp_lower_bound[{tag}]", not bad4,
                         "MST-Sp(A_ℓ) ≥ (ℓ−1)·w*_{k−ℓ+1} for every ℓ", ells=bad4, w_star=list(w_star)))

    final = trace.chosen.mst_sp
    bound = profile.best_mst_sp * trace.bound_1_over_H
    checks.append(_check(f"mst_sp_approximation[{tag}]", _at_least(final, bound, BOUND_RTOL),
                         f"MST-Sp {final!r} ≥ OPT / H_(k−1) = {bound!r}",
                         chosen_ell=trace.chosen_ell, best_mst_sp=profile.best_mst_sp))

    floor = size_floor(model.n, k, c)
    sizes = labels.sizes().tolist()
    checks.append(_check(f"mst_sp_size_floor[{tag}]", min(sizes) >= floor,
                         f"group sizes ≥ ⌊ρ(1−ε)L/2⌋ = {floor}", sizes=sizes))

    checks.append(_check(f"upper_bound_ratio_floor[{tag}]",
                         _at_least(trace.ratio, trace.bound_1_over_H, BOUND_RTOL),
                         f"ratio {trace.ratio:.6g} ≥ 1/H_(k−1) = {trace.bound_1_over_H:.6g}"))

    # Σ Min-Sp(A′_ℓ) bounds MST-Sp only over (k, L)-clusterings with every ℓ evaluated
    applicable = (trace.schedule == EllSchedule.FULL and len(rows) == len(full_ell_schedule(k))
                  and min(sizes) >= c.L)
    if applicable:
        checks.append(_check(f"upper_bound_ratio_ceiling[{tag}]", final <= trace.upper_bound,
                             f"MST-Sp {final!r} ≤ Σ Min-Sp(A′_ℓ) = {trace.upper_bound!r}"))
    else:
        checks.append(GuaranteeCheck(name=f"upper_bound_ratio_ceiling[{tag}]", passed=True,
                                     detail="not applicable: output is not a (k, L)-clustering or ℓ values were skipped"))
    return checks, trace.ratio


def verify_guarantees(model: DistanceModel, k: int, c: SizeConstraint, seed: int = 0,
                      seq: Optional[MergeSequence] = None) -> GuaranteeVerdict:
    """
    Run every algorithm on a tiny instance and check each guarantee against
    brute-force optima.

    Constrained algorithms use the exact scheduler; the LPT variant of
    AlgoMinSp is only held to its size floor. Failed inequalities are
    reported in the verdict, never raised.

    Args:
        model: Instance with n ≤ 12
        k: Group count, 2 ≤ k ≤ n
        c: Size constraint with k·L ≤ n
        seed: Seed for the balanced splits
        seq: Precomputed merge sequence (optional)

    Returns:
        GuaranteeVerdict
    """
    n = model.n
    if n > MAX_ORACLE_N:
        raise OracleLimitError(f"brute force is capped at n = {MAX_ORACLE_N}, got n = {n}")
    if not 2 <= k <= n:
        raise ConfigError(f"k must lie in [2, {n}], got {k}")
    c.check_feasible(n, k)

    start = time.perf_counter()
    if seq is None:
        seq = single_linkage(model)

    checks = _single_linkage_checks(model, seq, k)
    profile = optimal_profile(model, k, c.L)
    checks += _min_sp_checks(model, seq, k, c, profile)
    ratios = {}
    for schedule_kind in (EllSchedule.FULL, EllSchedule.FAST):
        max_mst_checks, ratios[schedule_kind.value] = _max_mst_checks(model, seq, k, c, seed, schedule_kind, profile)
        checks += max_mst_checks

    verdict = GuaranteeVerdict(n=n, k=k, L=c.L, epsilon=str(c.epsilon), seed=seed, checks=tuple(checks),
                               ratios=ratios)
    if verdict.passed:
        logger.debug(f"n={n}, k={k}, L={c.L}: {len(checks)} checks passed in {time.perf_counter() - start:.3f}s")
    else:
        logger.warning(f"n={n}, k={k}, L={c.L}: failed {[f.name for f in verdict.failures]}")
    return verdict


def random_instance(n: int, dim: int, seed) -> DistanceModel:
    """Uniform points in the unit cube (distinct distances almost surely)."""
    rng = np.random.default_rng(seed)
    return DistanceModel.from_points(rng.random((n, dim)))


def verify_trials(n: int, k: int, L: int, trials: int, seed: int = 0, epsilon: str = "0",
                  dim: int = 2) -> dict:
    """
    verify_guarantees over random instances; trial i uses generator seed (seed, i).

    Returns:
        JSON-ready summary with per-check failure counts, the mean
        MST-Sp / Σ Min-Sp(A′) ratio per ℓ schedule and failing verdicts
    """
    if trials < 1:
        raise ConfigError(f"trials must be positive, got {trials}")
    c = SizeConstraint.parse(L, epsilon)
    c.check_feasible(n, k)

    start = time.perf_counter()
    failed_checks = {}
    ratios = {s.value: [] for s in EllSchedule}
    failures = []
    for trial in range(trials):
        model = random_instance(n, dim, [seed, trial])
        verdict = verify_guarantees(model, k, c, seed=seed)
        for schedule, ratio in verdict.ratios.items():
            ratios[schedule].append(ratio)
        for check in verdict.checks:
            failed_checks.setdefault(check.name, 0)
            if not check.passed:
                failed_checks[check.name] += 1
        if not verdict.passed:
            failures.append({"trial": trial, **verdict.to_dict()})

    mean_ratio = {schedule: float(np.mean(values)) for schedule, values in ratios.items()}
    logger.info(f"{trials} trials (n={n}, k={k}, L={L}): {trials - len(failures)} passed "
                f"in {time.perf_counter() - start:.1f}s")
    logger.info("Mean MST-Sp / Σ Min-Sp(A′): " + ", ".join(f"{s} {r:.3f}" for s, r in mean_ratio.items()))
    return {
        "n": n, "k": k, "L": L, "epsilon": str(c.epsilon), "dim": dim, "seed": seed,
        "trials": trials,
        "passed": trials - len(failures),
        "failed": len(failures),
        "bound_1_over_H": float(1 / harmonic(k - 1)),
        "mean_ratio": mean_ratio,
        "check_failures": failed_checks,
        "failures": failures,
    }
