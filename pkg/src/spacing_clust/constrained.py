"""
Constrained Clustering Module.

Size-constrained separation clustering on top of one single-linkage run:

- AlgoMinSp: the largest merge prefix t whose groups can be combined (by
  max-min scheduling) into k groups of at least (1−ε)·L points.
- Constrained-MaxMST: for every ℓ in a schedule, build an ℓ-clustering
  with AlgoMinSp, split its groups largest-first into k groups, and keep
  the k-clustering with the largest MST-Sp.

All threshold arithmetic (ε, τ, ρ, SplitNumber) is exact (Fraction).
"""

import logging
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .dataset import DistanceModel
from .errors import ConfigError, InfeasibleError, SchedulerBudgetError
from .linkage import MergeSequence, cut
from .parallel import map_ordered
from .scheduling import ScheduleAssignment, exact_schedule, schedule
from .spacing import min_sp, mst_sp, spacing_graph
from .types import EllSchedule, Labels, Scheduler, SearchMode

logger = logging.getLogger("AlgoMinSp")
mst_logger = logging.getLogger("MaxMST")

SeedLike = Union[int, Sequence[int], np.random.Generator]


# ============================================================================
# SIZE CONSTRAINT
# ============================================================================

@dataclass(frozen=True)
class SizeConstraint:
    """
    Minimum group size L, relaxed by ε: groups need at least τ = (1−ε)·L points.
    """
    L: int
    epsilon: Fraction = Fraction(0)

    def __post_init__(self):
        if isinstance(self.L, bool) or int(self.L) != self.L or self.L < 1:
            raise ConfigError(f"L must be a positive integer, got {self.L}")
        eps = Fraction(self.epsilon)
        if not 0 <= eps < 1:
            raise ConfigError(f"epsilon must lie in [0, 1), got {self.epsilon}")
        object.__setattr__(self, "L", int(self.L))
        object.__setattr__(self, "epsilon", eps)

    @classmethod
    def parse(cls, L: int, epsilon: Union[str, float, Fraction, None] = None) -> "SizeConstraint":
        """Build from user input; decimal text such as "0.1" is read exactly."""
        if epsilon is None:
            return cls(L)
        try:
            eps = Fraction(str(epsilon)) if not isinstance(epsilon, Fraction) else epsilon
        except ValueError:
            raise ConfigError(f"epsilon is not a number: '{epsilon}'")
        return cls(L, eps)

    @property
    def tau(self) -> Fraction:
        return (1 - self.epsilon) * self.L

    @property
    def min_size(self) -> int:
        """Smallest integer group size meeting τ."""
        return math.ceil(self.tau)

    def check_feasible(self, n: int, k: int):
        if k * self.L > n:
            raise InfeasibleError(f"infeasible: k·L = {k}·{self.L} = {k * self.L} exceeds n = {n}")


def rho(n: int, k: int, c: SizeConstraint) -> Fraction:
    """ρ = min{ n / (k·L), 2 }."""
    return min(Fraction(n, k * c.L), Fraction(2))


def harmonic(m: int) -> Fraction:
    """H_m = 1 + 1/2 + … + 1/m (H_0 = 0)."""
    return sum((Fraction(1, i) for i in range(1, m + 1)), Fraction(0))


def size_floor(n: int, k: int, c: SizeConstraint) -> int:
    """Guaranteed minimum group size of Constrained-MaxMST: ⌊ρ(1−ε)L / 2⌋."""
    return math.floor(rho(n, k, c) * c.tau / 2)


# ============================================================================
# ALGOMINSP
# ============================================================================

@dataclass(frozen=True)
class MinSpResult:
    """
    Outcome of AlgoMinSp.

    Attributes:
        labels: The k-clustering
        t: Merge prefix used
        schedule: Schedule of the n−t single-linkage groups onto k groups
        search_fallback: Binary search detected non-monotone feasibility
            and the linear scan decided t
    """
    labels: Labels
    t: int
    schedule: ScheduleAssignment
    search_fallback: bool = False


def _validate_k(n: int, k: int, c: SizeConstraint):
    if not 2 <= k <= n:
        raise ConfigError(f"k must lie in [2, {n}], got {k}")
    c.check_feasible(n, k)


class _PrefixOracle:
    """Feasibility of each merge prefix t, memoized."""

    def __init__(self, seq: MergeSequence, k: int, c: SizeConstraint, scheduler: Scheduler):
        self.seq = seq
        self.k = k
        self.c = c
        self.scheduler = scheduler
        self._cache: Dict[int, Tuple[bool, Labels, ScheduleAssignment]] = {}

    def evaluate(self, t: int) -> Tuple[bool, Labels, ScheduleAssignment]:
        if t not in self._cache:
            groups = cut(self.seq, t)
            sizes = groups.sizes()
            sched = schedule(sizes, self.k, self.scheduler, item_groups=range(groups.k))
            ok = sched.min_load >= self.c.tau
            if not ok and t == 0 and self.scheduler == Scheduler.LPT:
                sched = exact_schedule(sizes, self.k, item_groups=range(groups.k))
                ok = sched.min_load >= self.c.tau
            self._cache[t] = (ok, groups, sched)
        return self._cache[t]

    def feasible(self, t: int) -> bool:
        return self.evaluate(t)[0]


def _linear_search(oracle: _PrefixOracle, t_max: int) -> Optional[int]:
    for t in range(t_max, -1, -1):
        if oracle.feasible(t):
            return t
    return None


def _binary_search(oracle: _PrefixOracle, t_max: int, recheck: bool = True) -> Tuple[Optional[int], bool]:
    """
    Largest feasible t assuming monotonicity.

    With recheck set, the prefixes lo+2, lo+4, lo+8, ... above the boundary are
    re-checked and the linear scan takes over if any of them is feasible. The
    check is a heuristic: a feasible t at any other offset (lo+3, lo+5, ...)
    goes unnoticed and the boundary is returned with the flag unset. Under LPT
    use SearchMode.LINEAR when the largest feasible prefix is required. Exact
    scheduling is monotone in t and needs no re-check.
    """
    if oracle.feasible(t_max):
        return t_max, False
    if not oracle.feasible(0):
        return None, False

    lo, hi = 0, t_max  # lo feasible, hi infeasible
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if oracle.feasible(mid):
            lo = mid
        else:
            hi = mid

    # re-check above the boundary at geometric offsets; any feasible prefix there means non-monotone
    step = 2
    while recheck and lo + step < t_max:
        if oracle.feasible(lo + step):
            logger.warning(f"Feasibility is not monotone in t (t={lo + 1} infeasible, t={lo + step} feasible); "
                           f"falling back to linear scan")
            return _linear_search(oracle, t_max), True
        step *= 2
    return lo, False


@dataclass(frozen=True)
class PrefixSearch:
    """
    Merge prefix chosen by AlgoMinSp.

    Attributes:
        t: Largest feasible prefix found
        groups: The n−t single-linkage groups after t merges
        schedule: Their schedule onto k groups
        search_fallback: Binary search detected non-monotone feasibility
            and the linear scan decided t
    """
    t: int
    groups: Labels
    schedule: ScheduleAssignment
    search_fallback: bool = False


def find_merge_prefix(seq: MergeSequence, k: int, c: SizeConstraint,
                      scheduler: Scheduler = Scheduler.LPT,
                      search: SearchMode = SearchMode.BINARY) -> PrefixSearch:
    """
    Largest t in [0, n−k] whose groups schedule onto k groups of at least τ points.

    Args:
        seq: Single-linkage merge sequence of the instance
        k: Number of groups, 2 ≤ k ≤ n
        c: Size constraint (k·L ≤ n)
        scheduler: lpt (default) or exact
        search: binary (default) or linear scan from t = n−k down

    Returns:
        PrefixSearch
    """
    n = seq.n
    _validate_k(n, k, c)
    scheduler, search = Scheduler(scheduler), SearchMode(search)

    oracle = _PrefixOracle(seq, k, c, scheduler)
    fallback = False
    if search == SearchMode.LINEAR:
        t = _linear_search(oracle, n - k)
    else:
        t, fallback = _binary_search(oracle, n - k, recheck=scheduler == Scheduler.LPT)
    if t is None:
        raise InfeasibleError(f"no merge prefix yields {k} groups of at least {c.tau} points")

    _, groups, sched = oracle.evaluate(t)
    return PrefixSearch(t=t, groups=groups, schedule=sched, search_fallback=fallback)


def run_algo_min_sp(seq: MergeSequence, k: int, c: SizeConstraint,
                    scheduler: Scheduler = Scheduler.LPT,
                    search: SearchMode = SearchMode.BINARY) -> MinSpResult:
    """AlgoMinSp on a precomputed merge sequence; each scheduled machine becomes one group."""
    found = find_merge_prefix(seq, k, c, scheduler, search)
    machine_of = np.asarray(found.schedule.machine_of, dtype=np.int64)
    labels = Labels.from_assignment(machine_of[found.groups.assign])
    logger.debug(f"k={k}: t={found.t}, group sizes {sorted(labels.sizes().tolist())}")
    return MinSpResult(labels=labels, t=found.t, schedule=found.schedule, search_fallback=found.search_fallback)


def algo_min_sp(model: DistanceModel, seq: MergeSequence, k: int, c: SizeConstraint,
                scheduler: Scheduler = Scheduler.LPT,
                search: SearchMode = SearchMode.BINARY) -> Labels:
    """
    k-clustering with every group of at least ⌈(1−ε)L⌉ points whose Min-Sp is
    at least that of the best (k, L)-clustering (with the exact scheduler).
    """
    if seq.n != model.n:
        raise ConfigError(f"merge sequence covers {seq.n} points but the model has {model.n}")
    start = time.perf_counter()
    result = run_algo_min_sp(seq, k, c, scheduler, search)
    logger.info(f"k={k}, L={c.L}, ε={c.epsilon}: t={result.t} in {time.perf_counter() - start:.3f}s")
    return result.labels


# ============================================================================
# CONSTRAINED-MAXMST
# ============================================================================

def full_ell_schedule(k: int) -> List[int]:
    """ℓ = 2, …, k."""
    return list(range(2, k + 1))


def fast_ell_schedule(k: int) -> List[int]:
    """Distinct values ⌈k / 2^t⌉ ≥ 2 for t = 0, …, ⌊log₂ k⌋, ascending."""
    values = {(k + (1 << t) - 1) >> t for t in range(k.bit_length())}
    return sorted(v for v in values if 2 <= v <= k)


def ell_schedule(k: int, which: EllSchedule) -> List[int]:
    if k < 2:
        raise ConfigError(f"k must be at least 2, got {k}")
    return fast_ell_schedule(k) if EllSchedule(which) == EllSchedule.FAST else full_ell_schedule(k)


def balanced_split(group: Sequence[int], m: int, seed: SeedLike) -> List[List[int]]:
    """
    Split a group into m parts whose sizes differ by at most one.

    Members are shuffled with the seeded generator and cut into contiguous
    chunks; each part is returned in ascending id order.
    """
    group = np.asarray(group, dtype=np.int64)
    if not 1 <= m <= group.size:
        raise ConfigError(f"cannot split {group.size} points into {m} parts")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    perm = rng.permutation(group)
    return [sorted(int(x) for x in part) for part in np.array_split(perm, m)]


def split_to_k(groups: Sequence[Sequence[int]], k: int, rho_value: Fraction, c: SizeConstraint,
               seed: SeedLike) -> Tuple[List[List[int]], bool]:
    """
    Turn an ℓ-clustering into a k-clustering, visiting groups largest first.

    Each visited group A′ is split into SplitNumber = ⌊2|A′| / (ρ(1−ε)L)⌋
    balanced parts while that keeps the total below k; the group that
    would reach k is split into exactly the missing number of parts and
    the unvisited groups are kept whole.

    Returns:
        (groups, clamped) where clamped tells whether SplitNumber had to be
        forced into [1, |A′|]
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    ordered = sorted((list(g) for g in groups), key=lambda g: (-len(g), min(g)))
    unit = rho_value * c.tau
    out: List[List[int]] = []
    clamped = False

    for idx, group in enumerate(ordered):
        remaining = len(ordered) - idx - 1
        split_number = math.floor(Fraction(2 * len(group)) / unit)
        if not 1 <= split_number <= len(group):
            clamped = True
            split_number = min(max(split_number, 1), len(group))
        if len(out) + remaining + split_number < k:
            out.extend(balanced_split(group, split_number, rng))
        else:
            out.extend(balanced_split(group, k - len(out) - remaining, rng))
            out.extend(ordered[idx + 1:])
            break
    return out, clamped


@dataclass(frozen=True)
class EllRecord:
    """One ℓ of Constrained-MaxMST."""
    ell: int
    min_sp_prime: Optional[float] = None
    mst_sp: Optional[float] = None
    t: Optional[int] = None
    min_size: Optional[int] = None
    skipped: bool = False
    reason: Optional[str] = None
    split_clamped: bool = False
    search_fallback: bool = False
    prime_labels: Optional[Labels] = field(default=None, repr=False, compare=False)
    labels: Optional[Labels] = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        row = {"ell": self.ell, "min_sp_prime": self.min_sp_prime, "mst_sp": self.mst_sp,
               "t": self.t, "min_size": self.min_size, "skipped": self.skipped}
        if self.reason is not None:
            row["reason"] = self.reason
        if self.split_clamped:
            row["split_clamped"] = True
        if self.search_fallback:
            row["search_fallback"] = True
        return row


@dataclass(frozen=True)
class MaxMstTrace:
    """
    Per-ℓ records of Constrained-MaxMST plus the quantities its guarantee
    is stated in.

    Attributes:
        rows: One record per evaluated ℓ, ascending
        rho: ρ as an exact fraction
        chosen_ell: ℓ whose k-clustering was returned
        schedule: full or fast
        bound_1_over_H: 1 / H_{k−1}, the guaranteed fraction of the optimal
            MST-Sp under either schedule
        upper_bound: Σ Min-Sp(A′_ℓ) over evaluated ℓ
        ratio: MST-Sp of the output / upper_bound
    """
    rows: Tuple[EllRecord, ...]
    rho: Fraction
    chosen_ell: int
    schedule: EllSchedule
    bound_1_over_H: float
    upper_bound: float
    ratio: float

    @property
    def chosen(self) -> EllRecord:
        return next(r for r in self.rows if r.ell == self.chosen_ell)

    def to_dict(self) -> dict:
        return {
            "rows": [r.to_dict() for r in self.rows],
            "rho": str(self.rho),
            "chosen_ell": self.chosen_ell,
            "schedule": self.schedule.value,
            "bound_1_over_H": self.bound_1_over_H,
            "upper_bound": self.upper_bound,
            "ratio": self.ratio,
        }


def constrained_max_mst(model: DistanceModel, seq: MergeSequence, k: int, c: SizeConstraint,
                        seed: int = 0, schedule_kind: EllSchedule = EllSchedule.FULL,
                        scheduler: Scheduler = Scheduler.LPT,
                        search: SearchMode = SearchMode.BINARY,
                        workers: Optional[int] = None) -> Tuple[Labels, MaxMstTrace]:
    """
    Constrained-MaxMST.

    Every ℓ is independent given the shared merge sequence, so ℓ values may
    be evaluated on several threads; the split generator of ℓ is seeded
    with (seed, ℓ), which keeps results independent of the thread schedule.
    ℓ values that fail (e.g. scheduler infeasibility) are skipped and
    recorded. Ties in MST-Sp go to the smaller ℓ.

    Args:
        model: The instance
        seq: Its single-linkage merge sequence
        k: Number of groups
        c: Size constraint
        seed: Non-negative seed for the balanced splits
        schedule_kind: full (ℓ = 2..k) or fast (ℓ = ⌈k/2^t⌉)
        scheduler: Scheduler inside AlgoMinSp
        search: Merge-prefix search inside AlgoMinSp
        workers: Thread cap for the ℓ loop

    Returns:
        (labels, trace)
    """
    n = model.n
    if seq.n != n:
        raise ConfigError(f"merge sequence covers {seq.n} points but the model has {n}")
    _validate_k(n, k, c)
    if int(seed) < 0:
        raise ConfigError(f"seed must be non-negative, got {seed}")
    schedule_kind = EllSchedule(schedule_kind)
    rho_value = rho(n, k, c)
    ells = ell_schedule(k, schedule_kind)
    start = time.perf_counter()

    def _evaluate(ell: int) -> EllRecord:
        try:
            result = run_algo_min_sp(seq, ell, c, scheduler, search)
        except (InfeasibleError, SchedulerBudgetError) as exc:
            mst_logger.warning(f"ℓ={ell} skipped: {exc}")
            return EllRecord(ell=ell, skipped=True, reason=str(exc))

        prime = result.labels
        prime_min_sp = min_sp(spacing_graph(model, prime, workers=1))
        groups, clamped = split_to_k(prime.groups(), k, rho_value, c, np.random.default_rng([int(seed), ell]))
        if clamped:
            mst_logger.warning(f"ℓ={ell}: SplitNumber clamped into [1, |A′|]")
        if len(groups) != k:
            reason = f"split produced {len(groups)} groups instead of {k}"
            mst_logger.warning(f"ℓ={ell} skipped: {reason}")
            return EllRecord(ell=ell, min_sp_prime=prime_min_sp, t=result.t, skipped=True, reason=reason,
                             split_clamped=clamped, search_fallback=result.search_fallback, prime_labels=prime)

        labels = Labels.from_groups(groups, n)
        total = mst_sp(spacing_graph(model, labels, workers=1)).total
        mst_logger.debug(f"ℓ={ell}: Min-Sp(A′)={prime_min_sp:.6g}, MST-Sp(A)={total:.6g}")
        return EllRecord(ell=ell, min_sp_prime=prime_min_sp, mst_sp=total, t=result.t,
                         min_size=int(labels.sizes().min()), split_clamped=clamped,
                         search_fallback=result.search_fallback, prime_labels=prime, labels=labels)

    rows = tuple(map_ordered(_evaluate, ells, workers))

    best: Optional[EllRecord] = None
    for row in rows:
        if row.skipped:
            continue
        if best is None or row.mst_sp > best.mst_sp:
            best = row
    if best is None:
        raise InfeasibleError(f"every ℓ in {ells} failed")

    bound_1_over_h = float(1 / harmonic(k - 1))
    upper = math.fsum(r.min_sp_prime for r in rows if not r.skipped)
    ratio = best.mst_sp / upper if upper > 0 else 1.0

    trace = MaxMstTrace(rows=rows, rho=rho_value, chosen_ell=best.ell, schedule=schedule_kind,
                        bound_1_over_H=bound_1_over_h, upper_bound=upper, ratio=ratio)
    mst_logger.info(f"k={k}, L={c.L}, {schedule_kind.value} schedule ({len(ells)} ℓ values): "
                    f"chose ℓ={best.ell}, MST-Sp={best.mst_sp:.6g}, ratio to upper bound {ratio:.3f} "
                    f"in {time.perf_counter() - start:.3f}s")
    return best.labels, trace
