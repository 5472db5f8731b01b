"""
Scheduling Module.

Max-min scheduling (machine covering): split a list of positive sizes over
k machines so that the smallest machine load is as large as possible.

Two solvers:
- lpt_schedule: Longest Processing Time rule, 3/4-approximate, fast.
- exact_schedule: branch and bound, exact, for small instances only.
"""

import heapq
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .errors import ConfigError, SchedulerBudgetError
from .types import Scheduler

logger = logging.getLogger("Scheduler")

EXACT_MAX_ITEMS = 20
EXACT_MAX_ITEMS_FEW_MACHINES = 24
EXACT_FEW_MACHINES = 4


@dataclass(frozen=True)
class ScheduleAssignment:
    """
    A partition of items onto k machines.

    Attributes:
        machine_of: Machine id of each item, in item order
        loads: Sum of item sizes per machine
        min_load: Smallest load
        item_groups: Optional id of the group each item stands for
    """
    machine_of: Tuple[int, ...]
    loads: Tuple[int, ...]
    min_load: int
    item_groups: Optional[Tuple[int, ...]] = field(default=None)

    @property
    def k(self) -> int:
        return len(self.loads)

    def machine_items(self, machine: int) -> List[int]:
        """Items placed on a machine, ascending."""
        return [i for i, m in enumerate(self.machine_of) if m == machine]


def _validate(sizes: Sequence[int], k: int) -> List[int]:
    if k < 1:
        raise ConfigError(f"machine count must be at least 1, got {k}")
    sizes = [int(s) for s in sizes]
    if not sizes:
        raise ConfigError("need at least one item to schedule")
    for i, s in enumerate(sizes):
        if s <= 0:
            raise ConfigError(f"item {i} has nonpositive size {s}")
    return sizes


def _build(sizes: List[int], machine_of: List[int], k: int,
           item_groups: Optional[Sequence[int]]) -> ScheduleAssignment:
    loads = [0] * k
    for s, m in zip(sizes, machine_of):
        loads[m] += s
    return ScheduleAssignment(
        machine_of=tuple(machine_of),
        loads=tuple(loads),
        min_load=min(loads),
        item_groups=None if item_groups is None else tuple(int(g) for g in item_groups),
    )


def lpt_schedule(sizes: Sequence[int], k: int, item_groups: Optional[Sequence[int]] = None) -> ScheduleAssignment:
    """
    Longest Processing Time rule.

    Items go in descending size (equal sizes by index) to the currently
    least-loaded machine (equal loads by machine id).

    Args:
        sizes: Positive item sizes
        k: Machine count
        item_groups: Group represented by each item, carried through

    Returns:
        ScheduleAssignment
    """
    sizes = _validate(sizes, k)
    order = sorted(range(len(sizes)), key=lambda i: (-sizes[i], i))
    heap = [(0, m) for m in range(k)]
    machine_of = [0] * len(sizes)
    for i in order:
        load, m = heapq.heappop(heap)
        machine_of[i] = m
        heapq.heappush(heap, (load + sizes[i], m))
    return _build(sizes, machine_of, k, item_groups)


def _within_budget(n_items: int, k: int) -> bool:
    if n_items <= EXACT_MAX_ITEMS:
        return True
    return k <= EXACT_FEW_MACHINES and n_items <= EXACT_MAX_ITEMS_FEW_MACHINES


def exact_schedule(sizes: Sequence[int], k: int, item_groups: Optional[Sequence[int]] = None) -> ScheduleAssignment:
    """
    Optimal max-min schedule by branch and bound.

    Items are placed in descending size. Machines with equal current load
    are interchangeable, so only one of them is tried per item. A branch is
    cut when the remaining items cannot lift every machine above the
    incumbent. The LPT schedule seeds the incumbent.

    Args:
        sizes: Positive item sizes (at most 20, or 24 with k ≤ 4)
        k: Machine count
        item_groups: Group represented by each item, carried through

    Returns:
        ScheduleAssignment whose min_load is the optimum
    """
    sizes = _validate(sizes, k)
    n_items = len(sizes)
    if len(set(sizes)) == 1:
        # identical items: round-robin (LPT) is optimal
        return lpt_schedule(sizes, k, item_groups)
    if not _within_budget(n_items, k):
        raise SchedulerBudgetError(
            f"too large for exact solver: {n_items} items on {k} machines "
            f"(limit {EXACT_MAX_ITEMS} items, or {EXACT_MAX_ITEMS_FEW_MACHINES} with k ≤ {EXACT_FEW_MACHINES})"
        )

    incumbent = lpt_schedule(sizes, k, item_groups)
    total = sum(sizes)
    ceiling = total // k
    if n_items < k or incumbent.min_load == ceiling:
        return incumbent

    order = sorted(range(n_items), key=lambda i: (-sizes[i], i))
    ordered = [sizes[i] for i in order]
    suffix = [0] * (n_items + 1)
    for pos in range(n_items - 1, -1, -1):
        suffix[pos] = suffix[pos + 1] + ordered[pos]

    best_value = incumbent.min_load
    best_choice: Optional[List[int]] = None
    loads = [0] * k
    choice = [0] * n_items

    def _search(pos: int) -> bool:
        nonlocal best_value, best_choice
        if pos == n_items:
            value = min(loads)
            if value > best_value:
                best_value = value
                best_choice = list(choice)
                return best_value == ceiling
            return False

        target = best_value + 1
        deficit = sum(target - load for load in loads if load < target)
        if deficit > suffix[pos]:
            return False

        tried = set()
        # least-loaded machines first
        for m in sorted(range(k), key=lambda j: (loads[j], j)):
            if loads[m] in tried:
                continue
            tried.add(loads[m])
            loads[m] += ordered[pos]
            choice[pos] = m
            done = _search(pos + 1)
            loads[m] -= ordered[pos]
            if done:
                return True
        return False

    _search(0)
    if best_choice is None:
        return incumbent

    machine_of = [0] * n_items
    for pos, item in enumerate(order):
        machine_of[item] = best_choice[pos]
    logger.debug(f"Exact schedule improved LPT {incumbent.min_load} → {best_value}")
    return _build(sizes, machine_of, k, item_groups)


def schedule(sizes: Sequence[int], k: int, scheduler: Scheduler = Scheduler.LPT,
             item_groups: Optional[Sequence[int]] = None) -> ScheduleAssignment:
    """Dispatch to the chosen solver."""
    if Scheduler(scheduler) == Scheduler.EXACT:
        return exact_schedule(sizes, k, item_groups)
    return lpt_schedule(sizes, k, item_groups)
