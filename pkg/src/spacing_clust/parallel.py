"""
Ordered thread-pool map used by the internally parallel loops.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from .config import get_settings

T = TypeVar("T")
R = TypeVar("R")


def map_ordered(fn: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None) -> List[R]:
    """
    Apply fn to every item, possibly on several threads.

    Results are returned in input order whatever the completion order, and
    the first exception raised by any call is re-raised here.

    Args:
        fn: Function to apply
        items: Inputs
        workers: Thread cap (default: SPACING_CLUST_THREADS)

    Returns:
        List of results aligned with items
    """
    items = list(items)
    workers = workers or get_settings().threads
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))
