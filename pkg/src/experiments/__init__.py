"""
Experimental protocol: comparison against k-means, singleton sweeps and
split-stability studies.
"""

from .metrics import ComparisonMetrics, summarize
from .protocol import (
    ComparisonRow,
    StabilityResult,
    make_blobs,
    run_comparison,
    singleton_table,
    split_stability,
    write_comparison_csv,
)

__all__ = [
    "ComparisonMetrics",
    "ComparisonRow",
    "StabilityResult",
    "make_blobs",
    "run_comparison",
    "singleton_table",
    "split_stability",
    "summarize",
    "write_comparison_csv",
]
