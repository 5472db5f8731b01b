"""
Aggregation and printed report for comparison runs.
"""

import statistics
from typing import Dict, List, Optional, Sequence

from .protocol import ComparisonRow

SUMMARY_METRICS = ("min_sp", "mst_sp", "smallest_size", "quad_loss", "rel_quad_loss", "runtime_s")


class ComparisonMetrics:
    """Track comparison rows and compute per-algorithm statistics."""

    def __init__(self, rows: Optional[Sequence[ComparisonRow]] = None):
        self.rows: List[ComparisonRow] = list(rows or [])

    @property
    def algos(self) -> List[str]:
        """Algorithms in first-seen order."""
        return list(dict.fromkeys(r.algo for r in self.rows))

    @property
    def seeds(self) -> List[int]:
        return list(dict.fromkeys(r.seed for r in self.rows))

    def get_stats(self, values: List[float]) -> Dict:
        """Mean and standard deviation over seeds (population form)."""
        if not values:
            return {"mean": None, "std": None, "min": None, "max": None}
        return {
            "mean": statistics.fmean(values),
            "std": statistics.pstdev(values),
            "min": min(values),
            "max": max(values),
        }

    def summarize(self) -> Dict[str, Dict[str, Dict]]:
        """algo → metric → stats; metrics missing on every row are skipped."""
        out = {}
        for algo in self.algos:
            rows = [r for r in self.rows if r.algo == algo]
            per_metric = {}
            for metric in SUMMARY_METRICS:
                values = [getattr(r, metric) for r in rows if getattr(r, metric) is not None]
                if values:
                    per_metric[metric] = self.get_stats([float(v) for v in values])
            out[algo] = per_metric
        return out

    def print_report(self):
        """Print the averaged comparison table."""
        summary = self.summarize()
        print("\n" + "=" * 80)
        print("🎯 SEPARATION CLUSTERING COMPARISON REPORT")
        print("=" * 80)

        print(f"\n📊 SUMMARY")
        print(f"  Seeds:      {len(self.seeds)}")
        print(f"  Algorithms: {', '.join(self.algos)}")

        for metric in SUMMARY_METRICS:
            if not any(metric in stats for stats in summary.values()):
                continue
            print(f"\n📋 {metric.upper()}  (mean ± std over seeds)")
            for algo, stats in summary.items():
                if metric in stats:
                    self._print_stats(algo, stats[metric])
        print("\n" + "=" * 80 + "\n")

    def _print_stats(self, algo: str, stats: Dict):
        """Helper to print one statistics line in a consistent format."""
        print(f"     {algo:<15} {stats['mean']:12.6g} ± {stats['std']:<10.3g} "
              f"[{stats['min']:.6g}, {stats['max']:.6g}]")


def summarize(rows: Sequence[ComparisonRow]) -> Dict[str, Dict[str, Dict]]:
    """Per-algorithm mean/std of every comparison metric."""
    return ComparisonMetrics(rows).summarize()
