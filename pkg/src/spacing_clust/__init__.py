"""
Size-constrained separation clustering.

This package contains all library components:
- DistanceModel: points or distance matrix input
- single_linkage / cut: the merge sequence and its prefixes
- spacing_graph / min_sp / mst_sp: the separation criteria
- lpt_schedule / exact_schedule: max-min scheduling
- algo_min_sp / constrained_max_mst: the size-constrained algorithms
- optimal_profile / verify_guarantees: brute-force oracle
- kmeans: the comparison baseline
"""

from .baseline import KMeansResult, derive_L, kmeans
from .config import Settings, configure_logging, get_settings, reset_settings
from .constrained import (
    MaxMstTrace,
    SizeConstraint,
    algo_min_sp,
    balanced_split,
    constrained_max_mst,
    fast_ell_schedule,
    find_merge_prefix,
    full_ell_schedule,
)
from .dataset import DistanceModel, load_csv, load_input, load_matrix
from .errors import (
    ConfigError,
    DatasetError,
    InfeasibleError,
    OracleLimitError,
    SchedulerBudgetError,
    SpacingClustError,
)
from .linkage import MergeSequence, cut, export_dendrogram, group_sizes_at, single_linkage, singleton_sweep
from .oracle import OptimalProfile, enumerate_clusterings, optimal_profile, verify_guarantees
from .report import ClusteringReport
from .scheduling import ScheduleAssignment, exact_schedule, lpt_schedule, schedule
from .spacing import SpacingGraph, min_sp, mst_sp, quadratic_loss, report, spacing_graph
from .types import Algo, EllSchedule, Labels, LinkageStrategy, Scheduler, SearchMode

__version__ = "1.0.0"

__all__ = [
    'Algo',
    'ClusteringReport',
    'ConfigError',
    'DatasetError',
    'DistanceModel',
    'EllSchedule',
    'InfeasibleError',
    'KMeansResult',
    'Labels',
    'LinkageStrategy',
    'MaxMstTrace',
    'MergeSequence',
    'OptimalProfile',
    'OracleLimitError',
    'ScheduleAssignment',
    'Scheduler',
    'SchedulerBudgetError',
    'SearchMode',
    'Settings',
    'SizeConstraint',
    'SpacingClustError',
    'SpacingGraph',
    'algo_min_sp',
    'balanced_split',
    'configure_logging',
    'constrained_max_mst',
    'cut',
    'derive_L',
    'enumerate_clusterings',
    'exact_schedule',
    'export_dendrogram',
    'fast_ell_schedule',
    'find_merge_prefix',
    'full_ell_schedule',
    'get_settings',
    'group_sizes_at',
    'kmeans',
    'load_csv',
    'load_input',
    'load_matrix',
    'lpt_schedule',
    'min_sp',
    'mst_sp',
    'optimal_profile',
    'quadratic_loss',
    'report',
    'reset_settings',
    'schedule',
    'single_linkage',
    'singleton_sweep',
    'spacing_graph',
    'verify_guarantees',
]
