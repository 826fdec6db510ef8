"""Output-sensitive color frequency reporting for colored point sets.

Given points in R^d, each with a color (and optionally a weight from a
commutative semigroup), the structures here answer axis-aligned dominance
and box queries with one (color, total) pair per color present in the
range, in time linear in the number of reported colors plus logarithmic
search overhead.  Batched offline variants answer many queries with low
peak working space by building substructures during a sweep and
destroying them behind it.
"""

from .core import (
    BoxQuery,
    COUNT,
    ColoredPoint,
    ContractViolationError,
    CountMode,
    MAX_SEMIGROUP,
    MalformedInputError,
    MalformedQueryError,
    ParameterError,
    PointSet,
    QuerySession,
    RankMap,
    SemigroupMode,
    UnsupportedOperationError,
    UnsupportedShapeError,
    canonical_freq,
    freq_total,
    normalize_query,
    rank_reduce,
    read_dataset,
    read_queries,
    write_dataset,
    write_queries,
)
from .freq1d import Frequency1D, build_1d, query_interval, query_prefix
from .dominance import (
    ColorAccumulator,
    DominanceTree,
    TreeStats,
    accumulate,
    build_dominance,
    ceil_log,
    dominance_path_bound,
    dominance_space_bound,
    drain_and_reset,
    query_dominance,
    stats,
)
from .boxes import BoxTree, build_box, query_box
from .offline import (
    OfflineJob,
    SweepSummary,
    answer_offline_3sided,
    answer_offline_dominance,
    peak_space_report,
)
from .oracle import brute_force, brute_force_batch
from .datagen import generate_points, generate_queries

__version__ = "0.1.0"

__all__ = [
    "BoxQuery",
    "BoxTree",
    "COUNT",
    "ColorAccumulator",
    "ColoredPoint",
    "ContractViolationError",
    "CountMode",
    "DominanceTree",
    "Frequency1D",
    "MAX_SEMIGROUP",
    "MalformedInputError",
    "MalformedQueryError",
    "OfflineJob",
    "ParameterError",
    "PointSet",
    "QuerySession",
    "RankMap",
    "SemigroupMode",
    "SweepSummary",
    "TreeStats",
    "UnsupportedOperationError",
    "UnsupportedShapeError",
    "accumulate",
    "answer_offline_3sided",
    "answer_offline_dominance",
    "brute_force",
    "brute_force_batch",
    "build_1d",
    "build_box",
    "build_dominance",
    "canonical_freq",
    "ceil_log",
    "dominance_path_bound",
    "dominance_space_bound",
    "drain_and_reset",
    "freq_total",
    "generate_points",
    "generate_queries",
    "normalize_query",
    "peak_space_report",
    "query_box",
    "query_dominance",
    "query_interval",
    "query_prefix",
    "rank_reduce",
    "read_dataset",
    "read_queries",
    "stats",
    "write_dataset",
    "write_queries",
]
