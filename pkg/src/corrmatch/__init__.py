"""corrmatch: exact Pearson-correlation enforcement for synthetic tables.

The core operation, :func:`enforce_correlations`, takes an original table
and a same-shape synthetic table and returns the matrix closest to the
synthetic one (in Frobenius norm) whose correlation matrix equals the
original's exactly and whose per-column means and variances hit prescribed
targets.  Supporting modules provide the statistics primitives, a naive
per-column resampler to generate baseline synthetic data, CSV ingestion
for large tables, and fidelity reports.
"""

from .errors import (
    ConstantColumn,
    CorrmatchError,
    DegenerateTarget,
    InvalidCompetitor,
    InvalidConfig,
    InvalidCorrelation,
    InvalidInput,
    MissingColumn,
    ParseError,
    RankDeficient,
    SchemaMismatch,
    ShapeMismatch,
    ZeroNormColumn,
)
from .stats import (
    CorrelationMatrix,
    FeatureMatrix,
    FeatureStats,
    RankReport,
    center,
    column_mean,
    column_variance,
    constant_columns,
    cosine_similarity,
    feature_stats,
    pearson_correlation,
    rank_check,
)
from .procrustes import (
    EnforcementResult,
    ProcrustesFactors,
    ScalingMatrix,
    StatTargets,
    constrained_candidate,
    enforce_correlations,
    frobenius_gap,
    scaling_matrix,
    thin_svd_outer,
)
from .sampler import SamplerConfig, make_test_dataset, naive_sample
from .dataio import CsvSchema, read_csv, write_csv
from .report import (
    FeatureFidelity,
    FidelityReport,
    build_report,
    ks_distance,
    write_ecdf_csvs,
    write_report_json,
)

__version__ = "0.1.0"

__all__ = [
    "CorrmatchError",
    "InvalidInput",
    "ShapeMismatch",
    "InvalidConfig",
    "InvalidCorrelation",
    "InvalidCompetitor",
    "SchemaMismatch",
    "MissingColumn",
    "DegenerateTarget",
    "ZeroNormColumn",
    "ConstantColumn",
    "RankDeficient",
    "ParseError",
    "FeatureMatrix",
    "FeatureStats",
    "CorrelationMatrix",
    "RankReport",
    "column_mean",
    "column_variance",
    "feature_stats",
    "center",
    "cosine_similarity",
    "pearson_correlation",
    "constant_columns",
    "rank_check",
    "StatTargets",
    "ScalingMatrix",
    "ProcrustesFactors",
    "EnforcementResult",
    "scaling_matrix",
    "thin_svd_outer",
    "enforce_correlations",
    "frobenius_gap",
    "constrained_candidate",
    "SamplerConfig",
    "naive_sample",
    "make_test_dataset",
    "CsvSchema",
    "read_csv",
    "write_csv",
    "FeatureFidelity",
    "FidelityReport",
    "ks_distance",
    "build_report",
    "write_report_json",
    "write_ecdf_csvs",
]
