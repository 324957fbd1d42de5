"""
Feature tables and their statistics
===================================

A FeatureMatrix is a dense table of named numeric columns.  This demo walks
through the basic quantities everything else builds on: per-column means and
population variances, mean centering, and the two similarity matrices.
"""

import numpy as np

from corrmatch import (
    FeatureMatrix,
    center,
    cosine_similarity,
    feature_stats,
    pearson_correlation,
    rank_check,
)

# A tiny table: five observations of three features.  Column "load" is a
# noisy multiple of "current", so the two should correlate strongly.
values = np.array(
    [
        [1.0, 230.1, 2.1],
        [2.0, 229.8, 3.9],
        [3.0, 230.4, 6.2],
        [4.0, 229.9, 7.8],
        [5.0, 230.2, 10.1],
    ]
)
table = FeatureMatrix(values, ["current", "voltage", "load"])
print(f"table: {table.n} rows x {table.m} columns, names={table.names}")

# Means and variances use the population convention (divide by n), and the
# centered norm of each column satisfies norm^2 = n * variance.
stats = feature_stats(table)
for j, name in enumerate(table.names):
    print(
        f"  {name:8s} mean={stats.means[j]:9.4f} variance={stats.variances[j]:9.4f}"
        f" centered_norm={stats.centered_norms[j]:8.4f}"
    )

# Centering subtracts each column's mean; doing it twice changes nothing,
# because it is an orthogonal projection.
centered = center(table)
print("column means after centering:", np.round(centered.values.mean(axis=0), 15))
twice = center(centered)
print("centering is idempotent:", np.allclose(twice.values, centered.values))

# Cosine similarity compares raw columns; Pearson correlation compares
# centered columns.  On already-centered data the two coincide.
cos = cosine_similarity(table)
corr = pearson_correlation(table)
print("\ncosine similarity of the raw columns:")
print(np.round(cos.entries, 4))
print("pearson correlation:")
print(np.round(corr.entries, 4))
print(
    "pearson equals cosine-of-centered:",
    np.allclose(corr.entries, cosine_similarity(centered).entries),
)

# The enforcement step later requires a full-rank reference table.
report = rank_check(table)
print(
    f"\nrank check: full_rank={report.full_rank} "
    f"numerical_rank={report.numerical_rank} "
    f"singular_values={np.round(report.singular_values, 3)}"
)
