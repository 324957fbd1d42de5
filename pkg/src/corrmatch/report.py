"""Fidelity reporting: how close is a candidate table to the original?

A report compares the Pearson correlation matrices, per-feature moments,
and per-feature marginal distributions (two-sample Kolmogorov-Smirnov
distance plus a downsampled ECDF grid suitable for plotting).  Reports are
emitted as JSON; rendering is left to external tools.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field

import numpy as np

from .dataio import atomic_text_file
from .errors import InvalidInput, SchemaMismatch
from .procrustes import frobenius_gap
from .stats import CorrelationMatrix, FeatureMatrix, feature_stats, pearson_correlation

__all__ = [
    "FeatureFidelity",
    "FidelityReport",
    "ks_distance",
    "build_report",
    "write_report_json",
    "write_ecdf_csvs",
]


def ks_distance(a, b) -> float:
    """Two-sample Kolmogorov-Smirnov statistic ``sup_x |F_a(x) - F_b(x)|``.

    Both empirical CDFs are evaluated at every pooled sample point (the only
    places the supremum can occur).  Always in [0, 1]; 0 means identical
    samples, 1 means disjoint supports.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 1 or b.ndim != 1:
        raise InvalidInput("ks_distance expects 1-D samples")
    if a.size == 0 or b.size == 0:
        raise InvalidInput("ks_distance needs nonempty samples")
    a_sorted = np.sort(a)
    b_sorted = np.sort(b)
    pooled = np.concatenate([a_sorted, b_sorted])
    cdf_a = np.searchsorted(a_sorted, pooled, side="right") / a.size
    cdf_b = np.searchsorted(b_sorted, pooled, side="right") / b.size
    return float(np.abs(cdf_a - cdf_b).max())


@dataclass(eq=False)
class FeatureFidelity:
    """Per-feature comparison: moments, KS distance, and an ECDF grid of
    ``(value, F_original, F_candidate)`` rows."""

    name: str
    mean_orig: float
    mean_cand: float
    var_orig: float
    var_cand: float
    ks_distance: float
    ecdf_grid: np.ndarray = field(repr=False)


@dataclass(eq=False)
class FidelityReport:
    """Full comparison of a candidate table against the original."""

    corr_original: CorrelationMatrix
    corr_candidate: CorrelationMatrix
    corr_max_abs_error: float
    corr_frobenius_error: float
    per_feature: list
    frobenius_gap_to_start: float | None = None

    def to_dict(self) -> dict:
        """JSON-ready dictionary (row-major correlation arrays with names)."""
        return {
            "corr_original": {
                "names": list(self.corr_original.names),
                "entries": self.corr_original.entries.tolist(),
            },
            "corr_candidate": {
                "names": list(self.corr_candidate.names),
                "entries": self.corr_candidate.entries.tolist(),
            },
            "corr_max_abs_error": self.corr_max_abs_error,
            "corr_frobenius_error": self.corr_frobenius_error,
            "features": [
                {
                    "name": f.name,
                    "mean_orig": f.mean_orig,
                    "mean_cand": f.mean_cand,
                    "var_orig": f.var_orig,
                    "var_cand": f.var_cand,
                    "ks_distance": f.ks_distance,
                    "ecdf_grid": f.ecdf_grid.tolist(),
                }
                for f in self.per_feature
            ],
            "frobenius_gap_to_start": self.frobenius_gap_to_start,
        }


def _ecdf_grid(orig_col, cand_col, points):
    pooled = np.sort(np.concatenate([orig_col, cand_col]))
    positions = np.round(np.linspace(0, pooled.size - 1, points)).astype(np.intp)
    grid = pooled[positions]
    f_orig = np.searchsorted(np.sort(orig_col), grid, side="right") / orig_col.size
    f_cand = np.searchsorted(np.sort(cand_col), grid, side="right") / cand_col.size
    return np.column_stack([grid, f_orig, f_cand])


def build_report(
    original: FeatureMatrix,
    candidate: FeatureMatrix,
    start: FeatureMatrix | None = None,
    ecdf_points: int = 256,
) -> FidelityReport:
    """Compare ``candidate`` against ``original`` feature by feature.

    ``start`` is the matrix the candidate was derived from (if any);
    when given, the report also records the Frobenius distance the
    derivation moved it.  The ECDF of each feature pair is sampled at
    ``ecdf_points`` quantile locations of the pooled data so reports stay
    small regardless of row count.

    Raises
    ------
    SchemaMismatch
        If the two tables do not carry identical feature names.
    """
    if original.names != candidate.names:
        raise SchemaMismatch(
            f"feature names differ: {original.names} vs {candidate.names}"
        )
    if ecdf_points < 2:
        raise InvalidInput("ecdf_points must be at least 2")
    corr_orig = pearson_correlation(original)
    corr_cand = pearson_correlation(candidate)
    diff = np.abs(corr_orig.entries - corr_cand.entries)
    stats_orig = feature_stats(original)
    stats_cand = feature_stats(candidate)
    per_feature = []
    for j, name in enumerate(original.names):
        orig_col = original.values[:, j]
        cand_col = candidate.values[:, j]
        per_feature.append(
            FeatureFidelity(
                name=name,
                mean_orig=float(stats_orig.means[j]),
                mean_cand=float(stats_cand.means[j]),
                var_orig=float(stats_orig.variances[j]),
                var_cand=float(stats_cand.variances[j]),
                ks_distance=ks_distance(orig_col, cand_col),
                ecdf_grid=_ecdf_grid(orig_col, cand_col, ecdf_points),
            )
        )
    gap = frobenius_gap(candidate, start) if start is not None else None
    return FidelityReport(
        corr_original=corr_orig,
        corr_candidate=corr_cand,
        corr_max_abs_error=float(diff.max()),
        corr_frobenius_error=float(np.sqrt(np.sum(diff * diff))),
        per_feature=per_feature,
        frobenius_gap_to_start=gap,
    )


def write_report_json(report: FidelityReport, path) -> None:
    """Serialize a report to JSON (atomically; floats keep full precision)."""
    with atomic_text_file(path) as fh:
        json.dump(report.to_dict(), fh, indent=2, allow_nan=False)
        fh.write("\n")


def write_ecdf_csvs(report: FidelityReport, directory) -> list:
    """Optionally dump each feature's ECDF grid as ``ecdf_<name>.csv`` for
    external plotting; returns the written paths."""
    paths = []
    for f in report.per_feature:
        path = os.path.join(directory, f"ecdf_{f.name}.csv")
        with atomic_text_file(path) as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["value", "cdf_original", "cdf_candidate"])
            writer.writerows(
                [repr(float(v)) for v in row] for row in f.ecdf_grid
            )
        paths.append(path)
    return paths
