"""Correlation enforcement by orthogonal alignment.

Given a reference table and a same-shape synthetic table, find the matrix
closest to the synthetic one (Frobenius norm) whose Pearson correlation
matrix equals the reference's and whose per-column means and variances hit
prescribed targets.  The optimum has a closed form built from the singular
value decomposition of an n-by-n outer product; everything here evaluates
that form through thin QR factors so the cost stays O(n m^2) and no n-by-n
matrix is ever materialized.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (
    ConstantColumn,
    DegenerateTarget,
    InvalidCompetitor,
    InvalidInput,
    RankDeficient,
    ShapeMismatch,
)
from .stats import (
    FeatureMatrix,
    FeatureStats,
    center,
    constant_columns,
    feature_stats,
    rank_check,
)

__all__ = [
    "StatTargets",
    "ScalingMatrix",
    "ProcrustesFactors",
    "EnforcementResult",
    "scaling_matrix",
    "thin_svd_outer",
    "enforce_correlations",
    "frobenius_gap",
    "constrained_candidate",
]


@dataclass(eq=False)
class StatTargets:
    """Target per-column means and (strictly positive) variances."""

    means: np.ndarray
    variances: np.ndarray

    def __post_init__(self):
        self.means = np.ascontiguousarray(self.means, dtype=np.float64)
        self.variances = np.ascontiguousarray(self.variances, dtype=np.float64)
        if self.means.ndim != 1 or self.variances.ndim != 1:
            raise InvalidInput("target means and variances must be 1-D vectors")
        if self.means.size != self.variances.size:
            raise InvalidInput("target means and variances must have equal length")
        if not (np.isfinite(self.means).all() and np.isfinite(self.variances).all()):
            raise InvalidInput("targets must be finite")
        if np.any(self.variances <= 0.0):
            j = int(np.argmax(self.variances <= 0.0))
            raise DegenerateTarget(
                f"target variance for column {j} is {self.variances[j]}; "
                "a zero-variance column has undefined correlation"
            )

    @classmethod
    def from_matrix(cls, matrix: FeatureMatrix) -> "StatTargets":
        """Targets equal to the matrix's own means and population variances."""
        stats = feature_stats(matrix)
        return cls(stats.means.copy(), stats.variances.copy())

    @property
    def m(self) -> int:
        return self.means.size


@dataclass(eq=False)
class ScalingMatrix:
    """Positive diagonal rescaling that maps each centered reference column
    onto the sphere of radius ``sqrt(n * target_variance)``."""

    diagonal: np.ndarray

    def __post_init__(self):
        self.diagonal = np.ascontiguousarray(self.diagonal, dtype=np.float64)
        if self.diagonal.ndim != 1:
            raise InvalidInput("scaling diagonal must be a 1-D vector")
        if not np.isfinite(self.diagonal).all() or np.any(self.diagonal <= 0.0):
            raise InvalidInput("scaling diagonal must be strictly positive and finite")


@dataclass(eq=False)
class ProcrustesFactors:
    """Thin SVD factors of an outer product ``B @ A.T`` of two n-by-m frames.

    ``U`` and ``V`` are n-by-m with orthonormal columns, ``sigma`` holds the
    m leading singular values in nonincreasing order, and ``rank_mask`` is a
    0/1 vector flagging singular values above ``rel_tol * sigma[0]``.  The
    masked map ``U @ diag(rank_mask) @ V.T`` is a partial isometry; applied
    to anything in the column span of ``A`` it preserves inner products.
    """

    U: np.ndarray = field(repr=False)
    V: np.ndarray = field(repr=False)
    sigma: np.ndarray
    rank_mask: np.ndarray
    rel_tol: float

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.rank_mask))


@dataclass(eq=False)
class EnforcementResult:
    """Outcome of :func:`enforce_correlations`."""

    adjusted: FeatureMatrix
    factors: ProcrustesFactors
    rank: int
    unique: bool


def scaling_matrix(stats: FeatureStats, targets: StatTargets, n: int) -> ScalingMatrix:
    """Diagonal entries ``sqrt(target_variance_i) * sqrt(n) / centered_norm_i``.

    Column i of the centered reference, scaled by this entry, has Euclidean
    norm ``sqrt(n * target_variance_i)``, i.e. exactly the target variance
    under the population convention.
    """
    if stats.means.size != targets.m:
        raise ShapeMismatch(
            f"statistics cover {stats.means.size} columns, targets cover {targets.m}"
        )
    if n < 1:
        raise InvalidInput("row count must be positive")
    if np.any(stats.centered_norms <= 0.0):
        j = int(np.argmax(stats.centered_norms <= 0.0))
        raise ConstantColumn(j, f"column {j} of the reference is constant")
    diagonal = np.sqrt(targets.variances) * np.sqrt(n) / stats.centered_norms
    return ScalingMatrix(diagonal)


def thin_svd_outer(b: np.ndarray, a: np.ndarray, rel_tol: float = 1e-12) -> ProcrustesFactors:
    """Thin SVD of the outer product ``b @ a.T`` without forming it.

    Factors ``b = Q_b R_b`` and ``a = Q_a R_a`` by thin QR, takes a dense
    m-by-m SVD of ``R_b @ R_a.T``, and rotates the small factors back up:
    ``U = Q_b @ u``, ``V = Q_a @ v``.  Then ``U @ diag(sigma) @ V.T``
    reproduces ``b @ a.T`` on its rank-<=m support at O(n m^2) cost.

    Parameters
    ----------
    b, a : ndarray
        Equal-shape n-by-m arrays with m <= n.
    rel_tol : float
        Relative threshold for the rank mask.  Exact zeros never survive
        floating point, so singular values at or below
        ``rel_tol * sigma[0]`` are flagged as zero.
    """
    b = np.asarray(b, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    if b.ndim != 2 or a.ndim != 2 or b.shape != a.shape:
        raise ShapeMismatch(f"operands must share an n-by-m shape, got {b.shape} and {a.shape}")
    n, m = b.shape
    if m > n:
        raise ShapeMismatch(f"need m <= n, got {n}-by-{m}")
    q_b, r_b = np.linalg.qr(b)
    q_a, r_a = np.linalg.qr(a)
    u_small, sigma, vt_small = np.linalg.svd(r_b @ r_a.T)
    u = q_b @ u_small
    v = q_a @ vt_small.T
    if sigma[0] > 0.0:
        mask = (sigma > rel_tol * sigma[0]).astype(np.float64)
    else:
        mask = np.zeros_like(sigma)
    return ProcrustesFactors(u, v, sigma, mask, rel_tol)


def _dependent_column_names(matrix: FeatureMatrix, rank: int) -> tuple:
    # Column-pivoted QR orders columns by decreasing contribution; pivots
    # past the numerical rank are expressible through the leading ones.
    _, pivots = scipy.linalg.qr(matrix.values, mode="r", pivoting=True)
    return tuple(matrix.names[j] for j in sorted(pivots[rank:]))


def enforce_correlations(
    original: FeatureMatrix,
    synthetic: FeatureMatrix,
    targets: StatTargets,
    rel_tol: float = 1e-12,
) -> EnforcementResult:
    """Closest matrix to ``synthetic`` with the reference's correlations.

    Returns the minimizer of the Frobenius distance to ``synthetic`` over
    all matrices whose Pearson correlation matrix equals
    ``pearson_correlation(original)`` and whose column means and variances
    equal ``targets``.  The minimizer is generally not unique; the canonical
    thin-SVD solution is returned.

    The construction: center both tables, rescale the centered reference
    columns to the target variances, and align the rescaled reference onto
    the centered synthetic table with the best partial isometry (the
    orthogonal-alignment optimum, computed from the thin SVD factors of the
    cross outer product).  Adding the target means back gives the result.

    Parameters
    ----------
    original : FeatureMatrix
        Reference table; must be full rank with no constant columns.
    synthetic : FeatureMatrix
        Table to adjust; must have the same shape as ``original``.
    targets : StatTargets
        Means and variances the adjusted table must attain.
    rel_tol : float
        Rank threshold used both for the reference rank check and for
        masking negligible singular values.

    Returns
    -------
    EnforcementResult
        ``adjusted`` (the optimum), the thin factors, the numerical rank of
        the aligned product, and whether the aligning transform was unique
        (only possible when the rank reaches n).

    Raises
    ------
    ShapeMismatch
        If the tables disagree in shape or the targets in length.
    ConstantColumn
        If the reference has a constant column.
    RankDeficient
        If the reference is numerically rank deficient (names the
        dependent columns).
    """
    if original.n != synthetic.n:
        raise ShapeMismatch(
            f"row counts differ: original has n={original.n} rows, "
            f"synthetic has p={synthetic.n}; the transform requires p = n"
        )
    if original.m != synthetic.m:
        raise ShapeMismatch(
            f"column counts differ: original has {original.m}, synthetic has {synthetic.m}"
        )
    if targets.m != original.m:
        raise ShapeMismatch(
            f"targets cover {targets.m} columns, tables have {original.m}"
        )
    bad = constant_columns(original)
    if bad:
        raise ConstantColumn(bad[0])
    report = rank_check(original, rel_tol)
    if not report.full_rank:
        raise RankDeficient(_dependent_column_names(original, report.numerical_rank))

    n = original.n
    stats = feature_stats(original)
    scale = scaling_matrix(stats, targets, n).diagonal
    target_frame = center(original).values * scale
    factors = thin_svd_outer(center(synthetic).values, target_frame, rel_tol)
    core = factors.V.T @ target_frame
    adjusted = factors.U @ (factors.rank_mask[:, None] * core)
    adjusted += targets.means
    rank = factors.rank
    return EnforcementResult(
        FeatureMatrix(adjusted, synthetic.names), factors, rank, rank == n
    )


def frobenius_gap(left, right) -> float:
    """Frobenius distance between two equal-shape tables."""
    a = np.asarray(getattr(left, "values", left), dtype=np.float64)
    b = np.asarray(getattr(right, "values", right), dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeMismatch(f"shapes differ: {a.shape} vs {b.shape}")
    diff = a - b
    return float(np.sqrt(np.sum(diff * diff)))


def constrained_candidate(
    original: FeatureMatrix, targets: StatTargets, q: np.ndarray
) -> FeatureMatrix:
    """Feasible competitor built from an explicit orthogonal transform.

    Any orthogonal ``q`` that fixes the all-ones direction maps the centered
    hyperplane to itself, so ``q @ (centered reference * scaling) + means``
    satisfies the same correlation and moment constraints as the optimum.
    Intended for optimality testing on small instances; ``q`` is a dense
    n-by-n matrix.

    Raises
    ------
    InvalidCompetitor
        If ``q`` is not orthogonal within 1e-10 or moves the all-ones
        vector by more than 1e-10 per entry.
    """
    q = np.asarray(q, dtype=np.float64)
    n = original.n
    if q.shape != (n, n):
        raise InvalidCompetitor(f"transform must be {n}-by-{n}, got {q.shape}")
    if np.abs(q.T @ q - np.eye(n)).max() > 1e-10:
        raise InvalidCompetitor("transform is not orthogonal within 1e-10")
    ones = np.ones(n)
    if np.abs(q @ ones - ones).max() > 1e-10:
        raise InvalidCompetitor("transform does not fix the all-ones direction within 1e-10")
    bad = constant_columns(original)
    if bad:
        raise ConstantColumn(bad[0])
    scale = scaling_matrix(feature_stats(original), targets, n).diagonal
    candidate = q @ (center(original).values * scale)
    candidate += targets.means
    return FeatureMatrix(candidate, original.names)
