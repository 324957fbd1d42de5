"""Column statistics and correlation matrices for dense feature tables.

All statistics use the population convention (divide by ``n``), and all
summations run through numpy's pairwise reduction over a contiguous copy of
each column in index order, so results are bit-stable across runs and
independent of any column-level parallelism.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConstantColumn,
    InvalidInput,
    ZeroNormColumn,
)

__all__ = [
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
]

# Relative threshold below which a centered column counts as constant.
CONSTANT_COLUMN_RTOL = 1e-12


def _frozen(values, dtype=np.float64, order="F"):
    """Return ``values`` as a read-only ndarray, copying only when needed."""
    arr = np.asarray(values, dtype=dtype)
    if arr.flags.writeable or (order == "F" and not arr.flags.f_contiguous):
        arr = np.array(arr, dtype=dtype, order=order)
        arr.flags.writeable = False
    return arr


@dataclass(eq=False)
class FeatureMatrix:
    """Dense n-by-m table of real features: n observations, m named columns.

    ``values`` is stored column-contiguous (Fortran order) and read-only, so
    instances can be shared freely across threads.  Entries must be finite
    and names unique; m must not exceed n.
    """

    values: np.ndarray
    names: tuple

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise InvalidInput(f"feature matrix must be 2-D, got ndim={values.ndim}")
        n, m = values.shape
        if m < 1:
            raise InvalidInput("feature matrix needs at least one column")
        if n < 1:
            raise InvalidInput("feature matrix needs at least one row")
        if m > n:
            raise InvalidInput(f"more features than observations ({m} > {n})")
        if not np.isfinite(values).all():
            raise InvalidInput("feature matrix contains NaN or infinite entries")
        names = tuple(str(c) for c in self.names)
        if len(names) != m:
            raise InvalidInput(f"got {len(names)} names for {m} columns")
        if len(set(names)) != m:
            raise InvalidInput("feature names must be unique")
        self.values = _frozen(values)
        self.names = names

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    def column(self, name: str) -> np.ndarray:
        """Return the column with the given name (read-only view)."""
        try:
            return self.values[:, self.names.index(name)]
        except ValueError:
            raise InvalidInput(f"no column named {name!r}") from None


@dataclass(eq=False)
class FeatureStats:
    """Per-column mean, population variance, and centered Euclidean norm.

    ``centered_norms[i]`` equals ``sqrt(n * variances[i])`` up to rounding.
    """

    means: np.ndarray
    variances: np.ndarray
    centered_norms: np.ndarray

    def __post_init__(self):
        self.means = _frozen(self.means, order="C")
        self.variances = _frozen(self.variances, order="C")
        self.centered_norms = _frozen(self.centered_norms, order="C")
        if not (self.means.ndim == self.variances.ndim == self.centered_norms.ndim == 1):
            raise InvalidInput("statistics vectors must be 1-D")
        if not (self.means.size == self.variances.size == self.centered_norms.size):
            raise InvalidInput("statistics vectors must have equal length")
        if np.any(self.variances < 0):
            raise InvalidInput("variances must be nonnegative")


@dataclass(eq=False)
class CorrelationMatrix:
    """Symmetric m-by-m similarity matrix with unit diagonal.

    ``kind`` is ``"pearson"`` (similarity of mean-centered columns) or
    ``"cosine"`` (similarity of raw columns).
    """

    entries: np.ndarray
    kind: str
    names: tuple | None = None

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=np.float64)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise InvalidInput("correlation matrix must be square")
        if self.kind not in ("pearson", "cosine"):
            raise InvalidInput(f"unknown correlation kind {self.kind!r}")
        if not np.isfinite(entries).all():
            raise InvalidInput("correlation matrix contains non-finite entries")
        if np.abs(entries - entries.T).max() > 1e-12:
            raise InvalidInput("correlation matrix is not symmetric")
        if np.abs(np.diag(entries) - 1.0).max() > 1e-12:
            raise InvalidInput("correlation matrix diagonal is not 1")
        if np.abs(entries).max() > 1.0 + 1e-12:
            raise InvalidInput("correlation entries must lie in [-1, 1]")
        self.entries = _frozen(entries)
        if self.names is not None:
            self.names = tuple(self.names)
            if len(self.names) != entries.shape[0]:
                raise InvalidInput("names length does not match matrix size")

    @property
    def m(self) -> int:
        return self.entries.shape[0]


@dataclass(eq=False)
class RankReport:
    """Outcome of a numerical rank check."""

    full_rank: bool
    numerical_rank: int
    singular_values: np.ndarray = field(repr=False)


def _as_column(f) -> np.ndarray:
    arr = np.asarray(f, dtype=np.float64)
    if arr.ndim != 1:
        raise InvalidInput(f"expected a 1-D column, got ndim={arr.ndim}")
    if arr.size == 0:
        raise InvalidInput("column is empty")
    if not np.isfinite(arr).all():
        raise InvalidInput("column contains NaN or infinite entries")
    return np.ascontiguousarray(arr)


def column_mean(f) -> float:
    """Arithmetic mean of a column, via deterministic pairwise summation."""
    arr = _as_column(f)
    return float(np.sum(arr) / arr.size)


def column_variance(f) -> float:
    """Population variance (divide by n) computed on explicitly centered data.

    Two passes: subtract the mean, then average the squared residuals.  The
    one-pass E[x^2] - E[x]^2 shortcut is deliberately avoided; it loses
    accuracy catastrophically on long columns with a large mean.
    """
    arr = _as_column(f)
    residual = arr - (np.sum(arr) / arr.size)
    return float(np.sum(residual * residual) / arr.size)


def feature_stats(matrix: FeatureMatrix) -> FeatureStats:
    """Per-column means, population variances, and centered norms."""
    n, m = matrix.n, matrix.m
    means = np.empty(m)
    variances = np.empty(m)
    norms = np.empty(m)
    for j in range(m):
        col = matrix.values[:, j]
        means[j] = np.sum(col) / n
        residual = col - means[j]
        sq = np.sum(residual * residual)
        variances[j] = sq / n
        norms[j] = np.sqrt(sq)
    return FeatureStats(means, variances, norms)


def center(matrix: FeatureMatrix) -> FeatureMatrix:
    """Subtract each column's mean: orthogonal projection onto the
    hyperplane of zero-mean vectors (idempotent)."""
    out = np.empty((matrix.n, matrix.m), order="F")
    for j in range(matrix.m):
        col = matrix.values[:, j]
        out[:, j] = col - (np.sum(col) / matrix.n)
    out.flags.writeable = False
    return FeatureMatrix(out, matrix.names)


def constant_columns(matrix: FeatureMatrix) -> list:
    """Names of columns whose centered norm is negligible relative to their
    magnitude (these have undefined Pearson correlation)."""
    found = []
    n = matrix.n
    for j, name in enumerate(matrix.names):
        col = matrix.values[:, j]
        residual = col - (np.sum(col) / n)
        norm = np.sqrt(np.sum(residual * residual))
        scale = np.abs(col).max()
        if norm <= CONSTANT_COLUMN_RTOL * np.sqrt(n) * scale:
            found.append(name)
    return found


def _unit_gram(matrix: FeatureMatrix, kind: str) -> CorrelationMatrix:
    norms = np.empty(matrix.m)
    for j in range(matrix.m):
        col = matrix.values[:, j]
        norms[j] = np.sqrt(np.sum(col * col))
        if norms[j] == 0.0:
            raise ZeroNormColumn(matrix.names[j])
    unit = matrix.values / norms
    gram = unit.T @ unit
    # BLAS products are symmetric only to rounding; make the invariants exact.
    gram = 0.5 * (gram + gram.T)
    np.fill_diagonal(gram, 1.0)
    np.clip(gram, -1.0, 1.0, out=gram)
    return CorrelationMatrix(gram, kind, matrix.names)


def cosine_similarity(matrix: FeatureMatrix) -> CorrelationMatrix:
    """Gram matrix of unit-normalized columns.

    Raises
    ------
    ZeroNormColumn
        If any column has zero Euclidean norm.
    """
    return _unit_gram(matrix, "cosine")


def pearson_correlation(matrix: FeatureMatrix) -> CorrelationMatrix:
    """Pearson correlation matrix of the columns.

    Equals the cosine similarity of the mean-centered columns, and is
    computed exactly that way.

    Raises
    ------
    ConstantColumn
        If any column is (numerically) constant, which makes its
        correlation with anything undefined.
    """
    bad = constant_columns(matrix)
    if bad:
        raise ConstantColumn(bad[0])
    return _unit_gram(center(matrix), "pearson")


def rank_check(matrix: FeatureMatrix, rel_tol: float = 1e-10) -> RankReport:
    """Numerical rank of the table via its singular spectrum.

    The singular values are computed from the m-by-m triangular factor of a
    thin QR decomposition, which has the same spectrum as the full matrix
    but costs O(n m^2) and never squares the condition number (unlike a
    Gram-matrix eigendecomposition).

    Parameters
    ----------
    matrix : FeatureMatrix
    rel_tol : float
        Singular values at or below ``rel_tol * sigma_max`` count as zero.

    Returns
    -------
    RankReport
        ``full_rank``, ``numerical_rank``, and the singular values in
        nonincreasing order.
    """
    r = np.linalg.qr(matrix.values, mode="r")
    sigma = np.linalg.svd(r, compute_uv=False)
    if sigma[0] > 0.0:
        rank = int(np.count_nonzero(sigma > rel_tol * sigma[0]))
    else:
        rank = 0
    return RankReport(rank == matrix.m, rank, sigma)
