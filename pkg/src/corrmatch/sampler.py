"""Baseline synthetic-data generation from per-column empirical distributions.

Each output column is drawn from the matching input column alone, so the
marginal distributions survive while every inter-column correlation is
destroyed.  That makes the output a natural "before" dataset for
correlation enforcement.

Reproducibility contract (fixed forever): column ``j`` is generated by an
independent ``numpy.random.PCG64`` stream whose seed is element ``j`` of
the splitmix64 sequence started at the user seed, i.e.
``splitmix64_mix(seed + (j + 1) * 0x9E3779B97F4A7C15 mod 2**64)``.
Columns can therefore be generated in any order, or in parallel, with
bit-identical results.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfig, InvalidCorrelation, InvalidInput
from .stats import CorrelationMatrix, FeatureMatrix

__all__ = ["SamplerConfig", "naive_sample", "make_test_dataset", "column_seed"]

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _splitmix64_mix(x: int) -> int:
    x &= _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def column_seed(seed: int, column_index: int) -> int:
    """Derived 64-bit seed for one column's substream (see module docstring)."""
    return _splitmix64_mix(seed + (column_index + 1) * _GOLDEN)


def _column_rng(seed: int, column_index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(column_seed(seed, column_index)))


@dataclass(eq=False)
class SamplerConfig:
    """How to resample: ``bootstrap`` draws with replacement, ``permutation``
    shuffles each column (exact marginal preservation, requires the output
    row count to equal the input's)."""

    rows: int
    seed: int = 0
    mode: str = "bootstrap"

    def __post_init__(self):
        if self.mode not in ("bootstrap", "permutation"):
            raise InvalidConfig(f"unknown sampler mode {self.mode!r}")
        if int(self.rows) != self.rows or self.rows < 2:
            raise InvalidConfig(f"need at least 2 output rows, got {self.rows}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise InvalidConfig("seed must be an unsigned 64-bit integer")
        self.rows = int(self.rows)
        self.seed = int(self.seed)


def naive_sample(original: FeatureMatrix, config: SamplerConfig) -> FeatureMatrix:
    """Resample every column independently from its own empirical distribution.

    Bootstrap mode draws ``config.rows`` values with replacement per column;
    permutation mode returns an independent uniform shuffle of each column
    (so per-column sorted output equals sorted input exactly).  Output is a
    deterministic function of (seed, mode, rows).
    """
    n = original.n
    if config.mode == "permutation" and config.rows != n:
        raise InvalidConfig(
            f"permutation mode needs rows == n ({n}), got rows={config.rows}"
        )
    out = np.empty((config.rows, original.m), order="F")
    for j in range(original.m):
        rng = _column_rng(config.seed, j)
        col = original.values[:, j]
        if config.mode == "bootstrap":
            out[:, j] = col[rng.integers(0, n, size=config.rows)]
        else:
            out[:, j] = rng.permutation(col)
    out.flags.writeable = False
    return FeatureMatrix(out, original.names)


def make_test_dataset(
    n: int,
    m: int,
    corr_target,
    seed: int = 0,
    names=None,
) -> FeatureMatrix:
    """Gaussian table whose population correlation matrix is ``corr_target``.

    White noise is colored through the Cholesky factor of the target, so the
    empirical correlations converge to the target at the usual 1/sqrt(n)
    rate.  Useful as a reproducible stand-in for real data in tests and
    demos.

    Parameters
    ----------
    n, m : int
        Shape of the output; needs n > m.
    corr_target : CorrelationMatrix or (m, m) array
        Symmetric with unit diagonal and strictly positive definite.
    seed : int
        PCG64 seed for the noise.
    names : sequence of str, optional
        Column names; defaults to ``f1``..``fm``.

    Raises
    ------
    InvalidCorrelation
        If the target is not symmetric with unit diagonal, or not strictly
        positive definite (e.g. a duplicated feature with off-diagonal 1).
    """
    if m < 1 or n <= m:
        raise InvalidInput(f"need n > m >= 1, got n={n}, m={m}")
    target = corr_target.entries if isinstance(corr_target, CorrelationMatrix) else corr_target
    target = np.asarray(target, dtype=np.float64)
    if target.shape != (m, m):
        raise InvalidCorrelation(f"correlation target must be {m}-by-{m}, got {target.shape}")
    if not np.isfinite(target).all():
        raise InvalidCorrelation("correlation target contains non-finite entries")
    if np.abs(target - target.T).max() > 1e-12:
        raise InvalidCorrelation("correlation target is not symmetric")
    if np.abs(np.diag(target) - 1.0).max() > 1e-12:
        raise InvalidCorrelation("correlation target diagonal is not 1")
    try:
        chol = np.linalg.cholesky(target)
    except np.linalg.LinAlgError:
        raise InvalidCorrelation(
            "correlation target is not strictly positive definite"
        ) from None
    if names is None:
        names = tuple(f"f{j + 1}" for j in range(m))
    rng = np.random.Generator(np.random.PCG64(seed))
    values = rng.standard_normal((n, m)) @ chol.T
    return FeatureMatrix(values, names)
