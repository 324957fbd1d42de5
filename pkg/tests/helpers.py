"""Shared instance generators and independent oracles for the test suite.

The oracles here deliberately avoid the library's own code paths: sums go
through ``math.fsum`` (exact extended-precision accumulation), and the
enforcement oracle forms the full n-by-n outer product and runs a dense
SVD, which the library never does.
"""

import math

import numpy as np

from corrmatch import FeatureMatrix, StatTargets
from corrmatch.stats import rank_check


def names_for(m):
    return tuple(f"f{j + 1}" for j in range(m))


def random_instance(rng, n=None, m=None):
    """A full-rank reference, a same-shape synthetic table, and valid targets."""
    if n is None:
        n = int(rng.integers(10, 201))
    if m is None:
        m = int(rng.integers(2, 9))
    while True:
        mix = rng.standard_normal((m, m))
        original = rng.standard_normal((n, m)) @ mix + rng.normal(0.0, 3.0, size=m)
        ref = FeatureMatrix(original, names_for(m))
        if rank_check(ref).full_rank:
            break
    synthetic = rng.standard_normal((n, m)) * rng.uniform(0.5, 2.0, size=m)
    synthetic += rng.normal(0.0, 3.0, size=m)
    targets = StatTargets(
        rng.uniform(-5.0, 5.0, size=m), rng.uniform(0.1, 4.0, size=m)
    )
    return ref, FeatureMatrix(synthetic, names_for(m)), targets


def ones_fixing_orthogonal(n, rng, reflections=3):
    """Random orthogonal n-by-n matrix with Q @ 1 = 1 (Householder products
    in directions orthogonal to the all-ones vector)."""
    q = np.eye(n)
    axis = np.ones(n) / math.sqrt(n)
    for _ in range(reflections):
        v = rng.standard_normal(n)
        v -= (v @ axis) * axis
        v /= np.linalg.norm(v)
        q -= 2.0 * np.outer(q @ v, v)
    return q


def fsum_mean(column):
    return math.fsum(column) / len(column)


def fsum_variance(column):
    mean = fsum_mean(column)
    return math.fsum((x - mean) ** 2 for x in column) / len(column)


def fsum_dot(a, b):
    return math.fsum(x * y for x, y in zip(a, b))


def dense_enforce_oracle(original, synthetic, means, variances, rel_tol=1e-12):
    """Independent evaluation of the enforcement formula.

    Centers with an explicit projection matrix, forms the n-by-n outer
    product of the centered operands, runs a full dense SVD, masks the
    zero singular values, and assembles the result.  Cost O(n^3); for
    small test instances only.
    """
    original = np.asarray(original, dtype=np.float64)
    synthetic = np.asarray(synthetic, dtype=np.float64)
    n, m = original.shape
    projector = np.eye(n) - np.ones((n, n)) / n
    centered_original = projector @ original
    centered_synthetic = projector @ synthetic
    norms = np.linalg.norm(centered_original, axis=0)
    scaled = centered_original * (np.sqrt(np.asarray(variances)) * math.sqrt(n) / norms)
    product = centered_synthetic @ scaled.T
    u, sigma, vt = np.linalg.svd(product)
    mask = (sigma > rel_tol * sigma[0]).astype(float) if sigma[0] > 0 else np.zeros_like(sigma)
    return u @ (mask[:, None] * (vt @ scaled)) + np.asarray(means)
