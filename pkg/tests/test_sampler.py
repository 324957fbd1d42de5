"""Sampler tests: marginal preservation, decorrelation, reproducibility."""

import math

import numpy as np
import pytest

from corrmatch import (
    FeatureMatrix,
    InvalidConfig,
    InvalidCorrelation,
    InvalidInput,
    SamplerConfig,
    make_test_dataset,
    naive_sample,
    pearson_correlation,
    ks_distance,
)
from corrmatch.sampler import column_seed

from helpers import names_for


class TestSamplerConfig:
    def test_rejects_unknown_mode(self):
        with pytest.raises(InvalidConfig):
            SamplerConfig(rows=10, mode="latin")

    def test_rejects_tiny_row_count(self):
        with pytest.raises(InvalidConfig):
            SamplerConfig(rows=1)

    def test_rejects_out_of_range_seed(self):
        with pytest.raises(InvalidConfig):
            SamplerConfig(rows=10, seed=-1)
        with pytest.raises(InvalidConfig):
            SamplerConfig(rows=10, seed=2**64)


class TestNaiveSample:
    def test_constant_column_stays_constant(self):
        fm = FeatureMatrix(
            np.column_stack([np.full(20, 7.5), np.arange(20.0)]), ["k", "a"]
        )
        for mode in ("bootstrap", "permutation"):
            out = naive_sample(fm, SamplerConfig(rows=20, seed=1, mode=mode))
            assert np.all(out.values[:, 0] == 7.5)

    def test_permutation_preserves_multiset_exactly(self):
        rng = np.random.default_rng(3)
        fm = FeatureMatrix(rng.normal(size=(100, 3)), names_for(3))
        out = naive_sample(fm, SamplerConfig(rows=100, seed=5, mode="permutation"))
        for j in range(3):
            assert np.array_equal(
                np.sort(out.values[:, j]), np.sort(fm.values[:, j])
            )

    def test_permutation_needs_matching_rows(self):
        rng = np.random.default_rng(4)
        fm = FeatureMatrix(rng.normal(size=(50, 2)), ["a", "b"])
        with pytest.raises(InvalidConfig):
            naive_sample(fm, SamplerConfig(rows=49, seed=0, mode="permutation"))

    def test_bootstrap_draws_from_input_values(self):
        rng = np.random.default_rng(6)
        fm = FeatureMatrix(rng.normal(size=(30, 2)), ["a", "b"])
        out = naive_sample(fm, SamplerConfig(rows=200, seed=2, mode="bootstrap"))
        for j in range(2):
            assert np.isin(out.values[:, j], fm.values[:, j]).all()

    def test_bootstrap_decorrelates_independent_columns(self):
        rows = 100_000
        rng = np.random.default_rng(123)
        fm = FeatureMatrix(rng.standard_normal((rows, 2)), ["a", "b"])
        out = naive_sample(fm, SamplerConfig(rows=rows, seed=9))
        corr = pearson_correlation(out).entries
        assert abs(corr[0, 1]) < min(0.02, 5.0 / math.sqrt(rows))

    def test_reproducible_bit_for_bit(self):
        rng = np.random.default_rng(8)
        fm = FeatureMatrix(rng.normal(size=(500, 4)), names_for(4))
        config = SamplerConfig(rows=700, seed=321, mode="bootstrap")
        first = naive_sample(fm, config)
        second = naive_sample(fm, config)
        assert first.values.tobytes() == second.values.tobytes()

    def test_columns_use_documented_independent_substreams(self):
        # regenerating one column from its documented seed must reproduce the
        # full-sample column, so column order and parallelism cannot matter
        rng = np.random.default_rng(10)
        fm = FeatureMatrix(rng.normal(size=(60, 3)), names_for(3))
        out = naive_sample(fm, SamplerConfig(rows=90, seed=77))
        for j in range(3):
            stream = np.random.Generator(np.random.PCG64(column_seed(77, j)))
            expected = fm.values[:, j][stream.integers(0, 60, size=90)]
            assert np.array_equal(out.values[:, j], expected)

    def test_bootstrap_ks_within_dkw_style_bound(self):
        rows = 1000
        rng = np.random.default_rng(55)
        fm = FeatureMatrix(rng.standard_normal((rows, 2)), ["a", "b"])
        bound = 2.0 * math.sqrt(math.log(2.0 / 0.001) / (2.0 * rows))
        violations = 0
        for seed in range(100):
            out = naive_sample(fm, SamplerConfig(rows=rows, seed=seed))
            for j in range(2):
                if ks_distance(out.values[:, j], fm.values[:, j]) > bound:
                    violations += 1
        assert violations == 0


class TestMakeTestDataset:
    def test_identity_target_leaves_columns_uncorrelated(self):
        fm = make_test_dataset(100_000, 3, np.eye(3), seed=1)
        corr = pearson_correlation(fm).entries
        off = corr[~np.eye(3, dtype=bool)]
        assert np.abs(off).max() < 0.02

    def test_structured_target_is_approached(self):
        target = np.array([[1.0, 0.7, 0.3], [0.7, 1.0, 0.5], [0.3, 0.5, 1.0]])
        n = 100_000
        fm = make_test_dataset(n, 3, target, seed=2)
        corr = pearson_correlation(fm).entries
        assert np.abs(corr - target).max() <= 5.0 / math.sqrt(n)

    def test_degenerate_target_rejected(self):
        duplicated = np.array([[1.0, 1.0], [1.0, 1.0]])
        with pytest.raises(InvalidCorrelation):
            make_test_dataset(100, 2, duplicated, seed=0)

    def test_asymmetric_target_rejected(self):
        with pytest.raises(InvalidCorrelation):
            make_test_dataset(100, 2, np.array([[1.0, 0.2], [0.3, 1.0]]), seed=0)

    def test_bad_diagonal_rejected(self):
        with pytest.raises(InvalidCorrelation):
            make_test_dataset(100, 2, np.array([[1.0, 0.2], [0.2, 0.9]]), seed=0)

    def test_single_column(self):
        fm = make_test_dataset(50, 1, np.eye(1), seed=3)
        assert fm.m == 1
        assert np.array_equal(pearson_correlation(fm).entries, [[1.0]])

    def test_needs_more_rows_than_columns(self):
        with pytest.raises(InvalidInput):
            make_test_dataset(3, 3, np.eye(3), seed=0)

    def test_reproducible_and_named(self):
        a = make_test_dataset(100, 2, np.eye(2), seed=9, names=["x", "y"])
        b = make_test_dataset(100, 2, np.eye(2), seed=9, names=["x", "y"])
        assert a.names == ("x", "y")
        assert a.values.tobytes() == b.values.tobytes()
