"""Equal-frequency binning against the loop oracle, plus edge cases."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from humor_engine.binning import (
    assign_bins,
    coarsen_cuts,
    equal_frequency_cuts,
    n_bins,
)


def test_cuts_match_oracle_random():
    rng = np.random.default_rng(5)
    for _ in range(200):
        n = int(rng.integers(1, 200))
        column = rng.choice([0.0, 0.25, 0.5, 0.75, 1.0], size=n) + rng.normal(
            0, 0.01, n
        ) * rng.integers(0, 2)
        max_bins = int(rng.integers(1, 12))
        got = equal_frequency_cuts(column, max_bins)
        want = oracles.equal_frequency_cuts(list(map(float, column)), max_bins)
        np.testing.assert_allclose(got, want, rtol=0, atol=0)


def test_assign_matches_oracle():
    rng = np.random.default_rng(6)
    column = rng.uniform(0, 1, 500)
    cuts = equal_frequency_cuts(column, 10)
    bins = assign_bins(column, cuts)
    for value, got in zip(column, bins):
        assert got == oracles.assign_bin(value, list(cuts))


def test_missing_goes_to_reserved_bin():
    cuts = np.array([0.5])
    bins = assign_bins(np.array([0.2, np.nan, 0.9]), cuts)
    assert list(bins) == [0, 2, 1]
    assert n_bins(cuts) == 3


def test_constant_column_has_single_value_bin():
    column = np.full(50, 3.3)
    cuts = equal_frequency_cuts(column, 8)
    assert cuts.size == 0
    assert list(assign_bins(column, cuts)) == [0] * 50


def test_all_missing_column():
    column = np.full(10, np.nan)
    cuts = equal_frequency_cuts(column, 8)
    assert cuts.size == 0
    assert list(assign_bins(column, cuts)) == [1] * 10


def test_cut_boundaries_are_right_inclusive():
    # bin k holds values in (cuts[k-1], cuts[k]]
    cuts = np.array([1.0, 2.0])
    values = np.array([0.5, 1.0, 1.5, 2.0, 2.5])
    assert list(assign_bins(values, cuts)) == [0, 1, 1, 2, 2]


def test_max_bins_one_means_no_cuts():
    assert equal_frequency_cuts(np.arange(10.0), 1).size == 0


def test_bad_max_bins():
    with pytest.raises(ValueError):
        equal_frequency_cuts(np.arange(4.0), 0)


def test_coarsen_is_subset_and_bounded():
    cuts = np.arange(1.0, 40.0)
    coarse = coarsen_cuts(cuts, 8)
    assert coarse.size <= 7
    assert set(coarse).issubset(set(cuts))
    assert list(coarse) == sorted(coarse)
    # fewer cuts than the cap pass through untouched
    np.testing.assert_array_equal(coarsen_cuts(np.array([1.0, 2.0]), 8), [1.0, 2.0])
    assert coarsen_cuts(cuts, 1).size == 0


columns = st.lists(
    st.floats(min_value=-50, max_value=50, allow_nan=False),
    min_size=1,
    max_size=80,
)


@settings(max_examples=120, deadline=None)
@given(column=columns, max_bins=st.integers(min_value=1, max_value=16))
def test_binning_properties(column, max_bins):
    arr = np.asarray(column)
    cuts = equal_frequency_cuts(arr, max_bins)
    # strictly increasing, bounded count, all above the minimum
    assert list(cuts) == sorted(set(cuts))
    assert cuts.size <= max_bins - 1
    if cuts.size:
        assert cuts[0] > arr.min()
    bins = assign_bins(arr, cuts)
    assert bins.min() >= 0
    assert bins.max() <= len(cuts)
    # bin index is monotone in the value
    order = np.argsort(arr, kind="stable")
    assert (np.diff(bins[order]) >= 0).all()
