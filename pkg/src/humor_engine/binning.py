"""Equal-frequency binning for additive-model training.

Each feature gets up to `max_bins` value bins from the training column's
quantiles, plus one reserved bin for missing values (always the last
index). Cut points are right-inclusive boundaries: value bin k holds
x with cuts[k-1] < x <= cuts[k] ... concretely, bin(x) =
searchsorted(cuts, x, side='right'). A constant or all-missing column
yields zero cuts, i.e. a single value bin.
"""

from __future__ import annotations

import numpy as np

__all__ = ["equal_frequency_cuts", "assign_bins", "coarsen_cuts", "n_bins"]


def equal_frequency_cuts(column: np.ndarray, max_bins: int) -> np.ndarray:
    """Quantile cut points for one feature column (NaN = missing ignored).
    Returns an increasing array of at most max_bins - 1 cuts."""
    if max_bins < 1:
        raise ValueError("max_bins must be >= 1")
    present = np.sort(column[~np.isnan(column)])
    n = present.size
    if n == 0:
        return np.empty(0, dtype=np.float64)
    cuts: list[float] = []
    lowest = present[0]
    previous = lowest
    for k in range(1, max_bins):
        idx = (k * n) // max_bins
        candidate = present[idx]
        # a cut must strictly separate: keep only strictly increasing cuts
        # strictly above the column minimum so no value bin is empty on the
        # training data
        if candidate > previous and candidate > lowest:
            cuts.append(float(candidate))
            previous = candidate
    return np.asarray(cuts, dtype=np.float64)


def n_bins(cuts: np.ndarray) -> int:
    """Total bins including the reserved missing bin (last index)."""
    return len(cuts) + 2


def assign_bins(column: np.ndarray, cuts: np.ndarray) -> np.ndarray:
    """Map values to bin indices. Value bins are 0..len(cuts); missing
    (NaN) maps to len(cuts) + 1."""
    column = np.asarray(column, dtype=np.float64)
    missing = np.isnan(column)
    out = np.searchsorted(cuts, np.where(missing, 0.0, column), side="right")
    out[missing] = len(cuts) + 1
    return out.astype(np.intp)


def coarsen_cuts(cuts: np.ndarray, max_bins: int) -> np.ndarray:
    """Subsample cut points so at most max_bins value bins remain,
    keeping the quantile spirit (even strides over existing cuts)."""
    if max_bins < 1:
        raise ValueError("max_bins must be >= 1")
    keep = max_bins - 1
    if len(cuts) <= keep:
        return np.asarray(cuts, dtype=np.float64)
    if keep == 0:
        return np.empty(0, dtype=np.float64)
    positions = np.linspace(0, len(cuts) - 1, keep)
    idx = np.unique(np.round(positions).astype(np.intp))
    return np.asarray(cuts, dtype=np.float64)[idx]
