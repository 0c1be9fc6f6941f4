"""Additive classifier with pairwise interactions.

The prediction logit is

    logit(x) = b0 + sum_j f_j(x_j) + sum_{j<k} f_jk(x_j, x_k)

where every f is a lookup table over quantile bins (plus a reserved
missing bin). Training is bagged cyclic gradient boosting under logistic
loss: per bag, draw a bootstrap sample, hold out an inner validation
slice, boost shallow piecewise-constant updates feature by feature until
inner-validation log-loss stops improving, then freeze the mains and
boost pair tables on the coarsened grid the same way. Final tables are
bag means; per-bin bag min/max are kept as uncertainty envelopes; every
term is centered to mean zero over the training rows with the removed
means folded into the intercept.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .binning import assign_bins, coarsen_cuts, equal_frequency_cuts
from .errors import ConfigError, ModelFormatError, PredictionError, TrainingError
from .matrix import FeatureMatrix
from .specs import ProxyFeatureSpec, feature_name

__all__ = [
    "TrainSettings",
    "TermFunction",
    "TermContribution",
    "Ga2mModel",
    "FitResult",
    "build_bins",
    "train",
    "fit_ga2m",
    "predict_logit",
    "predict_proba",
    "predict_matrix_logits",
    "predict_matrix_probas",
    "term_contributions",
    "pair_term_name",
    "save_model",
    "load_model",
    "model_to_json_bytes",
]

MODEL_VERSION = 1
MODEL_KIND = "ga2m-model"


@dataclass(frozen=True)
class TrainSettings:
    learning_rate: float = 0.01
    early_stop_tolerance: float = 1e-4
    early_stop_patience: int = 50
    bag_count: int = 8
    validation_fraction: float = 0.15
    max_epochs: int = 5000
    max_leaves: int = 3
    pair_grid: int = 32
    pair_budget: int | None = None  # None = all C(d,2) pairs
    max_bins: int = 100
    seed: int = 0

    def __post_init__(self) -> None:
        positive = {
            "learning_rate": self.learning_rate,
            "early_stop_tolerance": self.early_stop_tolerance,
            "early_stop_patience": self.early_stop_patience,
            "bag_count": self.bag_count,
            "max_epochs": self.max_epochs,
            "max_leaves": self.max_leaves,
            "pair_grid": self.pair_grid,
            "max_bins": self.max_bins,
        }
        for name, value in positive.items():
            if not value > 0:
                raise ConfigError(f"settings: {name} must be positive, got {value!r}")
        if not 0.0 < self.validation_fraction < 1.0:
            raise ConfigError(
                "settings: validation_fraction must be in (0, 1), got "
                f"{self.validation_fraction!r}"
            )
        if self.pair_budget is not None and self.pair_budget < 0:
            raise ConfigError(
                f"settings: pair_budget must be >= 0 or null, got {self.pair_budget!r}"
            )
        if self.seed < 0:
            raise ConfigError(f"settings: seed must be >= 0, got {self.seed!r}")

    def to_dict(self) -> dict:
        return {
            "learning_rate": self.learning_rate,
            "early_stop_tolerance": self.early_stop_tolerance,
            "early_stop_patience": self.early_stop_patience,
            "bag_count": self.bag_count,
            "validation_fraction": self.validation_fraction,
            "max_epochs": self.max_epochs,
            "max_leaves": self.max_leaves,
            "pair_grid": self.pair_grid,
            "pair_budget": self.pair_budget,
            "max_bins": self.max_bins,
            "seed": self.seed,
        }

    @staticmethod
    def from_dict(doc: Mapping[str, object]) -> "TrainSettings":
        known = set(TrainSettings().to_dict())
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(
                f"settings: unknown keys {sorted(unknown)}; accepted: {sorted(known)}"
            )
        return TrainSettings(**dict(doc))


@dataclass(eq=False)
class TermFunction:
    """One additive term. Mains: 1-D table over value bins + missing bin.
    Pairs: 2-D table over the coarse grids (last row/column = missing)."""

    features: tuple[str, ...]
    table: np.ndarray
    env_min: np.ndarray
    env_max: np.ndarray

    @property
    def kind(self) -> str:
        return "main" if len(self.features) == 1 else "pair"

    @property
    def name(self) -> str:
        if self.kind == "main":
            return self.features[0]
        return pair_term_name(*self.features)


def pair_term_name(a: str, b: str) -> str:
    return f"{a} x {b}"


@dataclass(frozen=True)
class TermContribution:
    term: str
    value: float
    env_min: float
    env_max: float


@dataclass(eq=False)
class Ga2mModel:
    version: int
    theory: str
    settings: TrainSettings
    feature_names: tuple[str, ...]
    feature_specs: tuple[dict, ...]  # name/channel/calculator/params/hypothesis
    cuts: dict[str, np.ndarray]
    pair_cuts: dict[str, np.ndarray]
    bin_counts: dict[str, np.ndarray]
    intercept: float
    mains: list[TermFunction]
    pairs: list[TermFunction]
    meta: dict = field(default_factory=dict)

    def main_term(self, feature: str) -> TermFunction:
        for term in self.mains:
            if term.features[0] == feature:
                return term
        raise PredictionError(
            f"model has no feature {feature!r}; features: "
            + ", ".join(self.feature_names)
        )

    def hypothesis_for(self, feature: str) -> str:
        for spec in self.feature_specs:
            if spec["name"] == feature:
                return spec.get("hypothesis") or ""
        return ""


@dataclass
class BagTrace:
    train_logloss: list[float]
    val_logloss: list[float]
    pair_train_logloss: list[float]
    pair_val_logloss: list[float]


@dataclass
class FitResult:
    model: Ga2mModel
    traces: list[BagTrace]


# ---------------------------------------------------------------------------
# numerics


def _logit(p: float) -> float:
    return math.log(p / (1.0 - p))


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(z, -500.0, 500.0)))


def _logloss(y: np.ndarray, p: np.ndarray) -> float:
    p = np.clip(p, 1e-15, 1.0 - 1e-15)
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))


# ---------------------------------------------------------------------------
# binning entry point


def build_bins(matrix: FeatureMatrix, max_bins: int = 100) -> dict[str, np.ndarray]:
    """Per-feature equal-frequency cut points from the non-missing values."""
    if matrix.n_rows == 0:
        raise TrainingError("cannot build bins from an empty matrix")
    return {
        name: equal_frequency_cuts(matrix.values[:, j], max_bins)
        for j, name in enumerate(matrix.feature_names)
    }


# ---------------------------------------------------------------------------
# piecewise-constant fitting


def _sq_over(s: np.ndarray, c: np.ndarray) -> np.ndarray:
    """s^2 / c with empty groups scoring 0 (SSE-reduction convention)."""
    out = np.zeros_like(s, dtype=np.float64)
    nz = c > 0
    out[nz] = s[nz] ** 2 / c[nz]
    return out


def _fit_main_leaves(
    sums: np.ndarray, counts: np.ndarray, max_leaves: int
) -> np.ndarray:
    """Per-bin update values: a <= max_leaves segment piecewise-constant
    fit of the residual means over the value bins, plus a dedicated
    missing-bin leaf (last index)."""
    out = np.zeros_like(sums)
    if counts[-1] > 0:
        out[-1] = sums[-1] / counts[-1]
    v = sums.size - 1  # number of value bins
    if v == 0:
        return out
    csum = np.concatenate(([0.0], np.cumsum(sums[:v])))
    ccnt = np.concatenate(([0.0], np.cumsum(counts[:v].astype(np.float64))))

    def best_split(lo: int, hi: int) -> tuple[float, int]:
        """(gain, position) of the best split inside [lo, hi); first
        position wins ties."""
        if hi - lo < 2:
            return 0.0, -1
        t = np.arange(lo + 1, hi)
        s_left = csum[t] - csum[lo]
        c_left = ccnt[t] - ccnt[lo]
        s_right = csum[hi] - csum[t]
        c_right = ccnt[hi] - ccnt[t]
        whole = _sq_over(
            np.asarray([csum[hi] - csum[lo]]), np.asarray([ccnt[hi] - ccnt[lo]])
        )[0]
        gains = _sq_over(s_left, c_left) + _sq_over(s_right, c_right) - whole
        idx = int(np.argmax(gains))
        return float(gains[idx]), lo + 1 + idx

    segments: list[tuple[int, int]] = [(0, v)]
    while len(segments) < max_leaves:
        best_gain = 0.0
        best: tuple[int, int] | None = None
        for seg_idx, (lo, hi) in enumerate(segments):
            gain, pos = best_split(lo, hi)
            if gain > best_gain:
                best_gain = gain
                best = (seg_idx, pos)
        if best is None:
            break
        seg_idx, t = best
        lo, hi = segments[seg_idx]
        segments[seg_idx : seg_idx + 1] = [(lo, t), (t, hi)]
    for lo, hi in segments:
        s = csum[hi] - csum[lo]
        c = ccnt[hi] - ccnt[lo]
        if c > 0:
            out[lo:hi] = s / c
    return out


def _fit_pair_leaves(
    sums: np.ndarray, counts: np.ndarray, max_leaves: int = 4
) -> np.ndarray:
    """2-D analogue of _fit_main_leaves on the coarse grid. Cells where
    either feature is missing (last row / last column) form one shared
    leaf; the value region is split greedily into <= max_leaves axis-
    aligned rectangles."""
    out = np.zeros_like(sums)
    va = sums.shape[0] - 1
    vb = sums.shape[1] - 1
    missing_sum = sums.sum() - sums[:va, :vb].sum()
    missing_cnt = counts.sum() - counts[:va, :vb].sum()
    if missing_cnt > 0:
        fill = missing_sum / missing_cnt
        out[va, :] = fill
        out[:, vb] = fill
    if va == 0 or vb == 0:
        return out
    # 2-D prefix sums over the value region for O(1) rectangle queries
    ps = np.zeros((va + 1, vb + 1))
    pc = np.zeros((va + 1, vb + 1))
    ps[1:, 1:] = np.cumsum(np.cumsum(sums[:va, :vb], axis=0), axis=1)
    pc[1:, 1:] = np.cumsum(np.cumsum(counts[:va, :vb], axis=0), axis=1)

    def rect(p: np.ndarray, r0, r1, c0, c1):
        return p[r1, c1] - p[r0, c1] - p[r1, c0] + p[r0, c0]

    def axis_gains(r0: int, r1: int, c0: int, c1: int, axis: int) -> tuple[float, int]:
        """Best (gain, position) splitting the region along one axis;
        first position wins ties."""
        lo, hi = (r0, r1) if axis == 0 else (c0, c1)
        if hi - lo < 2:
            return 0.0, -1
        t = np.arange(lo + 1, hi)
        if axis == 0:
            s_left = rect(ps, r0, t, c0, c1)
            c_left = rect(pc, r0, t, c0, c1)
        else:
            s_left = rect(ps, r0, r1, c0, t)
            c_left = rect(pc, r0, r1, c0, t)
        s_all = rect(ps, r0, r1, c0, c1)
        c_all = rect(pc, r0, r1, c0, c1)
        whole = _sq_over(np.asarray([s_all]), np.asarray([c_all]))[0]
        gains = (
            _sq_over(s_left, c_left)
            + _sq_over(s_all - s_left, c_all - c_left)
            - whole
        )
        idx = int(np.argmax(gains))
        return float(gains[idx]), lo + 1 + idx

    regions: list[tuple[int, int, int, int]] = [(0, va, 0, vb)]
    while len(regions) < max_leaves:
        best_gain = 0.0
        best: tuple[int, int, int] | None = None
        for idx, (r0, r1, c0, c1) in enumerate(regions):
            for axis in (0, 1):
                gain, pos = axis_gains(r0, r1, c0, c1, axis)
                if gain > best_gain:
                    best_gain = gain
                    best = (idx, axis, pos)
        if best is None:
            break
        idx, axis, t = best
        r0, r1, c0, c1 = regions[idx]
        if axis == 0:
            regions[idx : idx + 1] = [(r0, t, c0, c1), (t, r1, c0, c1)]
        else:
            regions[idx : idx + 1] = [(r0, r1, c0, t), (r0, r1, t, c1)]
    for r0, r1, c0, c1 in regions:
        s = rect(ps, r0, r1, c0, c1)
        c = rect(pc, r0, r1, c0, c1)
        if c > 0:
            out[r0:r1, c0:c1] = s / c
    return out


# ---------------------------------------------------------------------------
# training


def _check_labels(matrix: FeatureMatrix) -> np.ndarray:
    if matrix.n_rows == 0:
        raise TrainingError("cannot train on an empty matrix")
    y = np.empty(matrix.n_rows, dtype=np.float64)
    for i, label in enumerate(matrix.labels):
        if label is None:
            raise TrainingError(
                f"row {i} (id {matrix.ids[i]!r}) is unlabeled; training needs labels"
            )
        y[i] = label
    if y.min() == y.max():
        raise TrainingError("labels are single-class; training needs both classes")
    return y


def _boost_stage(
    tables: list[np.ndarray],
    bin_cols_tr: list[np.ndarray],
    bin_cols_val: list[np.ndarray],
    counts: list[np.ndarray],
    fitter,
    y_tr: np.ndarray,
    y_val: np.ndarray,
    f_tr: np.ndarray,
    f_val: np.ndarray,
    settings: TrainSettings,
    train_curve: list[float],
    val_curve: list[float],
) -> int:
    """Cyclic boosting over one set of terms, early-stopped on validation
    log-loss. Mutates tables and the score vectors in place; returns the
    epoch count."""
    lr = settings.learning_rate
    tol = settings.early_stop_tolerance
    best = math.inf
    stall = 0
    epochs = 0
    n_terms = len(tables)
    while epochs < settings.max_epochs:
        for j in range(n_terms):
            residual = y_tr - _sigmoid(f_tr)
            sums = np.bincount(
                bin_cols_tr[j], weights=residual, minlength=tables[j].size
            )
            update = lr * fitter(
                sums.reshape(tables[j].shape), counts[j], settings.max_leaves
            )
            tables[j] += update
            flat = update.reshape(-1)
            f_tr += flat[bin_cols_tr[j]]
            f_val += flat[bin_cols_val[j]]
        epochs += 1
        train_curve.append(_logloss(y_tr, _sigmoid(f_tr)))
        val_loss = _logloss(y_val, _sigmoid(f_val))
        val_curve.append(val_loss)
        if val_loss < best - tol:
            stall = 0
        else:
            stall += 1
        best = min(best, val_loss)
        if stall >= settings.early_stop_patience:
            break
    return epochs


def _main_fitter(sums: np.ndarray, counts: np.ndarray, max_leaves: int) -> np.ndarray:
    return _fit_main_leaves(sums.reshape(-1), counts, max_leaves)


def _pair_fitter(sums: np.ndarray, counts: np.ndarray, max_leaves: int) -> np.ndarray:
    # pair trees get one extra leaf over mains: 4 rectangles express a
    # full 2x2 interaction pattern, which 3 cannot
    return _fit_pair_leaves(sums, counts, max_leaves=max_leaves + 1)


def _rank_pairs(
    all_pairs: list[tuple[int, int]],
    budget: int,
    fine_bins: np.ndarray,
    coarse_bins: np.ndarray,
    grid_shapes: list[tuple[int, int]],
    mean_main_tables: list[np.ndarray],
    mean_intercept: float,
    y: np.ndarray,
) -> list[tuple[int, int]]:
    """Order candidate pairs by how much squared residual a free-form
    coarse-grid fit would remove, given the bag-averaged mains."""
    logits = np.full(y.size, mean_intercept)
    for j, table in enumerate(mean_main_tables):
        logits += table[fine_bins[:, j]]
    residual = y - _sigmoid(logits)
    const = residual.sum() ** 2 / residual.size
    strengths: list[tuple[float, int]] = []
    for rank_idx, (j, k) in enumerate(all_pairs):
        shape = grid_shapes[rank_idx]
        cells = coarse_bins[:, j] * shape[1] + coarse_bins[:, k]
        sums = np.bincount(cells, weights=residual, minlength=shape[0] * shape[1])
        counts = np.bincount(cells, minlength=shape[0] * shape[1])
        nonzero = counts > 0
        strength = float(np.sum(sums[nonzero] ** 2 / counts[nonzero]) - const)
        strengths.append((-strength, rank_idx))
    strengths.sort()  # descending strength, ties by candidate order
    chosen = sorted(idx for _, idx in strengths[:budget])
    return [all_pairs[idx] for idx in chosen]


def fit_ga2m(
    matrix: FeatureMatrix,
    settings: TrainSettings,
    theory: str = "",
    feature_specs: Sequence[ProxyFeatureSpec] | None = None,
) -> FitResult:
    y = _check_labels(matrix)
    n, d = matrix.values.shape
    names = matrix.feature_names
    cuts = build_bins(matrix, settings.max_bins)
    pair_cuts = {f: coarsen_cuts(cuts[f], settings.pair_grid) for f in names}
    fine_bins = np.column_stack(
        [assign_bins(matrix.values[:, j], cuts[names[j]]) for j in range(d)]
    )
    coarse_bins = np.column_stack(
        [assign_bins(matrix.values[:, j], pair_cuts[names[j]]) for j in range(d)]
    )
    fine_sizes = [len(cuts[f]) + 2 for f in names]
    coarse_sizes = [len(pair_cuts[f]) + 2 for f in names]

    all_pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    budget = settings.pair_budget
    want_ranking = budget is not None and budget < len(all_pairs)

    # ---- stage A: per-bag main boosting
    bag_states = []
    traces: list[BagTrace] = []
    for b in range(settings.bag_count):
        rng = np.random.default_rng(np.random.SeedSequence([settings.seed, b]))
        perm = rng.permutation(n)
        n_val = max(1, int(round(settings.validation_fraction * n)))
        if n_val >= n:
            raise TrainingError(
                f"matrix too small ({n} rows) for validation_fraction "
                f"{settings.validation_fraction}"
            )
        val_idx = perm[:n_val]
        pool = perm[n_val:]
        train_idx = pool[rng.integers(0, pool.size, size=pool.size)]
        y_tr = y[train_idx]
        y_val = y[val_idx]
        # smoothed base rate keeps the initial logit finite even if a
        # bootstrap draw happens to be single-class
        base_rate = (y_tr.sum() + 0.5) / (y_tr.size + 1.0)
        intercept = _logit(base_rate)
        f_tr = np.full(y_tr.size, intercept)
        f_val = np.full(y_val.size, intercept)

        bins_tr = fine_bins[train_idx]
        bins_val = fine_bins[val_idx]
        main_tables = [np.zeros(fine_sizes[j]) for j in range(d)]
        main_counts = [
            np.bincount(bins_tr[:, j], minlength=fine_sizes[j]) for j in range(d)
        ]
        trace = BagTrace([], [], [], [])
        epochs_mains = _boost_stage(
            main_tables,
            [bins_tr[:, j] for j in range(d)],
            [bins_val[:, j] for j in range(d)],
            main_counts,
            _main_fitter,
            y_tr,
            y_val,
            f_tr,
            f_val,
            settings,
            trace.train_logloss,
            trace.val_logloss,
        )
        bag_states.append(
            {
                "train_idx": train_idx,
                "val_idx": val_idx,
                "intercept": intercept,
                "tables": main_tables,
                "f_tr": f_tr,
                "f_val": f_val,
                "epochs_mains": epochs_mains,
            }
        )
        traces.append(trace)

    # ---- pair selection (shared across bags)
    if budget == 0 or not all_pairs:
        selected_pairs: list[tuple[int, int]] = []
    elif want_ranking:
        mean_main_tables = [
            np.mean([state["tables"][j] for state in bag_states], axis=0)
            for j in range(d)
        ]
        mean_intercept = float(
            np.mean([state["intercept"] for state in bag_states])
        )
        grid_shapes = [
            (coarse_sizes[j], coarse_sizes[k]) for j, k in all_pairs
        ]
        selected_pairs = _rank_pairs(
            all_pairs,
            int(budget),
            fine_bins,
            coarse_bins,
            grid_shapes,
            mean_main_tables,
            mean_intercept,
            y,
        )
    else:
        selected_pairs = all_pairs

    # ---- stage B: per-bag pair boosting on residuals (mains frozen)
    for b, state in enumerate(bag_states):
        if not selected_pairs:
            state["pair_tables"] = []
            state["epochs_pairs"] = 0
            continue
        train_idx = state["train_idx"]
        val_idx = state["val_idx"]
        pair_tables = [
            np.zeros((coarse_sizes[j], coarse_sizes[k])) for j, k in selected_pairs
        ]
        cells_tr = []
        cells_val = []
        pair_counts = []
        for j, k in selected_pairs:
            width = coarse_sizes[k]
            ctr = coarse_bins[train_idx, j] * width + coarse_bins[train_idx, k]
            cval = coarse_bins[val_idx, j] * width + coarse_bins[val_idx, k]
            cells_tr.append(ctr)
            cells_val.append(cval)
            pair_counts.append(
                np.bincount(ctr, minlength=coarse_sizes[j] * width).reshape(
                    coarse_sizes[j], width
                )
            )
        state["epochs_pairs"] = _boost_stage(
            pair_tables,
            cells_tr,
            cells_val,
            pair_counts,
            _pair_fitter,
            y[train_idx],
            y[val_idx],
            state["f_tr"],
            state["f_val"],
            settings,
            traces[b].pair_train_logloss,
            traces[b].pair_val_logloss,
        )
        state["pair_tables"] = pair_tables

    # ---- aggregate across bags, then center over the training rows
    intercept = float(np.mean([state["intercept"] for state in bag_states]))
    mains: list[TermFunction] = []
    term_means: dict[str, float] = {}
    for j, fname in enumerate(names):
        stack = np.stack([state["tables"][j] for state in bag_states])
        table = stack.mean(axis=0)
        env_min = stack.min(axis=0)
        env_max = stack.max(axis=0)
        offset = float(table[fine_bins[:, j]].mean())
        table = table - offset
        env_min = env_min - offset
        env_max = env_max - offset
        intercept += offset
        term_means[fname] = offset
        mains.append(TermFunction((fname,), table, env_min, env_max))
    pairs: list[TermFunction] = []
    for p, (j, k) in enumerate(selected_pairs):
        stack = np.stack([state["pair_tables"][p] for state in bag_states])
        table = stack.mean(axis=0)
        env_min = stack.min(axis=0)
        env_max = stack.max(axis=0)
        offset = float(table[coarse_bins[:, j], coarse_bins[:, k]].mean())
        table = table - offset
        env_min = env_min - offset
        env_max = env_max - offset
        intercept += offset
        name = pair_term_name(names[j], names[k])
        term_means[name] = offset
        pairs.append(TermFunction((names[j], names[k]), table, env_min, env_max))

    bin_counts = {
        fname: np.bincount(fine_bins[:, j], minlength=fine_sizes[j])
        for j, fname in enumerate(names)
    }
    specs_out = _resolve_feature_specs(names, feature_specs)
    pos = int(y.sum())
    meta = {
        "train_rows": n,
        "class_counts": {"negative": n - pos, "positive": pos},
        "term_means": term_means,
        "bag_intercepts": [state["intercept"] for state in bag_states],
        "bag_epochs_mains": [state["epochs_mains"] for state in bag_states],
        "bag_epochs_pairs": [state["epochs_pairs"] for state in bag_states],
        "bag_val_logloss": [
            (trace.pair_val_logloss or trace.val_logloss)[-1] for trace in traces
        ],
    }
    model = Ga2mModel(
        version=MODEL_VERSION,
        theory=theory,
        settings=settings,
        feature_names=tuple(names),
        feature_specs=tuple(specs_out),
        cuts=cuts,
        pair_cuts=pair_cuts,
        bin_counts=bin_counts,
        intercept=intercept,
        mains=mains,
        pairs=pairs,
        meta=meta,
    )
    return FitResult(model=model, traces=traces)


def train(
    matrix: FeatureMatrix,
    settings: TrainSettings,
    theory: str = "",
    feature_specs: Sequence[ProxyFeatureSpec] | None = None,
) -> Ga2mModel:
    return fit_ga2m(matrix, settings, theory, feature_specs).model


def _resolve_feature_specs(
    names: Sequence[str], feature_specs: Sequence[ProxyFeatureSpec] | None
) -> list[dict]:
    if feature_specs is not None:
        by_name = {feature_name(s): s for s in feature_specs}
        missing = [n for n in names if n not in by_name]
        if missing:
            raise TrainingError(
                f"feature specs missing for matrix columns {missing[:5]}"
            )
        return [
            {
                "name": n,
                "channel": by_name[n].channel,
                "calculator": by_name[n].calculator,
                "params": dict(by_name[n].params),
                "hypothesis": by_name[n].hypothesis,
            }
            for n in names
        ]
    out = []
    for n in names:
        parsed = _parse_feature_name(n)
        entry = {
            "name": n,
            "channel": None,
            "calculator": None,
            "params": {},
            "hypothesis": "",
        }
        if parsed is not None:
            entry.update(
                channel=parsed.channel,
                calculator=parsed.calculator,
                params=dict(parsed.params),
            )
        out.append(entry)
    return out


def _parse_feature_name(name: str) -> ProxyFeatureSpec | None:
    """Best-effort inverse of feature_name for matrices produced by this
    package; arbitrary column names yield None."""
    parts = name.split("__")
    if len(parts) < 2:
        return None
    channel, calculator = parts[0], parts[1]
    params: dict[str, object] = {}
    for chunk in parts[2:]:
        if "=" not in chunk:
            return None
        key, _, raw = chunk.partition("=")
        if raw in ("true", "false"):
            params[key] = raw == "true"
        else:
            try:
                params[key] = int(raw)
            except ValueError:
                try:
                    params[key] = float(raw)
                except ValueError:
                    params[key] = raw
    try:
        return ProxyFeatureSpec(channel=channel, calculator=calculator, params=params)
    except Exception:
        return None


# ---------------------------------------------------------------------------
# prediction


def _row_bins(
    model: Ga2mModel, row: Mapping[str, float | None]
) -> tuple[dict[str, int], dict[str, int]]:
    unknown = set(row) - set(model.feature_names)
    if unknown:
        raise PredictionError(
            f"row has unknown feature name(s): {sorted(unknown)[:5]}"
        )
    missing = [f for f in model.feature_names if f not in row]
    if missing:
        raise PredictionError(
            f"row lacks model feature(s): {missing[:5]} (pass None for missing values)"
        )
    fine: dict[str, int] = {}
    coarse: dict[str, int] = {}
    for f in model.feature_names:
        raw = row[f]
        value = np.nan if raw is None else float(raw)
        if not (np.isnan(value) or np.isfinite(value)):
            raise PredictionError(f"feature {f!r}: value must be finite or missing")
        col = np.asarray([value])
        fine[f] = int(assign_bins(col, model.cuts[f])[0])
        coarse[f] = int(assign_bins(col, model.pair_cuts[f])[0])
    return fine, coarse


def term_contributions(
    model: Ga2mModel, row: Mapping[str, float | None]
) -> dict[str, TermContribution]:
    """Per-term logit contributions for one row, in model term order
    (mains then pairs). Summing the values with the intercept reproduces
    predict_logit exactly."""
    fine, coarse = _row_bins(model, row)
    out: dict[str, TermContribution] = {}
    for term in model.mains:
        b = fine[term.features[0]]
        out[term.name] = TermContribution(
            term=term.name,
            value=float(term.table[b]),
            env_min=float(term.env_min[b]),
            env_max=float(term.env_max[b]),
        )
    for term in model.pairs:
        ba = coarse[term.features[0]]
        bb = coarse[term.features[1]]
        out[term.name] = TermContribution(
            term=term.name,
            value=float(term.table[ba, bb]),
            env_min=float(term.env_min[ba, bb]),
            env_max=float(term.env_max[ba, bb]),
        )
    return out


def predict_logit(model: Ga2mModel, row: Mapping[str, float | None]) -> float:
    logit = model.intercept
    for contribution in term_contributions(model, row).values():
        logit += contribution.value
    return logit


def predict_proba(model: Ga2mModel, row: Mapping[str, float | None]) -> float:
    return float(_sigmoid(np.asarray([predict_logit(model, row)]))[0])


def _matrix_aligned_columns(model: Ga2mModel, matrix: FeatureMatrix) -> np.ndarray:
    model_set = set(model.feature_names)
    matrix_set = set(matrix.feature_names)
    if model_set != matrix_set:
        missing = sorted(model_set - matrix_set)[:5]
        extra = sorted(matrix_set - model_set)[:5]
        raise PredictionError(
            f"matrix features do not match model (missing {missing}, extra {extra})"
        )
    order = [matrix.feature_names.index(f) for f in model.feature_names]
    return matrix.values[:, order]


def predict_matrix_logits(model: Ga2mModel, matrix: FeatureMatrix) -> np.ndarray:
    """Vectorized prediction; per row it performs the same additions in
    the same term order as predict_logit."""
    values = _matrix_aligned_columns(model, matrix)
    logits = np.full(values.shape[0], model.intercept)
    fine = {
        f: assign_bins(values[:, j], model.cuts[f])
        for j, f in enumerate(model.feature_names)
    }
    coarse = {
        f: assign_bins(values[:, j], model.pair_cuts[f])
        for j, f in enumerate(model.feature_names)
    }
    for term in model.mains:
        logits += term.table[fine[term.features[0]]]
    for term in model.pairs:
        logits += term.table[coarse[term.features[0]], coarse[term.features[1]]]
    return logits


def predict_matrix_probas(model: Ga2mModel, matrix: FeatureMatrix) -> np.ndarray:
    return _sigmoid(predict_matrix_logits(model, matrix))


# ---------------------------------------------------------------------------
# serialization


def _term_to_doc(term: TermFunction) -> dict:
    return {
        "features": list(term.features),
        "table": term.table.tolist(),
        "env_min": term.env_min.tolist(),
        "env_max": term.env_max.tolist(),
    }


def _term_from_doc(doc: Mapping, expect_pair: bool) -> TermFunction:
    features = tuple(doc["features"])
    if expect_pair != (len(features) == 2):
        raise ModelFormatError("term arity does not match its section")
    table = np.asarray(doc["table"], dtype=np.float64)
    env_min = np.asarray(doc["env_min"], dtype=np.float64)
    env_max = np.asarray(doc["env_max"], dtype=np.float64)
    if table.shape != env_min.shape or table.shape != env_max.shape:
        raise ModelFormatError("term table and envelope shapes differ")
    return TermFunction(features, table, env_min, env_max)


def model_to_json_bytes(model: Ga2mModel) -> bytes:
    doc = {
        "kind": MODEL_KIND,
        "version": model.version,
        "theory": model.theory,
        "settings": model.settings.to_dict(),
        "features": [dict(s) for s in model.feature_specs],
        "feature_names": list(model.feature_names),
        "bins": {f: model.cuts[f].tolist() for f in model.feature_names},
        "pair_bins": {f: model.pair_cuts[f].tolist() for f in model.feature_names},
        "bin_counts": {
            f: model.bin_counts[f].astype(int).tolist() for f in model.feature_names
        },
        "intercept": model.intercept,
        "mains": [_term_to_doc(t) for t in model.mains],
        "pairs": [_term_to_doc(t) for t in model.pairs],
        "meta": model.meta,
    }
    text = json.dumps(doc, sort_keys=True, separators=(",", ":"), allow_nan=False)
    return (text + "\n").encode("utf-8")


def save_model(model: Ga2mModel, path: str) -> None:
    with open(path, "wb") as fh:
        fh.write(model_to_json_bytes(model))


def load_model(path: str) -> Ga2mModel:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except ValueError as exc:
            raise ModelFormatError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(doc, dict) or doc.get("kind") != MODEL_KIND:
        raise ModelFormatError(f"{path}: not a {MODEL_KIND} file")
    if doc.get("version") != MODEL_VERSION:
        raise ModelFormatError(
            f"{path}: unsupported model version {doc.get('version')!r}; "
            f"this build reads version {MODEL_VERSION}"
        )
    try:
        settings = TrainSettings.from_dict(doc["settings"])
        feature_names = tuple(doc["feature_names"])
        cuts = {
            f: np.asarray(doc["bins"][f], dtype=np.float64) for f in feature_names
        }
        pair_cuts = {
            f: np.asarray(doc["pair_bins"][f], dtype=np.float64)
            for f in feature_names
        }
        bin_counts = {
            f: np.asarray(doc["bin_counts"][f], dtype=np.int64)
            for f in feature_names
        }
        mains = [_term_from_doc(t, expect_pair=False) for t in doc["mains"]]
        pairs = [_term_from_doc(t, expect_pair=True) for t in doc["pairs"]]
        model = Ga2mModel(
            version=int(doc["version"]),
            theory=doc["theory"],
            settings=settings,
            feature_names=feature_names,
            feature_specs=tuple(doc["features"]),
            cuts=cuts,
            pair_cuts=pair_cuts,
            bin_counts=bin_counts,
            intercept=float(doc["intercept"]),
            mains=mains,
            pairs=pairs,
            meta=doc["meta"],
        )
    except KeyError as exc:
        raise ModelFormatError(f"{path}: missing model field {exc}") from exc
    if len(model.mains) != len(feature_names):
        raise ModelFormatError(f"{path}: expected one main term per feature")
    return model
