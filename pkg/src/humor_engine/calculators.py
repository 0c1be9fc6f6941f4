"""Time-series feature calculators.

Each calculator is a pure function from a finite real series (length >= 1)
plus parameters to a scalar, or None when the quantity is undefined for
that input (series too short, zero variance, ...). Calculators never raise
on valid series and never return a non-finite number.

Conventions:
  - indices are 0-based,
  - standard deviation is the population form (divide by n) everywhere,
    except inside the adjusted skewness formula which carries its own
    bias correction,
  - wavelet peak counting uses the Ricker kernel with standard ridge-line
    linking across widths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import CalculatorError

__all__ = [
    "CATALOG",
    "calculator_names",
    "normalize_params",
    "evaluate_calculator",
    "count_cwt_peaks",
]

Series = Sequence[float]


def _as_array(x: Series) -> np.ndarray:
    return np.asarray(x, dtype=np.float64)


def _std(x: np.ndarray) -> float:
    return float(np.std(x))


# ---------------------------------------------------------------------------
# the calculators


def abs_energy(x: Series) -> float | None:
    a = _as_array(x)
    return float(np.dot(a, a))


def mean_abs_change(x: Series) -> float | None:
    a = _as_array(x)
    if a.size < 2:
        return None
    return float(np.mean(np.abs(np.diff(a))))


def max_change(x: Series) -> float | None:
    a = _as_array(x)
    if a.size < 2:
        return None
    return float(np.max(np.abs(np.diff(a))))


def max_change_timing(x: Series) -> float | None:
    a = _as_array(x)
    if a.size < 2:
        return None
    deltas = np.abs(np.diff(a))
    return float(int(np.argmax(deltas)) / (a.size - 1))


def cid_ce(x: Series, normalize: bool = False) -> float | None:
    a = _as_array(x)
    if a.size < 2:
        return None
    if normalize:
        s = _std(a)
        if s == 0.0:
            return None
        a = (a - np.mean(a)) / s
    d = np.diff(a)
    return float(np.sqrt(np.dot(d, d)))


def _ols(y: np.ndarray) -> tuple[float, float, float]:
    """OLS of y against its 0-based index. Returns (slope, intercept, sxx)."""
    n = y.size
    t = np.arange(n, dtype=np.float64)
    t_mean = (n - 1) / 2.0
    y_mean = float(np.mean(y))
    dt = t - t_mean
    sxx = float(np.dot(dt, dt))
    slope = float(np.dot(dt, y - y_mean)) / sxx
    return slope, y_mean - slope * t_mean, sxx


def linear_fit(x: Series, attr: str = "slope") -> float | None:
    a = _as_array(x)
    if attr == "slope":
        if a.size < 2:
            return None
        slope, _, _ = _ols(a)
        return float(slope)
    # attr == "stderr": standard error of the slope estimate
    if a.size < 3:
        return None
    n = a.size
    slope, intercept, sxx = _ols(a)
    resid = a - (intercept + slope * np.arange(n, dtype=np.float64))
    sse = float(np.dot(resid, resid))
    return float(np.sqrt(sse / (n - 2) / sxx))


def agg_linear_trend(
    x: Series, chunk_len: int = 5, agg: str = "mean", attr: str = "slope"
) -> float | None:
    a = _as_array(x)
    n_chunks = a.size // chunk_len
    if n_chunks < 2:
        return None
    trimmed = a[: n_chunks * chunk_len].reshape(n_chunks, chunk_len)
    aggregated = np.mean(trimmed, axis=1)
    return linear_fit(aggregated, attr=attr)


def skewness(x: Series) -> float | None:
    a = _as_array(x)
    n = a.size
    if n < 3:
        return None
    s = _std(a)
    if s == 0.0:
        return None
    # standardize before cubing so tiny variances cannot underflow s**3
    z = (a - np.mean(a)) / s
    g1 = float(np.mean(z**3))
    return float(g1 * math.sqrt(n * (n - 1)) / (n - 2))


def symmetry_looking(x: Series, r: float = 0.25) -> float | None:
    a = _as_array(x)
    spread = float(np.max(a) - np.min(a))
    if spread == 0.0:
        return 1.0
    return float(abs(float(np.mean(a)) - float(np.median(a))) < r * spread)


def large_std(x: Series, r: float = 0.25) -> float | None:
    a = _as_array(x)
    spread = float(np.max(a) - np.min(a))
    return float(_std(a) > r * spread)


def crossings_ratio(x: Series, m: float = 0.5) -> float | None:
    a = _as_array(x)
    if a.size < 2:
        return None
    above = a >= m  # zero distance counts as the positive side
    return float(np.count_nonzero(above[1:] != above[:-1]) / (a.size - 1))


def peaks_ratio(x: Series, support: int = 3) -> float | None:
    a = _as_array(x)
    n = a.size
    if n < 2 * support + 1:
        return None
    count = 0
    for i in range(support, n - support):
        window_left = a[i - support : i]
        window_right = a[i + 1 : i + support + 1]
        if np.all(a[i] > window_left) and np.all(a[i] > window_right):
            count += 1
    return float(count / n)


def cwt_peaks_ratio(x: Series, max_width: int = 5) -> float | None:
    a = _as_array(x)
    if float(np.max(a)) == float(np.min(a)):
        # a flat line has no peaks; the raw ridge-line procedure can emit
        # boundary artifacts on exactly constant input, so guard it here
        return 0.0
    widths = np.arange(1, max_width + 1, dtype=np.float64)
    return float(count_cwt_peaks(a, widths) / a.size)


def beyond_sigma_ratio(x: Series, r: float = 2.0) -> float | None:
    a = _as_array(x)
    s = _std(a)
    if s == 0.0:
        return 0.0
    return float(np.count_nonzero(np.abs(a - np.mean(a)) > r * s) / a.size)


def energy_ratio_chunks(
    x: Series, num_segments: int = 4, focus: int = 0
) -> float | None:
    a = _as_array(x)
    total = float(np.dot(a, a))
    if total == 0.0:
        return None
    # near-equal consecutive segments; the first (n mod k) segments get one
    # extra element
    n = a.size
    base, rem = divmod(n, num_segments)
    start = focus * base + min(focus, rem)
    stop = start + base + (1 if focus < rem else 0)
    seg = a[start:stop]
    return float(np.dot(seg, seg) / total)


def index_mass_quantile(x: Series, q: float = 0.5) -> float | None:
    a = np.abs(_as_array(x))
    cum = np.cumsum(a)
    total = float(cum[-1])  # running total, same accumulation order as cum
    if total == 0.0:
        return None
    mass = cum / total
    idx = int(np.searchsorted(mass, q, side="left"))
    # cumulative mass can fall a hair short of q at the last index due to
    # rounding; the quantile is reached at the end by construction
    idx = min(idx, a.size - 1)
    return float((idx + 1) / a.size)


def first_location_of_maximum(x: Series) -> float | None:
    a = _as_array(x)
    return float(int(np.argmax(a)) / a.size)


def first_location_of_minimum(x: Series) -> float | None:
    a = _as_array(x)
    return float(int(np.argmin(a)) / a.size)


def mean_second_derivative_central(x: Series) -> float | None:
    a = _as_array(x)
    if a.size < 3:
        return None
    return float(np.mean((a[2:] - 2.0 * a[1:-1] + a[:-2]) / 2.0))


# ---------------------------------------------------------------------------
# Ricker-wavelet peak counting
#
# Continuous wavelet transform at each width, strict relative maxima per
# row, ridge lines linked across widths (largest width first, tolerance
# width/4 columns, bounded row gaps), then filtered by ridge length and
# signal-to-noise at the smallest width.


def _ricker_kernel(points: int, a: float) -> np.ndarray:
    amp = 2.0 / (math.sqrt(3.0 * a) * math.pi**0.25)
    grid = np.arange(points, dtype=np.float64) - (points - 1.0) / 2.0
    gsq = grid**2
    asq = a * a
    return amp * (1.0 - gsq / asq) * np.exp(-gsq / (2.0 * asq))


def _cwt_matrix(x: np.ndarray, widths: np.ndarray) -> np.ndarray:
    n = x.size
    out = np.empty((len(widths), n), dtype=np.float64)
    for row, w in enumerate(widths):
        m = int(min(10 * w, n))
        out[row] = np.convolve(x, _ricker_kernel(m, w), mode="same")
    return out


def _relative_maxima(mat: np.ndarray) -> list[np.ndarray]:
    """Per row: columns that strictly exceed both neighbors (boundary
    columns never qualify)."""
    hits: list[np.ndarray] = []
    for row in mat:
        if row.size < 3:
            hits.append(np.empty(0, dtype=np.intp))
            continue
        inner = (row[1:-1] > row[:-2]) & (row[1:-1] > row[2:])
        hits.append(np.flatnonzero(inner) + 1)
    return hits


def _link_ridge_lines(
    mat: np.ndarray, max_distances: np.ndarray, gap_thresh: float
) -> list[tuple[np.ndarray, np.ndarray]]:
    maxima = _relative_maxima(mat)
    if not maxima:
        return []
    # each open line: [rows, cols, gap]; start from the largest width
    start_row = mat.shape[0] - 1
    lines = [[[start_row], [col], 0] for col in maxima[start_row]]
    final_lines: list[list[list[int]]] = []
    for row in range(start_row - 1, -1, -1):
        this_max_cols = maxima[row]
        for line in lines:
            line[2] += 1
        # snapshot of the column heads before any line is extended this row
        prev_ridge_cols = np.array([line[1][-1] for line in lines])
        for col in this_max_cols:
            if prev_ridge_cols.size:
                diffs = np.abs(col - prev_ridge_cols)
                closest = int(np.argmin(diffs))
            else:
                diffs = None
                closest = -1
            if diffs is not None and diffs[closest] <= max_distances[row]:
                line = lines[closest]
                line[1].append(int(col))
                line[0].append(row)
                line[2] = 0
            else:
                lines.append([[row], [int(col)], 0])
        keep = []
        for line in lines:
            if line[2] > gap_thresh:
                final_lines.append(line)
            else:
                keep.append(line)
        lines = keep
    out = []
    for line in lines + final_lines:
        sortargs = np.array(np.argsort(line[0]))
        rows = np.empty_like(sortargs)
        cols = np.empty_like(sortargs)
        # scatter assignment (the inverse permutation), matching the
        # reference procedure so downstream indexing agrees bit for bit
        rows[sortargs] = line[0]
        cols[sortargs] = line[1]
        out.append((rows, cols))
    return out


def _noise_floor(row_one: np.ndarray, window_size: int, noise_perc: float) -> np.ndarray:
    n = row_one.size
    hf_window, odd = divmod(window_size, 2)
    noises = np.empty(n, dtype=np.float64)
    # interior indices all see a full-length window, so one vectorized
    # percentile call covers them; only the clipped edge windows need a loop
    first_full = hf_window
    last_full = n - hf_window - odd
    if last_full >= first_full and window_size <= n:
        windows = np.lib.stride_tricks.sliding_window_view(row_one, window_size)
        noises[first_full : last_full + 1] = np.percentile(
            windows, noise_perc, axis=1
        )
        edges = list(range(0, first_full)) + list(range(last_full + 1, n))
    else:
        edges = list(range(n))
    for ind in edges:
        lo = max(ind - hf_window, 0)
        hi = min(ind + hf_window + odd, n)
        noises[ind] = np.percentile(row_one[lo:hi], noise_perc)
    return noises


def count_cwt_peaks(
    x: np.ndarray,
    widths: np.ndarray,
    min_snr: float = 1.0,
    noise_perc: float = 10.0,
) -> int:
    """Number of ridge lines that survive length and SNR filtering."""
    x = np.asarray(x, dtype=np.float64)
    widths = np.asarray(widths, dtype=np.float64)
    gap_thresh = math.ceil(widths[0])
    max_distances = widths / 4.0
    mat = _cwt_matrix(x, widths)
    ridge_lines = _link_ridge_lines(mat, max_distances, gap_thresh)
    min_length = math.ceil(mat.shape[0] / 4.0)
    window_size = math.ceil(x.size / 20.0)
    noises = _noise_floor(mat[0], int(window_size), noise_perc)
    count = 0
    for rows, cols in ridge_lines:
        if rows.size < min_length:
            continue
        with np.errstate(divide="ignore", invalid="ignore"):
            snr = abs(mat[rows[0], cols[0]] / noises[cols[0]])
        if snr >= min_snr:
            count += 1
    return count


# ---------------------------------------------------------------------------
# the catalog: names, parameter schemas, dispatch


@dataclass(frozen=True)
class ParamSpec:
    kind: str  # "int" | "float" | "bool" | "str"
    default: object
    choices: tuple[object, ...] | None = None
    check: Callable[[object], bool] | None = None
    domain: str = ""


@dataclass(frozen=True)
class CalculatorDef:
    fn: Callable[..., float | None]
    params: Mapping[str, ParamSpec]


CATALOG: dict[str, CalculatorDef] = {
    "abs_energy": CalculatorDef(abs_energy, {}),
    "mean_abs_change": CalculatorDef(mean_abs_change, {}),
    "max_change": CalculatorDef(max_change, {}),
    "max_change_timing": CalculatorDef(max_change_timing, {}),
    "cid_ce": CalculatorDef(
        cid_ce, {"normalize": ParamSpec("bool", False)}
    ),
    "linear_fit": CalculatorDef(
        linear_fit,
        {"attr": ParamSpec("str", "slope", choices=("slope", "stderr"))},
    ),
    "agg_linear_trend": CalculatorDef(
        agg_linear_trend,
        {
            "chunk_len": ParamSpec(
                "int", 5, check=lambda v: v >= 1, domain="chunk_len >= 1"
            ),
            "agg": ParamSpec("str", "mean", choices=("mean",)),
            "attr": ParamSpec("str", "slope", choices=("slope", "stderr")),
        },
    ),
    "skewness": CalculatorDef(skewness, {}),
    "symmetry_looking": CalculatorDef(
        symmetry_looking,
        {"r": ParamSpec("float", 0.25, check=lambda v: v > 0, domain="r > 0")},
    ),
    "large_std": CalculatorDef(
        large_std,
        {"r": ParamSpec("float", 0.25, check=lambda v: v > 0, domain="r > 0")},
    ),
    "crossings_ratio": CalculatorDef(
        crossings_ratio, {"m": ParamSpec("float", 0.5)}
    ),
    "peaks_ratio": CalculatorDef(
        peaks_ratio,
        {
            "support": ParamSpec(
                "int", 3, check=lambda v: v >= 1, domain="support >= 1"
            )
        },
    ),
    "cwt_peaks_ratio": CalculatorDef(
        cwt_peaks_ratio,
        {
            "max_width": ParamSpec(
                "int", 5, check=lambda v: v >= 1, domain="max_width >= 1"
            )
        },
    ),
    "beyond_sigma_ratio": CalculatorDef(
        beyond_sigma_ratio,
        {"r": ParamSpec("float", 2.0, check=lambda v: v > 0, domain="r > 0")},
    ),
    "energy_ratio_chunks": CalculatorDef(
        energy_ratio_chunks,
        {
            "num_segments": ParamSpec(
                "int", 4, check=lambda v: v >= 1, domain="num_segments >= 1"
            ),
            "focus": ParamSpec(
                "int", 0, check=lambda v: v >= 0, domain="0 <= focus < num_segments"
            ),
        },
    ),
    "index_mass_quantile": CalculatorDef(
        index_mass_quantile,
        {
            "q": ParamSpec(
                "float", 0.5, check=lambda v: 0 < v < 1, domain="0 < q < 1"
            )
        },
    ),
    "first_location_of_maximum": CalculatorDef(first_location_of_maximum, {}),
    "first_location_of_minimum": CalculatorDef(first_location_of_minimum, {}),
    "mean_second_derivative_central": CalculatorDef(
        mean_second_derivative_central, {}
    ),
}


def calculator_names() -> list[str]:
    return list(CATALOG)


def _coerce(name: str, key: str, spec: ParamSpec, value: object) -> object:
    if spec.kind == "bool":
        if not isinstance(value, bool):
            raise CalculatorError(
                f"calculator {name!r}: parameter {key!r} must be a boolean"
            )
        return value
    if spec.kind == "str":
        if not isinstance(value, str):
            raise CalculatorError(
                f"calculator {name!r}: parameter {key!r} must be a string"
            )
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise CalculatorError(
            f"calculator {name!r}: parameter {key!r} must be a number"
        )
    if spec.kind == "int":
        if float(value) != int(value):
            raise CalculatorError(
                f"calculator {name!r}: parameter {key!r} must be an integer"
            )
        return int(value)
    return float(value)


def normalize_params(name: str, params: Mapping[str, object] | None) -> dict[str, object]:
    """Validate params against the catalog and fill defaults. The result
    is complete and canonically typed; raises CalculatorError otherwise."""
    if name not in CATALOG:
        raise CalculatorError(
            f"unknown calculator {name!r}; valid calculators: "
            + ", ".join(sorted(CATALOG))
        )
    schema = CATALOG[name].params
    given = dict(params or {})
    unknown = set(given) - set(schema)
    if unknown:
        raise CalculatorError(
            f"calculator {name!r}: unknown parameters {sorted(unknown)}; "
            f"accepted: {sorted(schema) or 'none'}"
        )
    out: dict[str, object] = {}
    for key, spec in schema.items():
        value = _coerce(name, key, spec, given[key]) if key in given else spec.default
        if spec.choices is not None and value not in spec.choices:
            raise CalculatorError(
                f"calculator {name!r}: parameter {key!r} must be one of "
                f"{list(spec.choices)}, got {value!r}"
            )
        if spec.check is not None and not spec.check(value):
            raise CalculatorError(
                f"calculator {name!r}: parameter {key!r}={value!r} outside "
                f"domain {spec.domain}"
            )
        out[key] = value
    if name == "energy_ratio_chunks" and out["focus"] >= out["num_segments"]:
        raise CalculatorError(
            "calculator 'energy_ratio_chunks': focus "
            f"{out['focus']} outside domain 0 <= focus < num_segments="
            f"{out['num_segments']}"
        )
    return out


def evaluate_calculator(
    name: str, x: Series, params: Mapping[str, object] | None = None
) -> float | None:
    """Run one calculator on one series. Params are validated and defaulted;
    undefined results come back as None, never as a non-finite float."""
    full = normalize_params(name, params)
    result = CATALOG[name].fn(_as_array(x), **full)
    if result is None:
        return None
    value = float(result)
    if not math.isfinite(value):
        return None
    return value
