"""Stylized-fact statistics of scalar series: returns, tails, memory, scaling.

Everything here is a pure function of a 1-D series. Returns over k sampling
steps are plain differences Y[i+k] - Y[i]; standardized absolute returns are
|R| divided by its arithmetic mean (so their mean is exactly 1). The heavier
estimators:

* ``acf``           biased sample autocorrelation (divides by N), PSD-safe;
* ``kde_at_zero``   Gaussian-kernel density at 0, Silverman bandwidth;
* ``peak_scaling_exponent``  log-log slope of the return-density peak vs k;
* ``multifractal_slope``     log-log slope of <|R^k|^q> / <|R^k|>^q vs k;
* ``dfa_hurst``     order-1 detrended fluctuation analysis of the series.

Every log-log fit reports its coefficient of determination.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSeriesError, SeriesTooShortError

DEFAULT_PEAK_KS = tuple(range(1, 102, 5))      # 1, 6, 11, ..., 101
DEFAULT_MULTIFRACTAL_KS = tuple(range(1, 102))
DEFAULT_MULTIFRACTAL_QS = (1.5, 2.0, 2.5, 3.0)
DEFAULT_ACF_MAX_LAG = 400
DEFAULT_KURTOSIS_KS = (1, 10, 100)
DFA_MIN_LENGTH = 1024
DFA_MIN_WINDOW = 8
DFA_N_SCALES = 20


@dataclass
class SampledSeries:
    """Uniformly sampled scalar series, optionally log-transformed on ingest."""

    values: np.ndarray
    label: str = ""
    transform: str = "identity"

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size < 2:
            raise DegenerateSeriesError(
                f"series {self.label!r} must be 1-D with at least 2 points"
            )
        if not np.all(np.isfinite(values)):
            raise DegenerateSeriesError(f"series {self.label!r} has non-finite values")
        if self.transform not in ("identity", "log"):
            raise ValueError(f"unknown transform {self.transform!r}")
        self.values = values

    @classmethod
    def from_raw(cls, raw, label: str = "", transform: str = "identity") -> "SampledSeries":
        """Build a series, applying the log transform here when requested."""
        raw = np.asarray(raw, dtype=np.float64)
        if transform == "log":
            if np.any(raw <= 0.0):
                raise DegenerateSeriesError(
                    f"log transform of {label!r} needs strictly positive values"
                )
            raw = np.log(raw)
        return cls(values=raw, label=label, transform=transform)

    def __len__(self) -> int:
        return int(self.values.size)


@dataclass
class ReturnSeries:
    """Differences of a series over k sampling steps."""

    k: int
    values: np.ndarray
    variant: str  # signed | absolute | standardized_absolute


@dataclass
class LogLogFit:
    """Least-squares line through (log x, log y) plus the points it fits."""

    slope: float
    intercept: float
    r_squared: float
    x: np.ndarray
    y: np.ndarray


@dataclass
class PdfSummary:
    """Normalized histogram plus the moment-matched Gaussian reference."""

    bin_edges: np.ndarray
    density: np.ndarray
    mean: float
    std: float


def _values(series) -> np.ndarray:
    if isinstance(series, SampledSeries):
        return series.values
    arr = np.asarray(series, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError("expected a 1-D series")
    return arr


def returns(series, k: int) -> ReturnSeries:
    """Signed k-step returns: values[i] = Y[i+k] - Y[i]."""
    y = _values(series)
    if not (1 <= k < y.size):
        raise ValueError(f"k must be in [1, len-1], got k={k} for length {y.size}")
    return ReturnSeries(k=k, values=y[k:] - y[:-k], variant="signed")


def absolute_returns(series, k: int) -> ReturnSeries:
    r = returns(series, k)
    return ReturnSeries(k=k, values=np.abs(r.values), variant="absolute")


def standardized_abs_returns(series, k: int, literal_count: bool = False) -> ReturnSeries:
    """|R| over its arithmetic mean.

    By default the mean divides the sum by the number of return terms, which
    makes the normalized mean exactly 1; ``literal_count=True`` divides the
    sum by the length of the original series instead.
    """
    y = _values(series)
    abs_r = np.abs(returns(y, k).values)
    total = float(abs_r.sum())
    if total == 0.0:
        raise DegenerateSeriesError("all k-step returns are zero")
    denom = total / (y.size if literal_count else abs_r.size)
    return ReturnSeries(k=k, values=abs_r / denom, variant="standardized_absolute")


def acf(series, max_lag: int) -> np.ndarray:
    """Biased sample autocorrelation for lags 0..max_lag (acf[0] == 1)."""
    x = _values(series)
    n = x.size
    if not (0 <= max_lag < n):
        raise ValueError(f"max_lag must be < series length, got {max_lag} for {n}")
    xc = x - x.mean()
    denom = float(xc @ xc)
    if denom <= 0.0:
        raise DegenerateSeriesError("zero variance, autocorrelation undefined")
    out = np.empty(max_lag + 1)
    out[0] = 1.0
    for lag in range(1, max_lag + 1):
        out[lag] = float(xc[:-lag] @ xc[lag:]) / denom
    return out


def excess_kurtosis(values) -> float:
    """m4 / m2^2 - 3 with biased sample central moments (Gaussian -> 0)."""
    x = _values(values)
    centered = x - x.mean()
    m2 = float(np.mean(centered**2))
    if m2 <= 0.0:
        raise DegenerateSeriesError("zero variance, kurtosis undefined")
    m4 = float(np.mean(centered**4))
    return m4 / (m2 * m2) - 3.0


def pdf_with_gaussian_reference(values, bins: int = 60) -> PdfSummary:
    """Density histogram plus the moment-matched Gaussian parameters."""
    x = _values(values)
    if x.size < 2:
        raise DegenerateSeriesError("need at least 2 values for a histogram")
    std = float(x.std())
    if std == 0.0:
        raise DegenerateSeriesError("zero variance, no spread to histogram")
    density, edges = np.histogram(x, bins=bins, density=True)
    return PdfSummary(bin_edges=edges, density=density, mean=float(x.mean()), std=std)


def gaussian_tail_mass(mean: float, std: float, threshold: float) -> float:
    """P(X > threshold) for X ~ N(mean, std)."""
    return 0.5 * math.erfc((threshold - mean) / (std * math.sqrt(2.0)))


def kde_at_zero(values) -> float:
    """Gaussian-kernel density estimate at 0 with Silverman's bandwidth."""
    x = _values(values)
    n = x.size
    if n < 10:
        raise SeriesTooShortError(f"kernel density needs at least 10 values, got {n}")
    sd = float(x.std(ddof=1))
    if sd == 0.0:
        raise DegenerateSeriesError("zero variance, kernel density undefined")
    bandwidth = 1.06 * sd * n ** (-0.2)
    z = x / bandwidth
    return float(np.exp(-0.5 * z * z).mean() / (bandwidth * math.sqrt(2.0 * math.pi)))


def _loglog_fit(x, y) -> LogLogFit:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if np.any(x <= 0.0) or np.any(y <= 0.0):
        raise DegenerateSeriesError("log-log fit needs strictly positive points")
    lx = np.log(x)
    ly = np.log(y)
    slope, intercept = np.polyfit(lx, ly, 1)
    fitted = slope * lx + intercept
    ss_res = float(np.sum((ly - fitted) ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return LogLogFit(
        slope=float(slope), intercept=float(intercept), r_squared=r_squared, x=x, y=y
    )


def peak_scaling_exponent(series, ks=DEFAULT_PEAK_KS) -> LogLogFit:
    """Power-law exponent of the return-density peak P(R=0) versus k."""
    y = _values(series)
    ks = tuple(ks)
    peak = [kde_at_zero(returns(y, k).values) for k in ks]
    return _loglog_fit(np.asarray(ks, dtype=np.float64), np.asarray(peak))


def multifractal_slope(series, q: float, ks=DEFAULT_MULTIFRACTAL_KS) -> LogLogFit:
    """log-log slope of the moment ratio <|R^k|^q> / <|R^k|>^q over k.

    Constant (slope 0) for a monofractal signal; q = 1 is identically flat.
    """
    if q < 1.0:
        raise ValueError(f"q must be >= 1, got {q}")
    y = _values(series)
    ratios = []
    for k in ks:
        a = np.abs(returns(y, k).values)
        m1 = float(a.mean())
        if m1 == 0.0:
            raise DegenerateSeriesError(f"all {k}-step returns are zero")
        ratios.append(float(np.mean(a**q)) / m1**q)
    return _loglog_fit(np.asarray(tuple(ks), dtype=np.float64), np.asarray(ratios))


def _dfa_fluctuation(profile: np.ndarray, window: int) -> float:
    """RMS residual of per-window linear detrending, complete windows only."""
    n_win = profile.size // window
    segments = profile[: n_win * window].reshape(n_win, window)
    t = np.arange(window, dtype=np.float64)
    t_centered = t - t.mean()
    denom = float(t_centered @ t_centered)
    seg_means = segments.mean(axis=1)
    slopes = (segments @ t_centered) / denom
    residuals = segments - seg_means[:, None] - slopes[:, None] * t_centered[None, :]
    return float(np.sqrt(np.mean(residuals**2)))


def dfa_hurst(series, min_window: int = DFA_MIN_WINDOW, n_scales: int = DFA_N_SCALES) -> LogLogFit:
    """Hurst exponent by order-1 DFA: slope of log F(n) against log n.

    Profile = cumulative sum of the demeaned series; ~n_scales log-spaced
    window sizes from min_window to length/4, one forward pass per size.
    """
    x = _values(series)
    n = x.size
    if n < DFA_MIN_LENGTH:
        raise SeriesTooShortError(f"DFA needs at least {DFA_MIN_LENGTH} points, got {n}")
    if float(x.std()) == 0.0:
        raise DegenerateSeriesError("zero variance, DFA undefined")
    profile = np.cumsum(x - x.mean())
    max_window = n // 4
    sizes = np.unique(
        np.rint(np.geomspace(min_window, max_window, n_scales)).astype(int)
    )
    fluctuations = np.array([_dfa_fluctuation(profile, int(w)) for w in sizes])
    keep = fluctuations > 0.0
    if keep.sum() < 3:
        raise DegenerateSeriesError("not enough non-zero DFA fluctuations to fit")
    return _loglog_fit(sizes[keep].astype(np.float64), fluctuations[keep])


@dataclass
class StatsReport:
    """Results of the full stylized-fact battery on one series."""

    label: str = ""
    n_samples: int = 0
    acf_return: np.ndarray | None = None
    acf_abs_return: np.ndarray | None = None
    kurtosis_by_k: dict = field(default_factory=dict)          # standardized |R|
    kurtosis_signed_by_k: dict = field(default_factory=dict)   # signed R
    peak_scaling: LogLogFit | None = None
    multifractal_slopes: dict = field(default_factory=dict)
    hurst: LogLogFit | None = None
    pdf: PdfSummary | None = None
    errors: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        def arr(a):
            return None if a is None else [float(v) for v in a]

        return {
            "label": self.label,
            "n_samples": self.n_samples,
            "acf_return": arr(self.acf_return),
            "acf_abs_return": arr(self.acf_abs_return),
            "kurtosis_by_k": {str(k): v for k, v in self.kurtosis_by_k.items()},
            "kurtosis_signed_by_k": {str(k): v for k, v in self.kurtosis_signed_by_k.items()},
            "peak_scaling_alpha": None
            if self.peak_scaling is None
            else {"alpha": self.peak_scaling.slope, "r_squared": self.peak_scaling.r_squared},
            "multifractal_slopes": {str(q): v for q, v in self.multifractal_slopes.items()},
            "hurst_H": None
            if self.hurst is None
            else {"H": self.hurst.slope, "r_squared": self.hurst.r_squared},
            "pdf": None
            if self.pdf is None
            else {
                "bin_edges": arr(self.pdf.bin_edges),
                "density": arr(self.pdf.density),
                "mu": self.pdf.mean,
                "sigma": self.pdf.std,
            },
            "errors": dict(self.errors),
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def full_report(
    series,
    acf_max_lag: int = DEFAULT_ACF_MAX_LAG,
    kurtosis_ks=DEFAULT_KURTOSIS_KS,
    peak_ks=DEFAULT_PEAK_KS,
    multifractal_qs=DEFAULT_MULTIFRACTAL_QS,
    multifractal_ks=DEFAULT_MULTIFRACTAL_KS,
    pdf_bins: int = 60,
) -> StatsReport:
    """Run every statistic with its defaults; per-statistic failures are
    recorded in ``report.errors`` without aborting the rest."""
    y = _values(series)
    label = series.label if isinstance(series, SampledSeries) else ""
    report = StatsReport(label=label, n_samples=int(y.size))

    def attempt(name, fn):
        try:
            return fn()
        except Exception as exc:  # noqa: BLE001 - aggregate, never abort
            report.errors[name] = f"{type(exc).__name__}: {exc}"
            return None

    max_lag = min(acf_max_lag, y.size - 2)
    report.acf_return = attempt("acf_return", lambda: acf(returns(y, 1).values, max_lag))
    report.acf_abs_return = attempt(
        "acf_abs_return", lambda: acf(np.abs(returns(y, 1).values), max_lag)
    )
    for k in kurtosis_ks:
        if k >= y.size:
            continue
        value = attempt(
            f"kurtosis_by_k[{k}]",
            lambda k=k: excess_kurtosis(standardized_abs_returns(y, k).values),
        )
        if value is not None:
            report.kurtosis_by_k[k] = value
        signed = attempt(
            f"kurtosis_signed_by_k[{k}]",
            lambda k=k: excess_kurtosis(returns(y, k).values),
        )
        if signed is not None:
            report.kurtosis_signed_by_k[k] = signed
    report.peak_scaling = attempt(
        "peak_scaling_alpha", lambda: peak_scaling_exponent(y, peak_ks)
    )
    for q in multifractal_qs:
        slope = attempt(
            f"multifractal_slopes[{q}]",
            lambda q=q: multifractal_slope(y, q, multifractal_ks).slope,
        )
        if slope is not None:
            report.multifractal_slopes[q] = slope
    report.hurst = attempt("hurst_H", lambda: dfa_hurst(np.abs(returns(y, 1).values)))
    report.pdf = attempt(
        "pdf", lambda: pdf_with_gaussian_reference(standardized_abs_returns(y, 1).values, pdf_bins)
    )
    return report
