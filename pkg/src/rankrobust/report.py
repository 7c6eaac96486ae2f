"""Aggregate per-pair distances into histograms, multi-week trends, and
score-vs-distance correlation summaries.

Binning convention: bins partition [0, 1] exactly, a value sitting on an
interior edge goes to the upper bin, and 1.0 belongs to the last bin.
Spread statistics use the population standard deviation (weekly report
counts are small and fixed, not samples from a larger run).

Every report serializes to CSV (rows only) and JSON (full contents, tagged
with ``schema_version``).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .metrics import RdsResult, pearson

SCHEMA_VERSION = 1

DEFAULT_BIN_WIDTH = 0.1

_EDGE_EPS = 1e-12

LOW_CORRELATION_THRESHOLD = 0.5


@dataclass(frozen=True)
class HistogramReport:
    """Binned frequency rates of normalized distances, plus value mean/std."""

    bin_width: float
    bins: tuple[tuple[float, float, int, float], ...]  # (lo, hi, count, rate)
    total: int
    mean: float
    std: float

    def rates(self) -> tuple[float, ...]:
        return tuple(rate for _, _, _, rate in self.bins)

    def to_csv(self) -> str:
        lines = ["bin_lo,bin_hi,count,rate"]
        for lo, hi, count, rate in self.bins:
            lines.append(f"{lo:.6g},{hi:.6g},{count},{rate:.6f}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema_version": SCHEMA_VERSION,
                "kind": "histogram",
                "bin_width": self.bin_width,
                "total": self.total,
                "mean": self.mean,
                "std": self.std,
                "bins": [
                    {"lo": lo, "hi": hi, "count": count, "rate": rate}
                    for lo, hi, count, rate in self.bins
                ],
            },
            indent=2,
            sort_keys=True,
        ) + "\n"


def _n_bins(bin_width: float) -> int:
    if not 0 < bin_width <= 1:
        raise ValueError("bin_width must be in (0, 1]")
    n = round(1.0 / bin_width)
    if abs(n * bin_width - 1.0) > 1e-9:
        raise ValueError(f"bin_width {bin_width} does not partition [0, 1] exactly")
    return n


def histogram(
    values: Iterable[float | RdsResult], bin_width: float = DEFAULT_BIN_WIDTH
) -> HistogramReport:
    """Bin normalized distances (floats or scored results) over [0, 1]."""
    n_bins = _n_bins(bin_width)
    floats = [
        v.normalized if isinstance(v, RdsResult) else float(v) for v in values
    ]
    counts = [0] * n_bins
    for v in floats:
        if not -1e-9 <= v <= 1 + 1e-9:
            raise ValueError(f"normalized value {v} outside [0, 1]")
        idx = min(int(math.floor(v / bin_width + _EDGE_EPS)), n_bins - 1)
        counts[max(idx, 0)] += 1
    total = len(floats)
    bins = tuple(
        (
            i * bin_width,
            1.0 if i == n_bins - 1 else (i + 1) * bin_width,
            counts[i],
            counts[i] / total if total else 0.0,
        )
        for i in range(n_bins)
    )
    # summed in sorted order so the stats are permutation-invariant bit-for-bit
    arr = np.sort(np.asarray(floats, dtype=float))
    return HistogramReport(
        bin_width=bin_width,
        bins=bins,
        total=total,
        mean=float(arr.mean()) if total else 0.0,
        std=float(arr.std()) if total else 0.0,
    )


@dataclass(frozen=True)
class TrendReport:
    """Per-bin frequency-rate series across weeks, with mean and spread."""

    bin_width: float
    edges: tuple[tuple[float, float], ...]
    rates: tuple[tuple[float, ...], ...]  # per week, per bin
    means: tuple[float, ...]
    stds: tuple[float, ...]

    def to_csv(self) -> str:
        lines = ["bin_lo,bin_hi,mean_rate,std_rate"]
        for (lo, hi), mean, std in zip(self.edges, self.means, self.stds):
            lines.append(f"{lo:.6g},{hi:.6g},{mean:.6f},{std:.6f}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema_version": SCHEMA_VERSION,
                "kind": "trend",
                "bin_width": self.bin_width,
                "weeks": len(self.rates),
                "bins": [
                    {
                        "lo": lo,
                        "hi": hi,
                        "mean_rate": mean,
                        "std_rate": std,
                        "series": [week_rates[i] for week_rates in self.rates],
                    }
                    for i, ((lo, hi), mean, std) in enumerate(
                        zip(self.edges, self.means, self.stds)
                    )
                ],
            },
            indent=2,
            sort_keys=True,
        ) + "\n"


def trend(weekly_reports: Sequence[HistogramReport]) -> TrendReport:
    """Per-bin mean and population std of frequency rates across weeks."""
    if len(weekly_reports) < 2:
        raise ValueError("a trend needs at least 2 weekly reports")
    first = weekly_reports[0]
    for rep in weekly_reports[1:]:
        if rep.bin_width != first.bin_width or len(rep.bins) != len(first.bins):
            raise ValueError("weekly reports use mismatched binning")
    rates = np.array([rep.rates() for rep in weekly_reports], dtype=float)
    return TrendReport(
        bin_width=first.bin_width,
        edges=tuple((lo, hi) for lo, hi, _, _ in first.bins),
        rates=tuple(tuple(row) for row in rates),
        means=tuple(float(x) for x in rates.mean(axis=0)),
        stds=tuple(float(x) for x in rates.std(axis=0)),
    )


@dataclass(frozen=True)
class CorrelationReport:
    """Pearson r between similarity scores and normalized distances."""

    r: float | None
    p_value: float | None
    n: int

    @property
    def defined(self) -> bool:
        return self.r is not None

    @property
    def low_correlation(self) -> bool | None:
        if self.r is None:
            return None
        return abs(self.r) < LOW_CORRELATION_THRESHOLD

    def to_csv(self) -> str:
        r = "" if self.r is None else f"{self.r:.6f}"
        p = "" if self.p_value is None else f"{self.p_value:.6g}"
        low = "" if self.low_correlation is None else str(self.low_correlation).lower()
        return "r,p_value,n,low_correlation\n" f"{r},{p},{self.n},{low}\n"

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema_version": SCHEMA_VERSION,
                "kind": "correlation",
                "r": self.r,
                "p_value": self.p_value,
                "n": self.n,
                "low_correlation": self.low_correlation,
            },
            indent=2,
            sort_keys=True,
        ) + "\n"


def correlate(pairs: Iterable[tuple[float, float]]) -> CorrelationReport:
    """Correlate (similarity score, normalized distance) pairs.

    Degenerate input (fewer than 3 points, or zero variance on either side)
    yields an undefined report rather than a fabricated coefficient.
    """
    data = list(pairs)
    try:
        r, p = pearson([x for x, _ in data], [y for _, y in data])
    except ValueError:
        return CorrelationReport(r=None, p_value=None, n=len(data))
    return CorrelationReport(r=r, p_value=p, n=len(data))
