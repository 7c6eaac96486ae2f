"""Position-averaging across ranking snapshots, and how much it helps.

A query observed over several weeks gives a series of ranked lists. The
smoothed list ranks every observed item by its mean position over the
snapshots where it appears (no imputation for absences), truncated to the
modal snapshot length so smoothed and single-week lists compare under the
same length normalization. ``smoothed_vs_single`` scores query pairs both
ways and lays the two distance histograms side by side over five 0.2-wide
bins.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from datetime import date
from typing import Iterable, Mapping

from .metrics import RankedList, rds
from .pairs import QueryPair
from .report import HistogramReport, histogram

COMPARISON_BIN_WIDTH = 0.2


@dataclass(frozen=True)
class SnapshotSeries:
    """Weekly ranked lists for one query, weeks strictly increasing."""

    query: str
    snapshots: tuple[tuple[date, RankedList], ...]

    def __post_init__(self):
        if not self.snapshots:
            raise ValueError("a series needs at least one snapshot")
        weeks = [week for week, _ in self.snapshots]
        if any(b <= a for a, b in zip(weeks, weeks[1:])):
            raise ValueError("snapshot weeks must be strictly increasing")

    def at(self, week: date) -> RankedList | None:
        for snap_week, ranked in self.snapshots:
            if snap_week == week:
                return ranked
        return None


def ensemble_list(series: SnapshotSeries) -> RankedList:
    """Rank items by mean position over the snapshots where each appears.

    Ties break by item id; output is truncated to the modal snapshot length
    (smallest such length if several lengths are equally common).
    """
    totals: dict[str, int] = {}
    appearances: dict[str, int] = {}
    for _, ranked in series.snapshots:
        for rank, item in enumerate(ranked, 1):
            totals[item] = totals.get(item, 0) + rank
            appearances[item] = appearances.get(item, 0) + 1
    ordered = sorted(totals, key=lambda item: (totals[item] / appearances[item], item))
    length_counts = Counter(len(ranked) for _, ranked in series.snapshots)
    top_count = max(length_counts.values())
    modal_len = min(n for n, c in length_counts.items() if c == top_count)
    return RankedList(tuple(ordered[:modal_len]))


@dataclass(frozen=True)
class EnsembleComparison:
    """Distance histograms with and without smoothing, plus skipped pairs."""

    single: HistogramReport
    ensembled: HistogramReport
    skipped: int

    def to_csv(self) -> str:
        lines = ["variant,bin_lo,bin_hi,rate"]
        for name, report in (("no_ensemble", self.single), ("ensemble", self.ensembled)):
            for lo, hi, _, rate in report.bins:
                lines.append(f"{name},{lo:.6g},{hi:.6g},{rate:.6f}")
        return "\n".join(lines) + "\n"


def smoothed_vs_single(
    pairs: Iterable[QueryPair],
    series_by_query: Mapping[str, SnapshotSeries],
    single_week: date,
) -> EnsembleComparison:
    """Score each pair on ensembled lists and on its ``single_week`` lists.

    Pairs missing a series, or whose series does not cover the single week,
    are skipped and counted.
    """
    single_values: list[float] = []
    ensembled_values: list[float] = []
    skipped = 0
    for pair in sorted(pairs, key=lambda p: (p.q1, p.q2)):
        s1 = series_by_query.get(pair.q1)
        s2 = series_by_query.get(pair.q2)
        if s1 is None or s2 is None:
            skipped += 1
            continue
        w1 = s1.at(single_week)
        w2 = s2.at(single_week)
        if w1 is None or w2 is None:
            skipped += 1
            continue
        single_values.append(rds(w1, w2).normalized)
        ensembled_values.append(
            rds(ensemble_list(s1), ensemble_list(s2)).normalized
        )
    return EnsembleComparison(
        single=histogram(single_values, COMPARISON_BIN_WIDTH),
        ensembled=histogram(ensembled_values, COMPARISON_BIN_WIDTH),
        skipped=skipped,
    )


def series_from_datasets(datasets, query: str) -> SnapshotSeries | None:
    """Collect one query's snapshots from weekly datasets (ascending weeks);
    None when the query never survived filtering."""
    snapshots = []
    for ds in sorted(datasets, key=lambda d: d.week):
        ranked = ds.rankings.get(query)
        if ranked is not None:
            snapshots.append((ds.week, ranked))
    if not snapshots:
        return None
    return SnapshotSeries(query=query, snapshots=tuple(snapshots))
