"""Parse weekly search-log files and build filtered per-week datasets.

Log format: line-delimited UTF-8, tab-separated
``week<TAB>locale<TAB>query<TAB>item_id<TAB>avg_position<TAB>frequency``;
lines starting with ``#`` are comments.

Filtering, in order: locale allow-list; global per-week bottom cut of
(query, item) records by frequency (boundary ties kept); per-query ranked
lists built by ascending average position (ties by item id), queries shorter
than the minimum length dropped, survivors truncated to it; finally queries
grouped by their normalized key, keeping only the most-searched few per
group. Every step sorts, so the result is independent of input line order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from datetime import date
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .metrics import RankedList
from .normalize import NormalizationConfig, default_config, normalize_query

DEFAULT_LOCALES = frozenset({"en-US"})
DEFAULT_BOTTOM_CUT = 0.20
DEFAULT_MIN_LEN = 20
DEFAULT_TOP_K_PER_GROUP = 3


@dataclass(frozen=True)
class QueryRecord:
    """One (week, query, item) observation from a search log."""

    week: date
    locale: str
    query: str
    item: str
    avg_position: float
    frequency: int


@dataclass
class ParsedLog:
    records: list[QueryRecord]
    malformed: list[tuple[int, str]]  # (line number, reason)


def _parse_line(lineno: int, line: str) -> QueryRecord:
    fields = line.split("\t")
    if len(fields) != 6:
        raise ValueError(f"expected 6 fields, got {len(fields)}")
    week_s, locale, query, item, pos_s, freq_s = fields
    week = date.fromisoformat(week_s)
    if not query.strip():
        raise ValueError("empty query")
    if not item.strip():
        raise ValueError("empty item id")
    avg_position = float(pos_s)
    if not math.isfinite(avg_position) or avg_position < 1:
        raise ValueError(f"avg_position {pos_s!r} out of range")
    frequency = int(freq_s)
    if frequency < 0:
        raise ValueError(f"negative frequency {freq_s!r}")
    return QueryRecord(week, locale, query, item, avg_position, frequency)


def parse_log(source, strict: bool = False) -> ParsedLog:
    """Parse a log from a path, file object, or iterable of lines.

    Malformed lines are collected (with line numbers) under lenient mode;
    under ``strict`` the first one raises ValueError.
    """
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as handle:
            return parse_log(handle, strict=strict)
    records: list[QueryRecord] = []
    malformed: list[tuple[int, str]] = []
    for lineno, raw in enumerate(source, 1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line or line.startswith("#"):
            continue
        try:
            records.append(_parse_line(lineno, line))
        except ValueError as exc:
            if strict:
                raise ValueError(f"line {lineno}: {exc}") from exc
            malformed.append((lineno, str(exc)))
    return ParsedLog(records=records, malformed=malformed)


def split_weeks(records: Iterable[QueryRecord]) -> dict[date, list[QueryRecord]]:
    """Partition records by week, weeks in ascending order."""
    byweek: dict[date, list[QueryRecord]] = {}
    for rec in records:
        byweek.setdefault(rec.week, []).append(rec)
    return {week: byweek[week] for week in sorted(byweek)}


@dataclass
class WeeklyDataset:
    """Filtered rankings for one week: query -> top-n list, query -> search count."""

    week: date | None
    rankings: dict[str, RankedList]
    frequencies: dict[str, int]


def apply_filters(
    records: Sequence[QueryRecord],
    locale_allow: frozenset[str] | set[str] = DEFAULT_LOCALES,
    bottom_cut: float = DEFAULT_BOTTOM_CUT,
    min_len: int = DEFAULT_MIN_LEN,
    top_k_queries_per_tps: int = DEFAULT_TOP_K_PER_GROUP,
    cfg: NormalizationConfig | None = None,
) -> WeeklyDataset:
    """Build the filtered dataset for one week of records."""
    cfg = cfg if cfg is not None else default_config()
    if not 0 <= bottom_cut < 1:
        raise ValueError("bottom_cut must be in [0, 1)")
    if min_len < 1:
        raise ValueError("min_len must be at least 1")
    if top_k_queries_per_tps < 1:
        raise ValueError("top_k_queries_per_tps must be at least 1")
    weeks = {rec.week for rec in records}
    if len(weeks) > 1:
        raise ValueError(f"records span multiple weeks: {sorted(weeks)}")
    week = weeks.pop() if weeks else None

    kept = [rec for rec in records if rec.locale in locale_allow]

    seen: set[tuple[str, str]] = set()
    for rec in kept:
        key = (rec.query, rec.item)
        if key in seen:
            raise ValueError(f"duplicate (query, item) record: {key}")
        seen.add(key)

    # Bottom cut by frequency, boundary ties kept: the threshold is the
    # first *kept* frequency, and only records strictly below it drop.
    if kept and bottom_cut > 0:
        cut_index = int(len(kept) * bottom_cut)
        if cut_index > 0:
            threshold = sorted(rec.frequency for rec in kept)[cut_index]
            kept = [rec for rec in kept if rec.frequency >= threshold]

    by_query: dict[str, list[QueryRecord]] = {}
    for rec in kept:
        by_query.setdefault(rec.query, []).append(rec)

    rankings: dict[str, RankedList] = {}
    frequencies: dict[str, int] = {}
    for query in sorted(by_query):
        recs = by_query[query]
        if len(recs) < min_len:
            continue
        recs.sort(key=lambda r: (r.avg_position, r.item))
        rankings[query] = RankedList(tuple(r.item for r in recs[:min_len]))
        frequencies[query] = sum(r.frequency for r in recs)

    groups: dict[str, list[str]] = {}
    for query in rankings:
        key = normalize_query(query, cfg)
        if key.is_empty:
            continue
        groups.setdefault(key.key, []).append(query)

    selected: set[str] = set()
    for key in sorted(groups):
        members = sorted(groups[key], key=lambda q: (-frequencies[q], q))
        selected.update(members[:top_k_queries_per_tps])

    rankings = {q: rankings[q] for q in sorted(selected)}
    frequencies = {q: frequencies[q] for q in sorted(selected)}
    return WeeklyDataset(week=week, rankings=rankings, frequencies=frequencies)


SCHEMA_VERSION = 1


def _week_filename(week: date) -> str:
    return f"week-{week.isoformat()}.tsv"


def save_datasets(
    datasets: Sequence[WeeklyDataset],
    out_dir,
    filter_params: Mapping | None = None,
) -> None:
    """Persist datasets to a directory of per-week TSV files plus a manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest: dict = {
        "schema_version": SCHEMA_VERSION,
        "filters": dict(filter_params or {}),
        "weeks": [],
    }
    for ds in sorted(datasets, key=lambda d: d.week):
        rows = 0
        with open(out / _week_filename(ds.week), "w", encoding="utf-8", newline="") as fh:
            for query in sorted(ds.rankings):
                freq = ds.frequencies[query]
                for rank, item in enumerate(ds.rankings[query], 1):
                    fh.write(f"{query}\t{item}\t{rank}\t{freq}\n")
                    rows += 1
        manifest["weeks"].append(
            {
                "week": ds.week.isoformat(),
                "file": _week_filename(ds.week),
                "queries": len(ds.rankings),
                "records": rows,
            }
        )
    with open(out / "manifest.json", "w", encoding="utf-8", newline="") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_datasets(in_dir) -> list[WeeklyDataset]:
    """Load every week listed in a dataset directory's manifest."""
    root = Path(in_dir)
    manifest = json.loads((root / "manifest.json").read_text(encoding="utf-8"))
    datasets = []
    for entry in manifest["weeks"]:
        week = date.fromisoformat(entry["week"])
        per_query: dict[str, list[tuple[int, str]]] = {}
        freqs: dict[str, int] = {}
        for lineno, line in enumerate(
            (root / entry["file"]).read_text(encoding="utf-8").splitlines(), 1
        ):
            fields = line.split("\t")
            if len(fields) != 4:
                raise ValueError(f"{entry['file']}:{lineno}: expected 4 fields")
            query, item, rank_s, freq_s = fields
            per_query.setdefault(query, []).append((int(rank_s), item))
            freqs[query] = int(freq_s)
        rankings = {}
        for query in sorted(per_query):
            pairs = sorted(per_query[query])
            if [rank for rank, _ in pairs] != list(range(1, len(pairs) + 1)):
                raise ValueError(f"{entry['file']}: ranks for {query!r} are not 1..n")
            rankings[query] = RankedList(tuple(item for _, item in pairs))
        datasets.append(
            WeeklyDataset(
                week=week,
                rankings=rankings,
                frequencies={q: freqs[q] for q in sorted(rankings)},
            )
        )
    return datasets


def load_dataset_week(in_dir, week: date) -> WeeklyDataset:
    for ds in load_datasets(in_dir):
        if ds.week == week:
            return ds
    raise ValueError(f"no dataset for week {week.isoformat()} in {in_dir}")
