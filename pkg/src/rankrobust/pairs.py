"""Generate and evaluate semantically identical query pairs.

Two sources: queries sharing a normalized key within one weekly dataset
(rule-based), or an externally supplied query-to-query similarity table
(top-k highest-scoring partners per held-constant query). Pairs are
canonical: q1 < q2 lexicographically, deduplicated, emitted in sorted order.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from pathlib import Path
from typing import Iterable, Sequence

from .ingest import WeeklyDataset
from .metrics import RdsResult, rds
from .normalize import NormalizationConfig, default_config, normalize_query

TPS = "TPS"
SIM = "SIM"


@dataclass(frozen=True)
class QueryPair:
    """Two distinct queries asserted semantically identical, with provenance."""

    q1: str
    q2: str
    source: str = TPS
    sim_score: float | None = None
    week: date | None = None

    def __post_init__(self):
        if self.q1 >= self.q2:
            raise ValueError("pair must be canonical: q1 < q2")
        if self.source not in (TPS, SIM):
            raise ValueError(f"unknown pair source {self.source!r}")
        if (self.source == SIM) != (self.sim_score is not None):
            raise ValueError("sim_score is present exactly for SIM pairs")

    @classmethod
    def make(
        cls,
        qa: str,
        qb: str,
        source: str = TPS,
        sim_score: float | None = None,
        week: date | None = None,
    ) -> "QueryPair":
        if qa == qb:
            raise ValueError("a pair needs two distinct queries")
        q1, q2 = (qa, qb) if qa < qb else (qb, qa)
        return cls(q1=q1, q2=q2, source=source, sim_score=sim_score, week=week)


def tps_pairs(
    ds: WeeklyDataset, cfg: NormalizationConfig | None = None
) -> list[QueryPair]:
    """All unordered pairs of distinct queries sharing a normalized key."""
    cfg = cfg if cfg is not None else default_config()
    groups: dict[str, list[str]] = {}
    for query in ds.rankings:
        key = normalize_query(query, cfg)
        if key.is_empty:
            continue
        groups.setdefault(key.key, []).append(query)
    out: set[QueryPair] = set()
    for members in groups.values():
        members = sorted(members)
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                out.add(QueryPair.make(members[i], members[j], TPS, week=ds.week))
    return sorted(out, key=lambda p: (p.q1, p.q2))


@dataclass
class SimScoreTable:
    """External query-to-query similarity scores: (query_a, query_b, score)."""

    rows: list[tuple[str, str, float]]

    def __post_init__(self):
        for qa, qb, score in self.rows:
            if qa == qb:
                raise ValueError(f"self-pair {qa!r} in similarity table")
            if not 0.0 <= score <= 1.0:
                raise ValueError(f"score {score} out of [0, 1] for ({qa!r}, {qb!r})")

    @classmethod
    def load(cls, path) -> "SimScoreTable":
        rows = []
        for lineno, line in enumerate(
            Path(path).read_text(encoding="utf-8").splitlines(), 1
        ):
            if not line or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 fields")
            rows.append((fields[0], fields[1], float(fields[2])))
        return cls(rows)


def topk_pairs(
    table: SimScoreTable,
    k: int = 3,
    min_score: float = 0.0,
    week: date | None = None,
) -> list[QueryPair]:
    """For each held-constant query, pair it with its k best-scoring partners.

    Ties at the k-th place break by (score desc, partner lexicographic).
    Reciprocal duplicates collapse to one canonical pair keeping the best score.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    by_query: dict[str, list[tuple[float, str]]] = {}
    for qa, qb, score in table.rows:
        if score >= min_score:
            by_query.setdefault(qa, []).append((score, qb))
    best: dict[tuple[str, str], float] = {}
    for qa in sorted(by_query):
        candidates = sorted(by_query[qa], key=lambda c: (-c[0], c[1]))
        for score, qb in candidates[:k]:
            key = (qa, qb) if qa < qb else (qb, qa)
            if key not in best or score > best[key]:
                best[key] = score
    return [
        QueryPair(q1=q1, q2=q2, source=SIM, sim_score=best[(q1, q2)], week=week)
        for q1, q2 in sorted(best)
    ]


def evaluate_pairs(
    pairs: Iterable[QueryPair], ds: WeeklyDataset
) -> tuple[list[tuple[QueryPair, RdsResult]], int]:
    """Score each pair's two ranked lists; returns (results, skipped count).

    Pairs with either query missing from the dataset are skipped and counted.
    Output is in canonical pair order regardless of input order.
    """
    results = []
    skipped = 0
    for pair in sorted(pairs, key=lambda p: (p.q1, p.q2)):
        la = ds.rankings.get(pair.q1)
        lb = ds.rankings.get(pair.q2)
        if la is None or lb is None:
            skipped += 1
            continue
        results.append((pair, rds(la, lb)))
    return results, skipped


def _fmt(x: float | None) -> str:
    return "" if x is None else f"{x:.12g}"


def write_pairs(pairs: Sequence[QueryPair], dest) -> None:
    """TSV: q1, q2, source, score, week."""
    with open(dest, "w", encoding="utf-8", newline="") as fh:
        for p in pairs:
            week = p.week.isoformat() if p.week else ""
            fh.write(f"{p.q1}\t{p.q2}\t{p.source}\t{_fmt(p.sim_score)}\t{week}\n")


def read_pairs(src) -> list[QueryPair]:
    pairs = []
    for lineno, line in enumerate(Path(src).read_text(encoding="utf-8").splitlines(), 1):
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 5:
            raise ValueError(f"{src}:{lineno}: expected 5 fields")
        q1, q2, source, score_s, week_s = fields
        pairs.append(
            QueryPair(
                q1=q1,
                q2=q2,
                source=source,
                sim_score=float(score_s) if score_s else None,
                week=date.fromisoformat(week_s) if week_s else None,
            )
        )
    return pairs


def write_evaluations(
    results: Sequence[tuple[QueryPair, RdsResult]], dest
) -> None:
    """Pair TSV columns plus raw, normalized, similarity."""
    with open(dest, "w", encoding="utf-8", newline="") as fh:
        for pair, res in results:
            week = pair.week.isoformat() if pair.week else ""
            fh.write(
                f"{pair.q1}\t{pair.q2}\t{pair.source}\t{_fmt(pair.sim_score)}\t{week}"
                f"\t{_fmt(res.raw)}\t{_fmt(res.normalized)}\t{_fmt(res.similarity)}\n"
            )


@dataclass(frozen=True)
class EvalRow:
    """One line of an evaluation TSV read back for reporting."""

    pair: QueryPair
    raw: float
    normalized: float
    similarity: float


def read_evaluations(src) -> list[EvalRow]:
    out = []
    for lineno, line in enumerate(Path(src).read_text(encoding="utf-8").splitlines(), 1):
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 8:
            raise ValueError(f"{src}:{lineno}: expected 8 fields")
        q1, q2, source, score_s, week_s, raw_s, norm_s, sim_s = fields
        pair = QueryPair(
            q1=q1,
            q2=q2,
            source=source,
            sim_score=float(score_s) if score_s else None,
            week=date.fromisoformat(week_s) if week_s else None,
        )
        out.append(
            EvalRow(
                pair=pair,
                raw=float(raw_s),
                normalized=float(norm_s),
                similarity=float(sim_s),
            )
        )
    return out
