"""Rank-comparison metrics between two top-n lists.

The central measure is a ranking distance built from log-discounted
positions: shared items contribute the absolute difference of their position
decays ``1/log2(p+1)``, while an item present in only one list contributes a
length-dependent penalty ``|1/log2(2) - 1/log2(n+1)|`` (n the length of the
list holding it) plus its own decay. The raw distance is normalized by the
worst case for the two list lengths (two fully disjoint lists), giving a
score in [0, 1]; ``similarity = 1 - normalized``.

Classical baselines (Kendall tau, AP correlation, Spearman rho) are computed
over the intersection of the two item sets, re-ranked within it, so that a
pair differing only in its missing items scores a perfect 1.0 - exactly the
blind spot the distance above is designed to expose.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from scipy import stats


@dataclass(frozen=True)
class RankedList:
    """Ordered item identifiers for one query; the j-th item has rank j (1-based)."""

    items: tuple[str, ...]

    def __post_init__(self):
        if not self.items:
            raise ValueError("ranked list must contain at least one item")
        if len(set(self.items)) != len(self.items):
            raise ValueError("ranked list contains duplicate items")

    @classmethod
    def of(cls, *items) -> "RankedList":
        """Build from loosely-typed items (ints are fine in tests and demos)."""
        return cls(tuple(str(x) for x in items))

    def positions(self) -> dict[str, int]:
        """item -> 1-based rank."""
        return {item: rank for rank, item in enumerate(self.items, 1)}

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)


@dataclass(frozen=True)
class RdsResult:
    """Raw distance, its worst case for the two lengths, and the normalized pair."""

    raw: float
    max_possible: float
    normalized: float
    similarity: float


@dataclass(frozen=True)
class MetricOutcome:
    """A baseline metric value plus the number of items it was computed over.

    ``value`` is None (``defined`` False) when the support is too small for
    the metric to mean anything, rather than a fabricated 0.
    """

    value: float | None
    support: int

    @property
    def defined(self) -> bool:
        return self.value is not None


def _decay(position: int) -> float:
    return 1.0 / math.log2(position + 1)


def _missing_penalty(list_len: int) -> float:
    return abs(1.0 - _decay(list_len))


def rds_raw(a: RankedList, b: RankedList) -> float:
    """Raw ranking distance over the union of the two item sets.

    Symmetric, zero exactly when the lists are identical.
    """
    pos_a = a.positions()
    pos_b = b.positions()
    total = 0.0
    for item in sorted(set(pos_a) | set(pos_b)):
        pa = pos_a.get(item)
        pb = pos_b.get(item)
        if pa is not None and pb is not None:
            total += abs(_decay(pa) - _decay(pb))
        elif pa is not None:
            total += _missing_penalty(len(a)) + _decay(pa)
        else:
            total += _missing_penalty(len(b)) + _decay(pb)
    return total


def rds_max(len_a: int, len_b: int) -> float:
    """Worst-case raw distance for the two lengths: two fully disjoint lists."""
    if len_a < 1 or len_b < 1:
        raise ValueError("list lengths must be at least 1")

    def one_side(n: int) -> float:
        return sum(_missing_penalty(n) + _decay(p) for p in range(1, n + 1))

    return one_side(len_a) + one_side(len_b)


def rds(a: RankedList, b: RankedList) -> RdsResult:
    """Raw distance, worst case, normalized distance in [0,1] and similarity."""
    raw = rds_raw(a, b)
    max_possible = rds_max(len(a), len(b))
    normalized = min(1.0, max(0.0, raw / max_possible))
    return RdsResult(
        raw=raw,
        max_possible=max_possible,
        normalized=normalized,
        similarity=1.0 - normalized,
    )


def _common_ranks(a: RankedList, b: RankedList) -> tuple[list[int], list[int]]:
    """Ranks of the shared items re-ranked within the intersection.

    Returns two aligned rank vectors (1-based), item order following list a.
    """
    set_b = set(b.items)
    common = [item for item in a.items if item in set_b]
    rank_in_b = {item: r for r, item in enumerate((i for i in b.items if i in set(common)), 1)}
    ra = list(range(1, len(common) + 1))
    rb = [rank_in_b[item] for item in common]
    return ra, rb


def kendall_tau(a: RankedList, b: RankedList) -> MetricOutcome:
    """Kendall tau over the common items: (concordant - discordant) / C(k,2)."""
    ra, rb = _common_ranks(a, b)
    k = len(ra)
    if k < 2:
        return MetricOutcome(None, k)
    concordant = discordant = 0
    for i in range(k):
        for j in range(i + 1, k):
            sign = (ra[i] - ra[j]) * (rb[i] - rb[j])
            if sign > 0:
                concordant += 1
            else:
                discordant += 1
    return MetricOutcome((concordant - discordant) / (k * (k - 1) / 2), k)


def tau_ap(reference: RankedList, other: RankedList) -> MetricOutcome:
    """AP rank correlation of ``other`` against ``reference`` over common items.

    (2/(k-1)) * sum_{i=2..k} C(i)/(i-1) - 1, where i walks positions of
    ``other`` (restricted to the intersection) and C(i) counts items placed
    above position i in ``other`` that are also above item i in ``reference``.
    Asymmetric by definition; see ``tau_ap_symmetric`` for the averaged form.
    """
    ref_set = set(reference.items)
    other_common = [item for item in other.items if item in ref_set]
    other_set = set(other_common)
    ref_rank = {
        item: r
        for r, item in enumerate((i for i in reference.items if i in other_set), 1)
    }
    k = len(other_common)
    if k < 2:
        return MetricOutcome(None, k)
    total = 0.0
    for i in range(2, k + 1):
        item = other_common[i - 1]
        above = other_common[: i - 1]
        c_i = sum(1 for x in above if ref_rank[x] < ref_rank[item])
        total += c_i / (i - 1)
    return MetricOutcome(2.0 / (k - 1) * total - 1.0, k)


def tau_ap_symmetric(a: RankedList, b: RankedList) -> MetricOutcome:
    """Mean of the two AP-correlation directions."""
    ab = tau_ap(a, b)
    ba = tau_ap(b, a)
    if not (ab.defined and ba.defined):
        return MetricOutcome(None, ab.support)
    return MetricOutcome((ab.value + ba.value) / 2.0, ab.support)


def spearman_rho(a: RankedList, b: RankedList) -> MetricOutcome:
    """Spearman rank correlation over the common items (re-ranked, no ties):
    1 - 6*sum(d^2) / (k(k^2-1))."""
    ra, rb = _common_ranks(a, b)
    k = len(ra)
    if k < 2:
        return MetricOutcome(None, k)
    d2 = sum((x - y) ** 2 for x, y in zip(ra, rb))
    return MetricOutcome(1.0 - 6.0 * d2 / (k * (k * k - 1)), k)


def with_appended_missing(a: RankedList, b: RankedList) -> tuple[RankedList, RankedList]:
    """Extend each list with the other's missing items (in their foreign order).

    This is the naive fix for items absent from one list; comparing the
    extended lists with a position-blind correlation shows why it fails.
    """
    set_a, set_b = set(a.items), set(b.items)
    a_ext = a.items + tuple(item for item in b.items if item not in set_a)
    b_ext = b.items + tuple(item for item in a.items if item not in set_b)
    return RankedList(a_ext), RankedList(b_ext)


def pearson(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float]:
    """Sample Pearson r and two-sided p-value (t-distribution, n-2 dof)."""
    if len(xs) != len(ys):
        raise ValueError("sequences must have equal length")
    if len(xs) < 3:
        raise ValueError("need at least 3 observations")
    if len(set(map(float, xs))) < 2 or len(set(map(float, ys))) < 2:
        raise ValueError("inputs must have nonzero variance")
    r, p = stats.pearsonr(xs, ys)
    return float(r), float(p)
