"""Classify a semantically identical query pair by the superficial difference
that distinguishes its two strings.

Eight closed categories cover the ways such pairs diverge (prepositions,
abbreviations, singular/plural, word order, articles, punctuation, spacing,
connector characters); anything else is Unclassified and lands in an
overflow report for manual triage.

``classify`` applies minimal-transform tests in a fixed precedence order,
from the most superficial transform to the most structural, and returns the
first category whose single transform makes the two strings equal. A pair
that needs two transforms at once (say reordered *and* abbreviated) is
Unclassified: labels stay auditable. Both strings are casefolded first; a
pair differing only in case is Unclassified (case is not one of the eight
classes). Classification is symmetric in the two queries.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from collections import Counter
from typing import Iterable, Mapping, Sequence

from .normalize import (
    ARTICLES,
    CONJUNCTIONS,
    NormalizationConfig,
    default_config,
    raw_tokens,
)


class Label(enum.Enum):
    C1 = "preposition"
    C2 = "abbreviation"
    C3 = "singular_plural"
    C4 = "word_order"
    C5 = "article"
    C6 = "punctuation"
    C7 = "space"
    C8 = "word_connection"
    UNCLASSIFIED = "unclassified"


def _prepositions(cfg: NormalizationConfig) -> frozenset[str]:
    return frozenset(cfg.stopwords - ARTICLES - CONJUNCTIONS)


_SPACES = re.compile(r"\s+")
_X_CONNECTOR = re.compile(r"(?<=[0-9a-z])x(?=[0-9a-z])")


def _strip_spaces(s: str) -> str:
    return _SPACES.sub("", s)


def _strip_punct(s: str) -> str:
    return "".join(ch for ch in s if ch.isalnum() or ch.isspace())


def _connector_tokens(s: str) -> tuple[list[str], bool]:
    mapped = s.replace("+", " ")
    mapped = _X_CONNECTOR.sub(" ", mapped)
    return mapped.split(), mapped != s


def _drop_words(tokens: list[str], words: frozenset[str]) -> tuple[list[str], bool]:
    kept = [t for t in tokens if t not in words]
    return kept, len(kept) != len(tokens)


def _fold_plural(token: str, irregulars: Mapping[str, str]) -> str:
    if token in irregulars:
        return irregulars[token]
    if token.endswith("ies") and len(token) > 4:
        return token[:-3] + "y"
    if token.endswith("sses"):
        return token[:-2]
    if token.endswith("es") and len(token) > 3 and (
        token[-3] in "sxz" or token[-4:-2] in ("ch", "sh")
    ):
        return token[:-2]
    if token.endswith("s") and not token.endswith("ss") and len(token) > 2:
        return token[:-1]
    return token


def classify(q1: str, q2: str, cfg: NormalizationConfig | None = None) -> Label:
    """Label the difference between two distinct raw query strings."""
    cfg = cfg if cfg is not None else default_config()
    if q1 == q2:
        raise ValueError("queries are identical")
    s1, s2 = q1.casefold(), q2.casefold()
    if s1 == s2:
        return Label.UNCLASSIFIED

    if _strip_spaces(s1) == _strip_spaces(s2):
        return Label.C7

    if _strip_punct(s1) == _strip_punct(s2):
        return Label.C6

    t1, changed1 = _connector_tokens(s1)
    t2, changed2 = _connector_tokens(s2)
    if (changed1 or changed2) and t1 == t2:
        return Label.C8

    w1, w2 = s1.split(), s2.split()

    # Dropped-word classes compare multisets: rewriting "dress for women" as
    # "women dress" reorders the remaining tokens as a side effect.
    d1, a_dropped1 = _drop_words(w1, ARTICLES)
    d2, a_dropped2 = _drop_words(w2, ARTICLES)
    if (a_dropped1 or a_dropped2) and Counter(d1) == Counter(d2):
        return Label.C5

    preps = _prepositions(cfg)
    d1, p_dropped1 = _drop_words(w1, preps)
    d2, p_dropped2 = _drop_words(w2, preps)
    if (p_dropped1 or p_dropped2) and Counter(d1) == Counter(d2):
        return Label.C1

    # Abbreviations live at the sub-token level ("30''"), so expand over the
    # mark-aware tokenization rather than whitespace words.
    r1, r2 = raw_tokens(q1, cfg), raw_tokens(q2, cfg)
    e1 = [cfg.abbreviations.get(t, t) for t in r1]
    e2 = [cfg.abbreviations.get(t, t) for t in r2]
    if (e1 != r1 or e2 != r2) and e1 == e2:
        return Label.C2

    f1 = [_fold_plural(t, cfg.irregular_plurals) for t in w1]
    f2 = [_fold_plural(t, cfg.irregular_plurals) for t in w2]
    if (f1 != w1 or f2 != w2) and f1 == f2:
        return Label.C3

    if sorted(w1) == sorted(w2):
        return Label.C4

    return Label.UNCLASSIFIED


@dataclass(frozen=True)
class TaxonomyReport:
    """Per-label counts over a pair corpus, plus the unclassified overflow."""

    counts: dict[Label, int]
    total: int
    overflow: tuple[tuple[str, str], ...]

    def rate(self, label: Label) -> float:
        return self.counts[label] / self.total if self.total else 0.0

    def to_csv(self) -> str:
        lines = ["label,count,rate"]
        for label in Label:
            lines.append(f"{label.name},{self.counts[label]},{self.rate(label):.6f}")
        return "\n".join(lines) + "\n"


def _as_strings(pair) -> tuple[str, str]:
    if isinstance(pair, tuple):
        return pair[0], pair[1]
    return pair.q1, pair.q2


def classify_corpus(
    pairs: Iterable, cfg: NormalizationConfig | None = None
) -> TaxonomyReport:
    """Classify every pair and tabulate label frequencies.

    Accepts (q1, q2) tuples or any objects with q1/q2 attributes. Unclassified
    pairs are collected (in input order) for manual triage, never dropped.
    """
    cfg = cfg if cfg is not None else default_config()
    counts = {label: 0 for label in Label}
    overflow: list[tuple[str, str]] = []
    total = 0
    for pair in pairs:
        q1, q2 = _as_strings(pair)
        label = classify(q1, q2, cfg)
        counts[label] += 1
        total += 1
        if label is Label.UNCLASSIFIED:
            overflow.append((q1, q2))
    if total == 0:
        raise ValueError("no pairs to classify")
    return TaxonomyReport(counts=counts, total=total, overflow=tuple(overflow))
