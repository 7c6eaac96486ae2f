"""Query canonicalization into sorted-token keys.

Two raw queries are treated as semantically identical when they collapse to
the same key. The pipeline, in order:

1. casefold; replace the connector characters ``+`` and ``/`` with spaces
2. keep letters, digits, whitespace and protected mark characters (the
   non-alphanumeric characters appearing in abbreviation variants, e.g. the
   inch marks ``''`` and ``"``); every other code point becomes a space
3. split on whitespace, then split each token into digit / letter / mark
   runs ("24x20" -> "24", "x", "20"; "1mm" -> "1", "mm"); a mark run is kept
   only when it directly follows a digit run inside the same token ("30''")
4. drop lone ``x`` tokens when the query carries digit tokens (dimension
   separators such as "24 x 20"), keeping content words like "xbox" intact
5. expand abbreviations via the config table ("''" -> "inch", "v" -> "volt")
6. drop stopwords, stem the remaining alphabetic tokens (irregular plurals
   plus suffix stripping), drop stopwords once more for stability,
   de-duplicate and sort

The resulting key is stable: normalizing a key's canonical string yields the
same key (a stabilization loop re-runs the pipeline until it is a no-op), and
shuffling the whitespace-delimited tokens of a query never changes its key.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .stemming import IRREGULAR_PLURALS, stem

ARTICLES = frozenset({"a", "an", "the"})

CONJUNCTIONS = frozenset({"and", "or", "but", "nor", "so", "yet"})

# "in" is deliberately absent: the abbreviation table claims it (inch).
DEFAULT_PREPOSITIONS = frozenset({
    "for", "to", "of", "on", "at", "by", "with", "from", "about",
    "into", "onto", "over", "under", "near", "per", "up", "off", "out",
})

DEFAULT_STOPWORDS = ARTICLES | CONJUNCTIONS | DEFAULT_PREPOSITIONS

DEFAULT_ABBREVIATIONS: dict[str, str] = {
    "''": "inch",
    '"': "inch",
    "in": "inch",
    "'": "foot",
    "ft": "foot",
    "v": "volt",
}


@dataclass(frozen=True)
class TpsKey:
    """Sorted normalized tokens plus their canonical single-string form."""

    tokens: tuple[str, ...]

    @property
    def key(self) -> str:
        return " ".join(self.tokens)

    @property
    def is_empty(self) -> bool:
        return not self.tokens


@dataclass(frozen=True)
class NormalizationConfig:
    """Stopword, abbreviation and irregular-plural tables driving the key pipeline."""

    stopwords: frozenset[str] = DEFAULT_STOPWORDS
    abbreviations: Mapping[str, str] = field(
        default_factory=lambda: dict(DEFAULT_ABBREVIATIONS)
    )
    irregular_plurals: Mapping[str, str] = field(
        default_factory=lambda: dict(IRREGULAR_PLURALS)
    )
    use_stemmer: bool = True

    def __post_init__(self):
        for w in self.stopwords:
            if w != w.casefold():
                raise ValueError(f"stopword {w!r} is not lowercase")

    @property
    def mark_chars(self) -> frozenset[str]:
        """Non-alphanumeric characters that may start an abbreviation variant."""
        return frozenset(
            ch for variant in self.abbreviations for ch in variant if not ch.isalnum()
        )


_DEFAULT_CONFIG = NormalizationConfig()


def default_config() -> NormalizationConfig:
    return _DEFAULT_CONFIG


def load_config(path, base: NormalizationConfig | None = None) -> NormalizationConfig:
    """Load a config file: one ``stopword <w>`` / ``abbrev <variant> <canonical>`` /
    ``plural <irregular> <singular>`` directive per line, ``#`` comments allowed.

    Directives extend ``base`` (the default config unless given); an ``abbrev``
    or ``plural`` directive for an existing variant overrides it.
    """
    base = base if base is not None else default_config()
    stopwords = set(base.stopwords)
    abbreviations = dict(base.abbreviations)
    plurals = dict(base.irregular_plurals)
    for lineno, raw_line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        directive = parts[0]
        if directive == "stopword" and len(parts) == 2:
            stopwords.add(parts[1].casefold())
        elif directive == "abbrev" and len(parts) == 3:
            abbreviations[parts[1].casefold()] = parts[2].casefold()
        elif directive == "plural" and len(parts) == 3:
            plurals[parts[1].casefold()] = parts[2].casefold()
        else:
            raise ValueError(f"{path}:{lineno}: bad directive {raw_line!r}")
    return NormalizationConfig(
        stopwords=frozenset(stopwords),
        abbreviations=abbreviations,
        irregular_plurals=plurals,
        use_stemmer=base.use_stemmer,
    )


_CONNECTORS = str.maketrans({"+": " ", "/": " "})


def _split_runs(token: str, marks: frozenset[str]) -> list[str]:
    """Split a token into digit/letter/mark runs, dropping mark runs that do
    not directly follow a digit run (a lone ``''`` means nothing; ``30''`` does)."""
    runs: list[tuple[str, str]] = []  # (class, text)
    for ch in token:
        cls = "d" if ch.isdigit() else ("m" if ch in marks else "a")
        if runs and runs[-1][0] == cls:
            runs[-1] = (cls, runs[-1][1] + ch)
        else:
            runs.append((cls, ch))
    out = []
    for i, (cls, text) in enumerate(runs):
        if cls == "m" and not (i > 0 and runs[i - 1][0] == "d"):
            continue
        out.append(text)
    return out


def raw_tokens(query: str, cfg: NormalizationConfig | None = None) -> list[str]:
    """Tokenize a query (pipeline steps 1-4): casefolded digit/letter/mark
    tokens before abbreviation expansion, stopword removal and stemming."""
    cfg = cfg if cfg is not None else default_config()
    marks = cfg.mark_chars
    s = query.casefold().translate(_CONNECTORS)
    s = "".join(
        ch if (ch.isalnum() or ch.isspace() or ch in marks) else " " for ch in s
    )
    tokens: list[str] = []
    for rough in s.split():
        tokens.extend(_split_runs(rough, marks))
    if "x" not in cfg.abbreviations and any(t.isdigit() for t in tokens):
        tokens = [t for t in tokens if t != "x"]
    return tokens


def _pipeline(query: str, cfg: NormalizationConfig) -> tuple[str, ...]:
    tokens = raw_tokens(query, cfg)
    tokens = [cfg.abbreviations.get(t, t) for t in tokens]
    tokens = [t for t in tokens if t.isalnum()]  # unexpanded marks drop out
    tokens = [t for t in tokens if t not in cfg.stopwords]
    if cfg.use_stemmer:
        tokens = [
            stem(t, cfg.irregular_plurals) if t.isalpha() else t for t in tokens
        ]
        tokens = [t for t in tokens if t not in cfg.stopwords]
    return tuple(sorted(set(tokens)))


def normalize_query(query: str, cfg: NormalizationConfig | None = None) -> TpsKey:
    """Collapse a raw query to its key. Raises ValueError on blank input;
    returns an empty key (``key.is_empty``) when nothing survives the pipeline,
    in which case the query is excluded from pairing."""
    cfg = cfg if cfg is not None else default_config()
    if not query or not query.strip():
        raise ValueError("query is empty")
    tokens = _pipeline(query, cfg)
    # Stabilize: an expanded or stemmed token can itself match a rule
    # (e.g. a custom table mapping onto a stopword); iterate until a no-op.
    for _ in range(3):
        if not tokens:
            break
        again = _pipeline(" ".join(tokens), cfg)
        if again == tokens:
            break
        tokens = again
    return TpsKey(tokens)


def same_tps(q1: str, q2: str, cfg: NormalizationConfig | None = None) -> bool:
    """True iff both queries produce the same non-empty key."""
    k1 = normalize_query(q1, cfg)
    if k1.is_empty:
        return False
    k2 = normalize_query(q2, cfg)
    return not k2.is_empty and k1.tokens == k2.tokens
