"""Deterministic synthetic data: perturbed rankings, labeled query pairs,
and multi-week search logs with known ground truth.

Everything is a pure function of its spec and seed (string-seeded Mersenne
Twister, so results do not depend on hash randomization) and serves as the
brute-force oracle bed for the metric, taxonomy and ensemble properties.

Log noise kinds:

- ``identity``: every weekly observation equals the ground-truth ranking.
- ``shuffle``: each (query, week) observation is a fresh random selection
  and ordering of ``list_len`` items from the query's candidate pool
  (``shuffle_pool_factor`` times the list length). Permuting a fixed item
  set cannot push the normalized distance much past 0.1 at realistic list
  lengths - missing items dominate the worst case - so item turnover is what
  drives pairs into the top distance bins.
- ``jitter``: each week, each ground-truth item shows with a per-query
  visibility probability drawn from ``jitter_visibility_range``; shown items
  keep their truth order up to Gaussian rank wobble
  (``jitter_sigma_range``), and the hidden slots fill with fresh items
  sampled from the query's extras pool. High-visibility queries wobble
  gently, low-visibility queries churn most of their list every week, which
  spreads pair distances across the full histogram while keeping a
  persistent core that position-averaging across weeks can recover - the
  regime ensemble smoothing improves.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from datetime import date, timedelta
from typing import Sequence

from .metrics import RankedList
from .normalize import NormalizationConfig, default_config
from .taxonomy import Label

PERTURBATION_KINDS = frozenset(
    {"identity", "adjacent_swap", "top_swap", "tail_replace", "truncate", "shuffle"}
)

_PARAM_KINDS = frozenset({"adjacent_swap", "tail_replace", "truncate"})


@dataclass(frozen=True)
class PerturbationSpec:
    """A deterministic edit of one ranked list."""

    kind: str
    param: int | None = None
    seed: int = 0
    list_len: int | None = None

    def __post_init__(self):
        if self.kind not in PERTURBATION_KINDS:
            raise ValueError(f"unknown perturbation kind {self.kind!r}")
        if self.kind in _PARAM_KINDS and self.param is None:
            raise ValueError(f"{self.kind} needs a parameter")


def _fresh_items(existing: Sequence[str], count: int) -> list[str]:
    """Item ids not present in ``existing``: the next integers when all ids
    are integers (so <1,2,3,4> grows 5, 6, ...), otherwise new# ids."""
    taken = set(existing)
    out: list[str] = []
    try:
        start = max(int(x) for x in existing) + 1
        candidate = start
        while len(out) < count:
            if str(candidate) not in taken:
                out.append(str(candidate))
            candidate += 1
    except ValueError:
        n = 1
        while len(out) < count:
            item = f"new{n}"
            if item not in taken:
                out.append(item)
            n += 1
    return out


def perturb(ranked: RankedList, spec: PerturbationSpec) -> RankedList:
    """Apply the spec to a copy of the list. Same spec, same output."""
    items = list(ranked.items)
    n = len(items)
    if spec.list_len is not None and spec.list_len != n:
        raise ValueError(f"spec expects length {spec.list_len}, list has {n}")
    if spec.kind == "identity":
        return RankedList(tuple(items))
    if spec.kind == "adjacent_swap":
        j = spec.param
        if not 1 <= j <= n - 1:
            raise ValueError(f"swap position {j} out of range for length {n}")
        items[j - 1], items[j] = items[j], items[j - 1]
        return RankedList(tuple(items))
    if spec.kind == "top_swap":
        if n < 2:
            raise ValueError("top_swap needs at least 2 items")
        items[0], items[1] = items[1], items[0]
        return RankedList(tuple(items))
    if spec.kind == "tail_replace":
        m = spec.param
        if not 1 <= m <= n:
            raise ValueError(f"cannot replace {m} of {n} items")
        return RankedList(tuple(items[: n - m] + _fresh_items(items, m)))
    if spec.kind == "truncate":
        m = spec.param
        if not 1 <= m <= n - 1:
            raise ValueError(f"cannot truncate {m} of {n} items")
        return RankedList(tuple(items[: n - m]))
    # shuffle
    rng = random.Random(f"perturb:{spec.seed}")
    rng.shuffle(items)
    return RankedList(tuple(items))


# Content words only: no stopwords, no abbreviation variants or canonicals,
# no digits, nothing ending in s, and pairwise-distinct stems (checked in
# tests) so that distinct word sets always produce distinct keys.
DEFAULT_VOCAB: tuple[str, ...] = (
    "apron", "backpack", "battery", "blanket", "bottle", "bracelet", "candle",
    "coat", "cushion", "drill", "gown", "guitar", "hammer", "heel", "helmet",
    "jacket", "kettle", "keyboard", "ladder", "lamp", "lantern", "marble",
    "mirror", "monitor", "mug", "notebook", "pillow", "planter", "purple",
    "red", "ring", "rug", "sandal", "shirt", "sofa", "speaker", "stool",
    "teapot", "wallet", "watch",
)

_PLURAL_TO_SINGULAR_HINTS = {v: k for k, v in
                             {"men": "man", "women": "woman", "children": "child",
                              "feet": "foot", "teeth": "tooth"}.items()}


@dataclass(frozen=True)
class SynthPairSpec:
    """Recipe for one labeled query pair."""

    label: Label
    base: str | None = None
    vocabulary: tuple[str, ...] = DEFAULT_VOCAB
    seed: int = 0
    frequency_range: tuple[int, int] = (10, 1000)

    def __post_init__(self):
        if not self.vocabulary:
            raise ValueError("vocabulary must not be empty")
        if self.label is Label.UNCLASSIFIED:
            raise ValueError("cannot generate an unclassified pair")


def _pluralize(token: str) -> str:
    if token in _PLURAL_TO_SINGULAR_HINTS:
        return _PLURAL_TO_SINGULAR_HINTS[token]
    if token.endswith(("s", "x", "z", "ch", "sh")):
        return token + "es"
    if token.endswith("y") and len(token) > 1 and token[-2] not in "aeiou":
        return token[:-1] + "ies"
    return token + "s"


def _transform(tokens: list[str], label: Label, rng: random.Random,
               cfg: NormalizationConfig, connector: str | None = None) -> tuple[str, str]:
    """Build (q1, q2) from base tokens so that classify(q1, q2) == label."""
    base = " ".join(tokens)
    if label is Label.C1:
        if len(tokens) < 2:
            raise ValueError("preposition pairs need at least 2 tokens")
        q1 = " ".join(tokens[:-1]) + " for " + tokens[-1]
        q2 = " ".join([tokens[-1]] + tokens[:-1])
        return q1, q2
    if label is Label.C2:
        variant, canonical = rng.choice(sorted(cfg.abbreviations.items()))
        if variant.isalnum():
            return f"{base} 12 {variant}", f"{base} 12 {canonical}"
        return f"{base} 30{variant}", f"{base} 30 {canonical}"
    if label is Label.C3:
        for i, tok in enumerate(tokens):
            if tok.isalpha() and not tok.endswith("s"):
                plural = tokens.copy()
                plural[i] = _pluralize(tok)
                return base, " ".join(plural)
        raise ValueError(f"no pluralizable token in {base!r}")
    if label is Label.C4:
        if len(tokens) < 2 or tokens == tokens[::-1]:
            raise ValueError("word-order pairs need 2+ tokens that change on reversal")
        return base, " ".join(tokens[::-1])
    if label is Label.C5:
        return base, "the " + base
    if label is Label.C6:
        return base, base + rng.choice(".!")
    if label is Label.C7:
        for i in range(len(tokens) - 1):
            if tokens[i].isdigit() and tokens[i + 1].isalpha():
                glued = tokens[: i] + [tokens[i] + tokens[i + 1]] + tokens[i + 2:]
                return base, " ".join(glued)
        return f"{base} 1 mm", f"{base} 1mm"
    if label is Label.C8:
        if len(tokens) < 2:
            raise ValueError("connector pairs need at least 2 tokens")
        joiner = connector if connector is not None else rng.choice("+x")
        return base, joiner.join(tokens)
    raise ValueError(f"no transform for {label}")


def gen_pair(spec: SynthPairSpec,
             cfg: NormalizationConfig | None = None) -> tuple[str, str, Label]:
    """Emit a query, its transformed twin, and the ground-truth label."""
    cfg = cfg if cfg is not None else default_config()
    rng = random.Random(f"genpair:{spec.seed}")
    if spec.base is not None:
        tokens = spec.base.split()
        if not tokens:
            raise ValueError("base query is empty")
    else:
        tokens = rng.sample(spec.vocabulary, rng.choice((2, 3)))
    q1, q2 = _transform(tokens, spec.label, rng, cfg)
    return q1, q2, spec.label


# Transforms that leave the normalized key of the base unchanged, so a base
# query and several transformed twins all land in one key group. C2 and C7
# may append tokens to *both* sides, which still pairs them with each other
# but not with the bare base.
KEY_PRESERVING_LABELS = (Label.C1, Label.C3, Label.C4, Label.C5, Label.C6, Label.C8)
AUGMENTING_LABELS = (Label.C2, Label.C7)

LOG_NOISE_KINDS = ("identity", "shuffle", "jitter")


def gen_log(
    n_queries: int,
    weeks: int,
    noise: str = "identity",
    seed: int = 0,
    *,
    list_len: int = 20,
    start_week: date = date(2023, 4, 15),
    locale: str = "en-US",
    vocabulary: tuple[str, ...] = DEFAULT_VOCAB,
    frequency_range: tuple[int, int] = (10, 1000),
    third_variant_rate: float = 0.4,
    shuffle_pool_factor: int = 20,
    jitter_pool_factor: int = 10,
    jitter_visibility_range: tuple[float, float] = (0.35, 1.0),
    jitter_sigma_range: tuple[float, float] = (0.5, 6.0),
) -> tuple[str, str]:
    """Generate a multi-week log plus its ground-truth sidecar.

    Returns ``(log_text, truth_text)``. The log parses through the ingest
    format; the sidecar has one ``query<TAB>item_id<TAB>true_rank`` row per
    variant query and ground-truth item. Each of the ``n_queries`` concepts
    becomes 2-3 query variants sharing one normalized key, a shared
    ground-truth ranking, and one weekly search frequency, so the standard
    filters keep or drop a concept whole.
    """
    if n_queries < 1 or weeks < 1 or list_len < 1:
        raise ValueError("n_queries, weeks and list_len must be positive")
    if noise not in LOG_NOISE_KINDS:
        raise ValueError(f"unknown noise kind {noise!r}; pick from {LOG_NOISE_KINDS}")
    cfg = default_config()
    rng = random.Random(f"genlog:{seed}")

    combos = list(itertools.combinations(vocabulary, 2)) + list(
        itertools.combinations(vocabulary, 3)
    )
    if n_queries > len(combos):
        raise ValueError(f"vocabulary supports at most {len(combos)} query concepts")
    rng.shuffle(combos)

    if noise == "shuffle":
        pool_len = list_len * shuffle_pool_factor
    elif noise == "jitter":
        pool_len = list_len * jitter_pool_factor
    else:
        pool_len = list_len

    week_dates = [start_week + timedelta(weeks=w) for w in range(weeks)]
    concepts = []  # (variants, truth_items, extras, frequency, visibility, sigma)
    for i in range(n_queries):
        tokens = list(combos[i])
        rng.shuffle(tokens)
        base = " ".join(tokens)
        first = rng.choice(sorted(Label, key=lambda l: l.name)[:8])
        if first in AUGMENTING_LABELS:
            q1, q2 = _transform(tokens.copy(), first, rng, cfg)
            variants = [q1, q2]
        else:
            connector = "+" if first is Label.C8 else None
            _, twin = _transform(tokens.copy(), first, rng, cfg, connector=connector)
            variants = [base, twin]
            if rng.random() < third_variant_rate:
                second = rng.choice(
                    [l for l in KEY_PRESERVING_LABELS if l is not first]
                )
                _, third = _transform(tokens.copy(), second, rng, cfg, connector="+")
                if third not in variants:
                    variants.append(third)
        pool = [f"I{i:05d}R{r:03d}" for r in range(1, pool_len + 1)]
        truth = pool[:list_len]
        extras = pool[list_len:]
        frequency = rng.randint(*frequency_range)
        concept_rng = random.Random(f"{seed}:concept:{i}")
        visibility = concept_rng.uniform(*jitter_visibility_range)
        sigma = concept_rng.uniform(*jitter_sigma_range)
        concepts.append((variants, truth, extras, frequency, visibility, sigma))

    def observed(i: int, v: int, w: int) -> list[str]:
        _, truth, extras, _, visibility, sigma = concepts[i]
        if noise == "identity":
            return truth
        obs_rng = random.Random(f"{seed}:obs:{i}:{v}:{w}")
        if noise == "shuffle":
            return obs_rng.sample(truth + extras, list_len)
        shown = [
            (rank, item)
            for rank, item in enumerate(truth, 1)
            if obs_rng.random() < visibility
        ]
        keyed = [(rank + obs_rng.gauss(0.0, sigma), item) for rank, item in shown]
        keyed.sort()
        fill = obs_rng.sample(extras, list_len - len(shown))
        return [item for _, item in keyed] + fill

    log_lines: list[str] = []
    for w, week in enumerate(week_dates):
        for i, (variants, _, _, frequency, _, _) in enumerate(concepts):
            for v, query in enumerate(variants):
                for rank, item in enumerate(observed(i, v, w), 1):
                    log_lines.append(
                        f"{week.isoformat()}\t{locale}\t{query}\t{item}"
                        f"\t{rank:.1f}\t{frequency}"
                    )

    truth_lines: list[str] = []
    for variants, truth, _, _, _, _ in concepts:
        for query in variants:
            for rank, item in enumerate(truth, 1):
                truth_lines.append(f"{query}\t{item}\t{rank}")

    return "\n".join(log_lines) + "\n", "\n".join(truth_lines) + "\n"
