#!/usr/bin/env python3
"""The full desk-scale pipeline on a synthetic search log: generate, parse,
filter, pair, score, and report.

Run: python demos/log_pipeline.py
"""

import io

from rankrobust import (
    apply_filters,
    classify_corpus,
    evaluate_pairs,
    gen_log,
    histogram,
    normalize_query,
    parse_log,
    split_weeks,
    tps_pairs,
)

# 1. A two-week log for 150 query concepts. Each concept becomes a few query
#    variants ("battery aa" / "aa battery" style) sharing one normalized key
#    and one ground-truth ranking; "jitter" noise makes weekly observations
#    wobble around that truth.
log_text, truth_text = gen_log(150, 2, noise="jitter", seed=42)
print(f"log: {len(log_text.splitlines())} lines, "
      f"truth sidecar: {len(truth_text.splitlines())} lines")

# 2. Parse and filter one week: locale allow-list, bottom-20% frequency cut,
#    top-20 lists only, top-3 query variants per key group.
parsed = parse_log(io.StringIO(log_text))
print(f"parsed {len(parsed.records)} records, {len(parsed.malformed)} malformed")
week_records = next(iter(split_weeks(parsed.records).values()))
ds = apply_filters(week_records)
print(f"week {ds.week}: {len(ds.rankings)} queries survive the filters")

# 3. Queries sharing a key form semantically identical pairs.
pairs = tps_pairs(ds)
print(f"{len(pairs)} same-key pairs, e.g.:")
for pair in pairs[:3]:
    key = normalize_query(pair.q1).key
    print(f"   {pair.q1!r} ~ {pair.q2!r}   (key: {key!r})")

# 4. Score every pair: 1.0 means the two queries ranked identically.
results, skipped = evaluate_pairs(pairs, ds)
print(f"\nscored {len(results)} pairs ({skipped} skipped)")
worst = min(results, key=lambda pr: pr[1].similarity)
print(f"least robust pair: {worst[0].q1!r} vs {worst[0].q2!r} "
      f"similarity={worst[1].similarity:.3f}")

# 5. The distance histogram: how much inconsistency does the system show?
rep = histogram([res for _, res in results])
print("\nnormalized distance histogram (rate per bin):")
for lo, hi, count, rate in rep.bins:
    bar = "#" * round(rate * 40)
    print(f"  [{lo:.1f}, {hi:.1f}{']' if hi == 1 else ')'} {count:5d}  {bar}")
print(f"mean={rep.mean:.3f} std={rep.std:.3f}")

# 6. What kinds of superficial differences are these pairs made of?
report = classify_corpus(pairs)
print("\npair taxonomy:")
for line in report.to_csv().strip().splitlines()[1:]:
    print("  " + line)
print(f"({len(report.overflow)} multi-difference pairs in the overflow list)")
