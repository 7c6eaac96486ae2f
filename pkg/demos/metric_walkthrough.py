#!/usr/bin/env python3
"""Why classical rank correlations miss ranking inconsistencies, and what the
distance metric in this package does about it.

Walks the three-list comparisons that motivate the metric:

    R1 = <1, 2, 3, 4>     the baseline ranking
    R2 = <1, 2, 4, 3>     a swap at the bottom
    R2'= <2, 1, 3, 4>     the same swap at the top
    R3 = <1, 2, 5, 6>     half the items replaced

Run: python demos/metric_walkthrough.py
"""

from rankrobust import (
    RankedList,
    kendall_tau,
    rds,
    spearman_rho,
    tau_ap,
    with_appended_missing,
)

R1 = RankedList.of(1, 2, 3, 4)
R2 = RankedList.of(1, 2, 4, 3)
R2_TOP = RankedList.of(2, 1, 3, 4)
R3 = RankedList.of(1, 2, 5, 6)


def show(title, pairs):
    print(f"\n{title}")
    print(f"{'lists':>22}  {'kendall':>8} {'tau_ap':>8} {'spearman':>9} {'similarity':>11}")
    for name, a, b in pairs:
        kt = kendall_tau(a, b)
        ta = tau_ap(a, b)
        sr = spearman_rho(a, b)
        res = rds(a, b)
        fmt = lambda m: f"{m.value:8.3f}" if m.defined else "   undef"
        print(f"{name:>22}  {fmt(kt)} {fmt(ta)} {fmt(sr)}  {res.similarity:10.3f}")


print("Every metric agrees identical lists are identical:")
show("-- sanity", [("R1 vs R1", R1, R1)])

# Blind spot 1: rank correlations penalize a swap the same anywhere in the
# list. A top-2 swap should matter more than a bottom-2 swap.
show(
    "-- blind spot 1: where a swap happens",
    [("R1 vs R2 (bottom)", R1, R2), ("R1 vs R2' (top)", R1, R2_TOP)],
)
print("kendall cannot tell the two swaps apart; the similarity column can.")

# Blind spot 2: items present in one list but not the other. Correlations over
# the common items award a perfect 1.0 to lists that disagree on half their
# content.
show(
    "-- blind spot 2: missing items",
    [("R1 vs R1", R1, R1), ("R1 vs R3 (2 replaced)", R1, R3)],
)
print("tau_ap and kendall call R3 a perfect match; the similarity drops hard.")

# The naive fix, appending each list's missing items to the other, creates
# its own artifacts: compare it against the honest swap.
a_ext, b_ext = with_appended_missing(R1, R3)
print("\n-- the appending strategy")
print(f"extended lists: {list(a_ext)} vs {list(b_ext)}")
print(f"tau_ap on appended lists : {tau_ap(a_ext, b_ext).value:.3f}")
print(f"tau_ap on the honest swap: {tau_ap(R1, R2).value:.3f}")
print("appending manufactures discordance instead of measuring absence.")

print("\n-- the similarity ordering this package guarantees")
for name, other in (("identical", R1), ("swap", R2), ("disjoint tail", R3)):
    res = rds(R1, other)
    print(f"R1 vs {name:13}: raw={res.raw:8.4f}  normalized={res.normalized:.4f}"
          f"  similarity={res.similarity:.4f}")
