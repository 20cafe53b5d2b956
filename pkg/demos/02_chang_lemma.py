"""Checking Chang's lemma, set by set and exhaustively.

Run: python demos/02_chang_lemma.py
"""
from changcube import chang
from changcube import fourier as fr

# One set: a subcube of codimension 2 in {-1,1}^6 (x_1 = x_2 = +1).
n = 6
A = fr.indicator_from_points(n, [m for m in range(1 << n) if m & 0b11 == 0])
report = chang.verify_chang(A)
print(report)

# The entropy argument, step by step. Subcubes are tight at every step
# except Pinsker's inequality, where ln 2 > 1/2.
trace = chang.proof_trace(A)
for name, value in trace.to_dict().items():
    print(f"{name:>24} = {value:.7f}")

# Every nonempty subset of {-1,1}^4.
summary = chang.exhaustive_verify(4)
print(summary)

# Which sets come closest to the bound? All proper subcubes tie.
best = chang.extremal_search(3)
print("max W1/bound at n=3:", best.max_ratio, "attained by", len(best.reports), "sets")

# Random sets in a larger cube, reproducible from the seed.
sampled = chang.sampled_verify(12, 500, seed=7)
print(sampled.sets_checked, "sets,", sampled.violations, "violations, min slack", sampled.min_slack)

# The level-k inequality, where it applies.
small = fr.indicator_from_points(8, [0, 1, 2])
for k in (1, 2, 3):
    print(chang.level_k_report(small, k))
