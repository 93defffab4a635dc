"""
Uniqueness of the largest semigroups for small n
================================================

Two elements of B_bf(n) conflict when the semigroup they generate leaves
B_bf(n), has a pair of middle states that is both colliding and focused, or
makes every pair colliding or every pair focused. A candidate survives a round
only if its compatible partners could still form a semigroup as large as the
known maximum; a greedy matching in the conflict graph bounds that.
"""
from bifix import conflicts

for n in range(3, 8):
    trace = conflicts.prune(n)
    print(f"n={n}: threshold {trace.threshold}, sizes {list(trace.sizes)}")

print("pair reasons at n=7:", trace.reasons)

# the weaker per-pair reading of the third reason prunes more in round one
print("per-pair reading, n=7:", list(conflicts.prune(7, per_pair=True).sizes))

print("greedy matching on the path a-b-c-d:",
      conflicts.maximal_matching("abcd", [("a", "b"), ("b", "c"), ("c", "d")]))
