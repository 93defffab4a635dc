"""
Mapping a transition semigroup into W>=6(n)
===========================================

``phi`` sends each element of B_bf(n) to W>=6(n). Elements already in W>=6
are fixed; the others are sorted into cases by the shape of their digraph and
rebuilt. Inside the transition semigroup of one minimal bifix-free DFA the
map is injective for n >= 8, which bounds the syntactic complexity.
"""
import random
import warnings
from collections import Counter

from bifix import automata, phimap, semigroups
from bifix.transmap import Transformation

for images in ([1, 2, 7, 7, 7, 7, 7, 7], [1, 2, 6, 7, 7, 7, 7, 7], [1, 7, 2, 3, 7, 7, 7, 7]):
    t = Transformation(images)
    s, label, ctx = phimap.phi(t, with_case=True)
    print(f"{images} -> case {label}: {list(s.images)}")

# random minimal bifix-free DFAs with 8 states
rng = random.Random(1)
labels = Counter()
for _ in range(20):
    d = automata.random_bifix_dfa(8, rng.randint(2, 4), rng)
    T = automata.transition_semigroup(d)
    rep = phimap.audit_injectivity(T)
    labels.update(rep.labels)
    print(f"|T| = {len(T):4d}  injective {rep.injective}  colliding pair {rep.has_colliding_pair}"
          f"  strictly below bound {rep.strict_bound}")
print("cases seen:", dict(sorted(labels.items())))

# On an arbitrary subset of B_bf the map need not be injective
with warnings.catch_warnings():
    warnings.simplefilter("ignore", phimap.SmallNWarning)
    rep = phimap.audit_injectivity(semigroups.enumerate_bbf(6))
print("all of B_bf(6):", len({c[0] for c in rep.collisions}), "images with several preimages")
