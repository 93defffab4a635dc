"""
Transformations and their functional digraphs
=============================================

A transformation of {0, ..., n-1} is stored as its image list. Products read
left to right: in ``s * t`` the map ``s`` acts first.
"""
from bifix.transmap import Transformation, analyze, distance, identity, semiconstant, tree_of

s = Transformation([2, 1, 3, 3])
t = Transformation([1, 2, 3, 3])
print("s * t =", (s * t).images)        # state q goes to t[s[q]]
print("t * t =", (t * t).images)
assert identity(4) * t == t == t * identity(4)

# semiconstant maps send a set to one state and fix the rest
print("({1,2} -> 3) on 5 states:", semiconstant({1, 2}, 3, 5).images)

# every functional digraph splits into orbits, each around one cycle or fixed point
u = Transformation([1, 2, 0, 3])
dec = analyze(u)
for orbit, core in zip(dec.orbits, dec.cores):
    kind = "cycle" if len(core) > 1 else "fixed point"
    print(f"orbit {sorted(orbit)} with {kind} {core}")

print("distance 0 -> 3 under t:", distance(t, 0, 3))
print("tree rooted at 2 under t:", sorted(tree_of(t, 2)))
