"""
The largest semigroups and the witness automaton
================================================

For n >= 6 the largest transition semigroup of a bifix-free language with n
quotients is W>=6(n); for n <= 5 it is W<=5(n). The witness DFA W(n) reaches
the first one with the smallest possible alphabet.
"""
import math

from bifix import semigroups as sg
from bifix.automata import transition_semigroup

print(" n  |B_bf|  |W>=6|  |W<=5|  formula")
for n in range(3, 8):
    print(f"{n:2d} {len(sg.enumerate_bbf(n)):7d} {len(sg.enumerate_wge6(n)):7d} "
          f"{len(sg.enumerate_wle5(n)):7d} {sg.wge6_size(n):8d}")

for n in (4, 5, 6, 7):
    W = sg.witness_dfa(n)
    T = transition_semigroup(W)
    print(f"W({n}): {W.alphabet_size} letters generate {len(T)} elements,"
          f" equal to W>=6({n}): {T == sg.enumerate_wge6(n)}")

# Irreducible elements (not a product of two members) must be letters of any
# generating alphabet. For W<=5 there are (n-2)! of them.
for n in (5, 6):
    irr = sg.irreducible_elements(sg.enumerate_wle5(n))
    print(f"W<=5({n}): {len(irr)} irreducible, (n-2)! = {math.factorial(n - 2)}")

# For W>=6 the witness alphabet is larger than T \ T*T: the letters
# (0 -> n-1)(i -> n-2)(n-2 -> n-1) factor through another member, yet no
# letter of the alphabet can be dropped.
for n in (5, 6):
    letters = sg.witness_letters(n)
    irr = sg.irreducible_elements(sg.enumerate_wge6(n))
    print(f"W>=6({n}): alphabet {len(letters)}, irreducible {len(irr)},"
          f" redundant letters {len(sg.redundant_generators(letters))}")

# the pair census that separates the two families
for name, T in [("W>=6(6)", sg.enumerate_wge6(6)), ("W<=5(5)", sg.enumerate_wle5(5))]:
    st = sg.pair_statuses(T)
    print(name, "colliding:", sum(s.colliding for s in st), "focused:", sum(s.focused for s in st),
          "of", len(st), "pairs")
