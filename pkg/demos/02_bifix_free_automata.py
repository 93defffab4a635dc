"""
Deciding bifix-freeness of a DFA
================================

Prefix-freeness and suffix-freeness are decided on the minimal DFA. When a
check fails the report carries a witness word.
"""
from bifix.automata import Dfa, is_bifix_free, is_minimal, normalize, rename, transition_semigroup
from bifix.semigroups import witness_dfa

# {a}: 0 --a--> 1 (final) --a--> 2 (empty)
single = Dfa(3, ([1, 2, 2],), initial=0, finals={1})
rep = is_bifix_free(single)
print("{a}: prefix-free", rep.is_prefix_free, "suffix-free", rep.is_suffix_free)
print("syntactic complexity:", len(transition_semigroup(single)))

# {a, ab} over letters a=0, b=1: 'a' is a prefix of 'ab'
a_ab = Dfa(4, ([1, 3, 3, 3], [3, 2, 3, 3]), 0, {1, 2})
print("{a, ab}:", is_bifix_free(a_ab).lemma1_witnesses["prefix"])

# {a, ba}: 'a' is a suffix of 'ba'
a_ba = Dfa(4, ([1, 3, 1, 3], [2, 3, 3, 3]), 0, {1})
print("{a, ba}:", is_bifix_free(a_ba).lemma1_witnesses["suffix"])

# normalize relabels so that 0 is initial, n-2 final and n-1 empty
scrambled = rename(witness_dfa(4), [3, 0, 2, 1])
print("scrambled: initial", scrambled.initial, "finals", set(scrambled.finals),
      "minimal", is_minimal(scrambled))
print("normalized letters:", [row.images for row in normalize(scrambled).delta])
