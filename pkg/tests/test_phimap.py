import random
import warnings
from collections import Counter

import pytest

from bifix import automata, phimap, semigroups
from bifix.errors import PreconditionError
from bifix.phimap import CaseLabel, SmallNWarning, audit_injectivity, classify, phi, sentinel
from bifix.transmap import Transformation, analyze, cycle_states, in_degrees, tree_of

pytestmark = pytest.mark.filterwarnings("ignore::bifix.phimap.SmallNWarning")

# labels whose constructions are argued without the single-orbit-or-tree property
NO_ORBIT_PROPERTY = {"2.5.1", "2.5.2", "3.4.1"}


def T(*images):
    return Transformation(images)


def test_label_type_validation():
    assert str(CaseLabel("2.4.3", "ii")) == "2.4.3(ii)"
    assert CaseLabel("3.5.1").supercase == 3
    with pytest.raises(ValueError):
        CaseLabel("2.6")
    with pytest.raises(ValueError):
        CaseLabel("2.4.3")
    with pytest.raises(ValueError):
        CaseLabel("2.2", "i")
    assert len(phimap.LABELS) == 23


def test_supercase_one_is_identity():
    W = semigroups.enumerate_wge6(8)
    rng = random.Random(1)
    for t in rng.sample(list(W), 300):
        label, _ = classify(t)
        assert label.label == "1" and phi(t) == t


def test_case_2_2_example():
    t = T(1, 2, 7, 7, 7, 7, 7, 7)
    label, ctx = classify(t)
    assert label == CaseLabel("2.2") and (ctx.p, ctx.k) == (1, 1)
    s = phi(t)
    assert s == T(7, 1, 1, 7, 7, 7, 7, 7)
    assert in_degrees(s)[1] == 2 and s[1] == 1


def test_case_3_5_1_example():
    t = T(1, 2, 6, 7, 7, 7, 7, 7)
    assert classify(t)[0] == CaseLabel("3.5.1")
    assert phi(t) == T(6, 1, 1, 7, 7, 7, 7, 7)


def test_chain_to_final_with_nothing_else_is_supercase_one():
    assert classify(T(1, 6, 7, 7, 7, 7, 7, 7))[0].label == "1"


def test_preconditions_and_warning():
    with pytest.raises(PreconditionError):
        classify(T(1, 2, 3, 4, 4))
    with pytest.raises(PreconditionError):
        classify(T(1, 1, 7, 7, 7, 7, 7, 7))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        phi(T(1, 2, 6, 6, 6, 6, 6))
    assert any(issubclass(w.category, SmallNWarning) for w in caught)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        phi(T(1, 2, 7, 7, 7, 7, 7, 7))


def test_case_2_3_distinguishes_fixed_point_from_swap():
    """A DFA containing both a Case 2.3 and a Case 2.1 letter needs distinct images."""
    t = T(1, 7, 2, 3, 7, 7, 7, 7)
    t_hat = T(1, 7, 3, 2, 7, 7, 7, 7)
    assert classify(t)[0].label == "2.3"
    assert classify(t_hat)[0].label == "2.1"
    d = automata.Dfa(8, (t, t_hat, T(5, 4, 3, 6, 3, 1, 7, 7)), 0, {6})
    assert automata.is_minimal(d) and automata.is_bifix_free(d).is_bifix
    S = automata.transition_semigroup(d)
    assert len(S) == 33
    assert phi(t) != phi(t_hat)
    assert audit_injectivity(S).injective


def _orbit_or_tree(s, changed):
    if not changed:
        return True
    dec = analyze(s)
    if len({dec.orbit_id[q] for q in changed}) == 1:
        return True
    cyc = cycle_states(s)
    return any(changed <= tree_of(s, r) for r in range(s.n) if r not in cyc)


def _check_case_shape(t, s, label):
    cyc = cycle_states(s)
    deg = in_degrees(s)
    if label == "2.3":
        assert len(cyc) == 2
        assert sorted(deg[q] for q in cyc) == [1, 2]
    elif label == "2.4.5":
        assert not cyc
        assert max(deg[q] for q in range(1, s.n - 1) if s[q] == q) >= 3
    elif label == "3.2.4":
        dec = analyze(s)
        assert sum(dec.is_cycle(i) for i in range(len(dec.cores))) == 1


@pytest.mark.parametrize("n", [6, 7])
def test_per_case_properties_on_all_of_bbf(n, request):
    B = request.getfixturevalue(f"bbf{n}")
    W = semigroups.enumerate_wge6(n)
    E, F = n - 1, n - 2
    seen = Counter()
    for t in B:
        s, label, _ = phi(t, with_case=True)
        seen[label.label] += 1
        assert s in W
        assert (s == t) == (label.label == "1")
        if label.supercase == 2:
            assert s[0] == E
        elif label.supercase == 3:
            assert s[0] == F
        _check_case_shape(t, s, label.label)
        if n == 7 and label.label not in NO_ORBIT_PROPERTY:
            assert _orbit_or_tree(s, phimap.changed_middle_states(t, s)), (t, label)
    if n == 7:
        assert set(seen) == set(phimap.LABELS)


def test_arbitrary_subsets_may_collide_and_are_reported(bbf6):
    rep = audit_injectivity(bbf6)
    assert not rep.injective and rep.image_in_wge6
    # one record per preimage beyond the first
    assert len(rep.collisions) == len(bbf6) - len({phi(t) for t in bbf6}) == 126
    assert len({c[0] for c in rep.collisions}) == 83
    s, t1, l1, t2, l2 = rep.collisions[0]
    assert phi(t1) == phi(t2) == s and t1 != t2


def test_audit_wge6_8_is_identity():
    rep = audit_injectivity(semigroups.enumerate_wge6(8))
    assert rep.injective and rep.size == 24743 and rep.labels == {"1": 24743}
    assert rep.has_colliding_pair is False and rep.ok


def test_sentinel_shape():
    s = sentinel(8, 1, 2)
    assert semigroups.in_wge6(s)
    assert s == T(7, 2, 2, 2, 5, 4, 7, 7)
    with pytest.raises(PreconditionError):
        sentinel(7, 1, 2)


def test_seeded_random_audits():
    rng = random.Random(99)
    for _ in range(25):
        d = automata.random_bifix_dfa(8, rng.randint(2, 4), rng)
        S = automata.transition_semigroup(d)
        rep = audit_injectivity(S)
        assert rep.ok, rep.as_dict()
        assert len(S) <= semigroups.wge6_size(8)
