import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bifix.errors import DimensionError, DomainError
from bifix.transmap import (
    Transformation,
    analyze,
    assign,
    compose,
    cycle_states,
    decode,
    distance,
    encode,
    fixed_points,
    format_transformations,
    identity,
    in_degree,
    in_degrees,
    parse_transformations,
    semiconstant,
    to_array,
    tree_of,
)


@st.composite
def maps(draw, n=None):
    if n is None:
        n = draw(st.integers(1, 8))
    return Transformation(draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n)))


@st.composite
def triples(draw):
    n = draw(st.integers(1, 8))
    return tuple(draw(maps(n)) for _ in range(3))


def test_composition_is_left_to_right():
    s = Transformation([1, 1, 2])
    t = Transformation([2, 0, 0])
    # q(st) = (qs)t
    assert compose(s, t).images == (0, 0, 0)
    assert (t * s).images == (2, 1, 1)


def test_associativity_on_ten_thousand_triples():
    rng = random.Random(2024)
    for _ in range(10_000):
        n = rng.randint(1, 8)
        a, b, c = (Transformation(rng.randrange(n) for _ in range(n)) for _ in range(3))
        assert (a * b) * c == a * (b * c)


@given(triples())
def test_associativity_property(abc):
    a, b, c = abc
    assert (a * b) * c == a * (b * c)


@given(maps())
def test_identity_is_two_sided(t):
    e = identity(t.n)
    assert e * t == t == t * e


@given(maps(), st.integers(0, 5))
def test_power_matches_repeated_product(t, k):
    expected = identity(t.n)
    for _ in range(k):
        expected = expected * t
    assert t ** k == expected


def test_negative_power_raises():
    with pytest.raises(DomainError):
        Transformation([0, 1]) ** -1


def test_dimension_checks():
    with pytest.raises(DimensionError):
        Transformation([0, 3, 1])
    with pytest.raises(DimensionError):
        Transformation([])
    with pytest.raises(DimensionError):
        compose(identity(2), identity(3))
    with pytest.raises(DimensionError):
        semiconstant({5}, 0, 4)


def test_immutable_and_hashable():
    t = Transformation([1, 0])
    with pytest.raises(AttributeError):
        t.images = (0, 0)
    assert len({t, Transformation((1, 0))}) == 1


def test_semiconstant_and_assign():
    assert semiconstant({0, 2}, 1, 4).images == (1, 1, 1, 3)
    assert semiconstant({2}, 3, 4).images == (0, 1, 3, 3)
    # simultaneous reading: the swap does not chain
    assert assign(3, {0: 1, 1: 0}).images == (1, 0, 2)


def test_orbit_decomposition():
    # 0 -> 1 -> 2 -> 1 and 3 -> 4 -> 4 and 5 fixed
    t = Transformation([1, 2, 1, 4, 4, 5])
    dec = analyze(t)
    assert sorted(map(sorted, dec.orbits)) == [[0, 1, 2], [3, 4], [5]]
    assert set(dec.cores) == {(1, 2), (4,), (5,)}
    assert cycle_states(t) == {1, 2}
    assert fixed_points(t) == [4, 5]
    assert in_degrees(t) == [0, 2, 1, 0, 2, 1]
    assert in_degree(t, 4) == 2


@given(maps())
def test_orbits_partition_and_respect_the_map(t):
    dec = analyze(t)
    seen = set()
    for o in dec.orbits:
        assert not seen & o
        seen |= o
    assert seen == set(range(t.n))
    for q in range(t.n):
        assert dec.orbit_id[q] == dec.orbit_id[t[q]]
    for i, core in enumerate(dec.cores):
        assert dec.is_cycle(i) == (len(core) >= 2)


def test_distance_and_tree():
    t = Transformation([1, 2, 3, 3, 3])
    assert distance(t, 0, 3) == 3
    assert distance(t, 0, 0) == 0
    assert distance(t, 3, 0) is None
    assert tree_of(t, 2) == {0, 1, 2}
    assert tree_of(t, 3) == {0, 1, 2, 3, 4}
    with pytest.raises(DomainError):
        tree_of(Transformation([1, 0]), 0)


@given(maps())
def test_distance_agrees_with_powers(t):
    for q in range(t.n):
        d = distance(t, 0, q)
        if d is not None:
            assert (t ** d)[0] == q
            assert all((t ** i)[0] != q for i in range(d))


@given(st.lists(maps(5), min_size=1, max_size=20))
def test_encode_preserves_key_order_and_round_trips(ts):
    codes = encode(to_array(ts), 5)
    back = decode(codes, 5)
    assert np.array_equal(back, to_array(ts))
    order_codes = sorted(range(len(ts)), key=lambda i: codes[i])
    order_keys = sorted(range(len(ts)), key=lambda i: ts[i].key)
    assert [ts[i] for i in order_codes] == [ts[i] for i in order_keys]


@given(st.lists(maps(4), max_size=10))
def test_line_format_round_trip(ts):
    n, back = parse_transformations(format_transformations(ts, 4))
    assert n == 4 and back == ts


def test_line_format_errors():
    with pytest.raises(ValueError):
        parse_transformations("0 1 2\n")
    with pytest.raises(DimensionError):
        parse_transformations("n=3\n0 1\n")
