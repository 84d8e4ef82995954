from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from prefdomains.errors import OrderError
from prefdomains.orders import (
    AlternativeSet,
    LinearOrder,
    adjacent_swaps,
    all_orders,
    is_adjacent,
    kth,
    prefers,
    rank_of,
    swap_at,
    swapped_position,
)

perms = st.integers(min_value=2, max_value=6).flatmap(lambda m: st.permutations(list(range(m))))


def test_alternative_set_validation():
    assert AlternativeSet.standard(3).labels == ("a1", "a2", "a3")
    for bad in [("a",), ("a", "a"), ("a", ""), ("a", "b c")]:
        with pytest.raises(OrderError):
            AlternativeSet(bad)


def test_parse_and_format_round_trip():
    alts = AlternativeSet(("x", "y", "z"))
    p = alts.parse_order("z x y")
    assert p.ranking == (2, 0, 1)
    assert alts.format_order(p) == "z x y"
    with pytest.raises(OrderError):
        alts.parse_order("z x w")


def test_ranks_are_one_based_inverse():
    p = LinearOrder((2, 0, 3, 1))
    assert p.ranks == (2, 4, 1, 3)
    assert kth(p, 1) == 2 == p.top
    assert rank_of(p, 1) == 4
    assert prefers(p, 3, 1) and not prefers(p, 1, 3)
    with pytest.raises(OrderError):
        prefers(p, 1, 1)
    with pytest.raises(OrderError):
        kth(p, 0)


def test_rejects_non_permutations():
    for bad in [(0, 0, 1), (1, 2, 3)]:
        with pytest.raises(OrderError):
            LinearOrder(bad)


def test_adjacency_examples():
    p = LinearOrder((0, 1, 2, 3))
    assert is_adjacent(p, LinearOrder((0, 2, 1, 3)))
    assert swapped_position(p, LinearOrder((0, 2, 1, 3))) == 1
    assert not is_adjacent(p, p)
    # two disjoint swaps: distance 2
    assert not is_adjacent(p, LinearOrder((1, 0, 3, 2)))
    # same set of moved alternatives but not consecutive
    assert not is_adjacent(p, LinearOrder((2, 1, 0, 3)))
    with pytest.raises(OrderError):
        is_adjacent(p, LinearOrder((0, 1, 2)))


def test_all_orders_lexicographic_and_complete():
    for m in range(2, 6):
        orders = all_orders(m)
        assert len(orders) == math.factorial(m)
        assert [o.ranking for o in orders] == sorted(o.ranking for o in orders)


def test_swap_graph_degree():
    # every order of m alternatives has exactly m - 1 adjacent orders
    for m in range(2, 6):
        orders = all_orders(m)
        for p in orders:
            assert sum(is_adjacent(p, q) for q in orders) == m - 1


@given(perms, perms)
def test_adjacency_matches_kendall_tau(x, y):
    if len(x) != len(y):
        return
    p, q = LinearOrder(tuple(x)), LinearOrder(tuple(y))
    assert is_adjacent(p, q) == (oracles.kendall_tau(tuple(x), tuple(y)) == 1)
    assert is_adjacent(p, q) == is_adjacent(q, p)


@given(perms, st.data())
def test_swap_at_is_adjacent_and_involutive(x, data):
    p = LinearOrder(tuple(x))
    k = data.draw(st.integers(min_value=0, max_value=p.m - 2))
    q = swap_at(p, k)
    assert is_adjacent(p, q)
    assert swapped_position(p, q) == k
    assert swap_at(q, k) == p
    assert set(adjacent_swaps(p)) == {swap_at(p, j) for j in range(p.m - 1)}
