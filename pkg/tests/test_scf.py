from __future__ import annotations

import itertools
import random

import pytest

import oracles
from prefdomains.domains import has_two_distinct_neighbours, is_connected, sub_domain
from prefdomains.errors import ConstructionError, DomainError
from prefdomains.fixtures import fixture, unrestricted
from prefdomains.graph import edges_of, induced_graph
from prefdomains.scf import (
    ManipulationWitness,
    SCFTable,
    case2_pair,
    check_decisive,
    check_dictatorship,
    check_edge_outcomes,
    check_local_sp,
    check_sp,
    check_tops_only,
    check_unanimity,
    clone_reduce,
    constant,
    construct_case1,
    construct_case2,
    dictatorial,
    dictatorship_verdict,
    profile_at,
    profile_index,
    restrict,
    two_voter_slice,
    verify_witness,
)


def naive_sp(f: SCFTable, local: bool) -> bool:
    d = f.domain
    orders = [p.ranking for p in d.prefs]
    for prof in f.profiles():
        for v in range(f.n):
            for j in range(len(d)):
                if j == prof[v] or (local and not oracles.adjacent(orders[prof[v]], orders[j])):
                    continue
                lie = f(prof[:v] + (j,) + prof[v + 1:])
                if orders[prof[v]].index(lie) < orders[prof[v]].index(f(prof)):
                    return False
    return True


def eligible_pstars(d):
    return [i for i in range(len(d)) if not has_two_distinct_neighbours(d, i)
            and has_two_distinct_neighbours(d, i).witness["neighbour_tops"]]


def test_profile_indexing_is_row_major():
    k, n = 5, 3
    for idx in range(k ** n):
        assert profile_index(profile_at(idx, k, n), k) == idx
    assert profile_at(1, k, n) == (0, 0, 1)
    assert list(SCFTable.from_function(unrestricted(3), 2, lambda p: 0).profiles())[:2] == [(0, 0), (0, 1)]


def test_table_validation():
    d = fixture("table2")
    with pytest.raises(DomainError):
        SCFTable(d, 2, (0,) * 3)
    with pytest.raises(DomainError):
        SCFTable(d, 1, (0,) * 7)
    with pytest.raises(DomainError):
        SCFTable(d, 2, (9,) * 49)


def test_dictatorship_satisfies_everything():
    for d in [fixture("table4"), unrestricted(3)]:
        for v in range(3):
            f = dictatorial(d, 3, voter=v)
            assert check_unanimity(f) and check_sp(f) and check_local_sp(f) and check_tops_only(f)
            assert check_dictatorship(f) == v
            assert check_decisive(f, v, 0)


def test_constant_rule_fails_unanimity_with_witness():
    d = fixture("table4")
    f = constant(d, 2, 0)
    v = check_unanimity(f)
    assert not v
    assert v.witness == {"kind": "unanimity", "profile": [1, 1], "alt": 1, "outcome": 0}
    assert verify_witness(f, v.witness)
    assert check_sp(f)  # a constant rule is trivially strategy-proof
    assert dictatorship_verdict(f).holds is False


def test_sp_checkers_match_naive_oracle_on_random_tables():
    rng = random.Random(5)
    d = fixture("table2")
    for _ in range(200):
        f = SCFTable(d, 2, tuple(rng.choice([0, 1, 2, 3]) for _ in range(49)))
        for local, check in [(True, check_local_sp), (False, check_sp)]:
            v = check(f)
            assert v.holds == naive_sp(f, local)
            if not v:
                assert verify_witness(f, v.witness)


def test_manipulation_witness_verify():
    d = fixture("table4")
    f = dictatorial(d, 2, 0)
    assert not ManipulationWitness(0, (0, 0), 1, True).verify(f)
    g = SCFTable.from_function(d, 2, lambda p: d.prefs[p[0]].ranking[-1])
    v = check_local_sp(g)
    assert not v and ManipulationWitness(**{k: v.witness[k] for k in ("voter", "deviation", "local")},
                                         profile=tuple(v.witness["profile"])).verify(g)


def test_tops_only_witness():
    d = fixture("table4")
    f = SCFTable.from_function(d, 2, lambda p: d.prefs[p[0]].ranking[1])
    v = check_tops_only(f)
    assert not v and verify_witness(f, v.witness)
    p, q = v.witness["profiles"]
    assert [d.tops[i] for i in p] == [d.tops[i] for i in q]


def test_case1_on_table1():
    d = fixture("table1")
    assert not is_connected(d)
    for base in range(len(d)):
        f = construct_case1(d, base)
        assert check_unanimity(f) and check_local_sp(f)
        assert check_dictatorship(f) is None
        assert naive_sp(f, local=True)
    with pytest.raises(ConstructionError):
        construct_case1(fixture("table4"), 0)


def test_case2_on_tables_2_and_3():
    for name in ["table2", "table3"]:
        d = fixture(name)
        ps = eligible_pstars(d)
        assert ps, name
        for pstar in ps:
            f = construct_case2(d, pstar)
            assert check_unanimity(f) and check_local_sp(f), (name, pstar)
            assert check_dictatorship(f) is None
            assert naive_sp(f, local=True)


def test_case2_pair_examples():
    d = fixture("table2")
    # P1 (top a1) only borders P2 (top a2)
    assert case2_pair(d, 0) == (0, 1)
    with pytest.raises(ConstructionError, match="distinct"):
        case2_pair(d, 1)
    with pytest.raises(ConstructionError):
        case2_pair(fixture("table1"), 0)


def test_case_constructions_with_more_voters():
    d = fixture("table3")
    f = construct_case2(d, 0, n=3, v1=2, v2=0)
    assert check_unanimity(f) and check_local_sp(f) and check_dictatorship(f) is None
    with pytest.raises(ConstructionError):
        construct_case2(d, 0, n=3, v1=1, v2=1)


def test_clone_reduce_and_slice_preserve_axioms():
    d = fixture("table3")
    f = construct_case2(d, 0, n=3)
    g = clone_reduce(f)
    assert g.n == 2
    for prof in g.profiles():
        assert g(prof) == f((prof[0],) + prof)
    assert check_unanimity(g) and check_local_sp(g)
    for others in itertools.product(range(len(d)), repeat=1):
        h = two_voter_slice(f, others)
        assert check_local_sp(h)
    with pytest.raises(DomainError):
        clone_reduce(construct_case2(d, 0))


def test_restrict_preserves_axioms():
    d = fixture("table5")
    f = dictatorial(d, 2, 1)
    sub = sub_domain(d, range(12))
    g = restrict(f, sub)
    assert check_unanimity(g) and check_local_sp(g) and check_dictatorship(g) == 1
    with pytest.raises(DomainError):
        restrict(f, fixture("table1"))


def test_edge_outcomes_for_dictatorship():
    d = fixture("table4")
    edges = edges_of(induced_graph(d))
    assert check_edge_outcomes(dictatorial(d, 2, 0), edges)
    f = constant(d, 2, 0)
    assert not check_edge_outcomes(f, edges)
    with pytest.raises(DomainError):
        check_edge_outcomes(dictatorial(d, 3), edges)
