import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plslab.corpus import ILL_FORMED, exhaustive_suite
from plslab.graph import AdjList, Bool, Graph, LabeledGraph, Pointer, edit_distance_between
from plslab.languages import (BudgetExceeded, Language, decide_membership, edit_distance_to_language,
                              iter_members, regular_degree_lower_bound, symmetric_edges)

from strategies import graphs, near_members

ALL = list(Language)


def test_leader_examples():
    g = Graph([1, 2, 3], [(1, 2), (2, 3)])
    inst = LabeledGraph(g, {1: Bool(1), 2: Bool(1), 3: Bool(1)}, "bool")
    assert not decide_membership(Language.LEADER, inst)
    assert edit_distance_to_language(Language.LEADER, inst) == 2
    none = LabeledGraph(g, {v: Bool(0) for v in g.nodes}, "bool")
    assert edit_distance_to_language(Language.LEADER, none) == 1


def test_acyclic_two_cycle_counts_as_cycle():
    g = Graph([1, 2], [(1, 2)])
    inst = LabeledGraph(g, {1: Pointer(2), 2: Pointer(1)}, "pointer")
    assert not decide_membership(Language.ACYCLIC, inst)
    assert edit_distance_to_language(Language.ACYCLIC, inst) == 1


def test_spanning_tree_labels_need_symmetry():
    g = Graph([1, 2, 3], [(1, 2), (2, 3)])
    one_sided = LabeledGraph(g, {1: AdjList([2]), 2: AdjList([3]), 3: AdjList()}, "adjlist")
    assert symmetric_edges(one_sided) is None
    assert not decide_membership(Language.ST_L, one_sided)
    both = LabeledGraph(g, {1: AdjList([2]), 2: AdjList([1, 3]), 3: AdjList([2])}, "adjlist")
    assert decide_membership(Language.ST_L, both)


def test_mst_member_is_kruskal_tree():
    g = Graph([1, 2, 3], [(1, 2), (2, 3), (1, 3)], {(1, 2): 1, (2, 3): 2, (1, 3): 3})
    members = list(iter_members(Language.MST_L, g))
    assert len(members) == 1
    assert members[0].labels[1] == AdjList([2])


@pytest.mark.parametrize("lang", ALL)
def test_membership_matches_enumeration(lang):
    for inst in exhaustive_suite(lang, 3):
        members = set(iter_members(lang, inst.graph))
        assert decide_membership(lang, inst) == (inst in members)


@pytest.mark.parametrize("lang", ALL)
def test_members_have_distance_zero(lang):
    rng = random.Random(7)
    for inst in exhaustive_suite(lang, 3):
        if decide_membership(lang, inst):
            assert edit_distance_to_language(lang, inst) == 0
        elif rng.random() < 0.3:
            assert edit_distance_to_language(lang, inst) > 0


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(ALL).flatmap(lambda lang: st.tuples(st.just(lang), near_members(lang, 2, 5))))
def test_distance_matches_enumeration(pair):
    lang, inst = pair
    fast = edit_distance_to_language(lang, inst)
    assert fast == edit_distance_to_language(lang, inst, strategy="enumerate")
    assert fast <= 2


@settings(max_examples=40, deadline=None)
@given(graphs(1, 6), st.integers(0, 2**32 - 1))
def test_leader_analytic_matches_enumeration(g, seed):
    rng = random.Random(seed)
    labels = {v: rng.choice([Bool(0), Bool(1), ILL_FORMED]) for v in g.nodes}
    inst = LabeledGraph(g, labels, "bool")
    assert (edit_distance_to_language(Language.LEADER, inst)
            == edit_distance_to_language(Language.LEADER, inst, strategy="enumerate"))


def test_regular_lower_bound_is_sound():
    for inst in exhaustive_suite(Language.REGULAR, 4):
        assert regular_degree_lower_bound(inst) <= edit_distance_to_language(Language.REGULAR, inst)


def test_budget_exceeded_is_raised():
    n = 9
    g = Graph(range(1, n + 1), [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])
    inst = LabeledGraph(g, {v: AdjList() for v in g.nodes}, "adjlist")
    with pytest.raises(BudgetExceeded):
        edit_distance_to_language(Language.ST_L, inst, budget=10)


def test_wrong_label_kind_rejected():
    g = Graph([1], [])
    with pytest.raises(Exception):
        decide_membership(Language.LEADER, LabeledGraph(g, {1: Pointer(None)}, "pointer"))


def test_triangle_with_all_edges_is_two_from_a_tree():
    g = Graph([1, 2, 3], [(1, 2), (2, 3), (1, 3)])
    inst = LabeledGraph(g, {1: AdjList([2, 3]), 2: AdjList([1, 3]), 3: AdjList([1, 2])}, "adjlist")
    assert edit_distance_to_language(Language.ST_L, inst) == 2


def test_weighted_triangle_membership():
    g = Graph([1, 2, 3], [(1, 2), (2, 3), (1, 3)], {(1, 2): 1, (2, 3): 2, (1, 3): 3})
    good = LabeledGraph(g, {1: AdjList([2]), 2: AdjList([1, 3]), 3: AdjList([2])}, "adjlist")
    bad = LabeledGraph(g, {1: AdjList([2, 3]), 2: AdjList([1]), 3: AdjList([1])}, "adjlist")
    assert decide_membership(Language.MST_L, good)
    assert not decide_membership(Language.MST_L, bad)


def test_pointer_path_is_rooted_tree():
    g = Graph([1, 2, 3, 4], [(1, 2), (2, 3), (3, 4)])
    inst = LabeledGraph(g, {1: Pointer(2), 2: Pointer(3), 3: Pointer(4), 4: Pointer(None)}, "pointer")
    assert decide_membership(Language.ST_P, inst)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([Language.ACYCLIC, Language.ST_L, Language.REGULAR, Language.LEADER])
       .flatmap(lambda lang: st.tuples(st.just(lang), near_members(lang, 2, 5))),
       st.integers(0, 2**32 - 1))
def test_distance_never_exceeds_a_witnessed_repair(pair, seed):
    lang, inst = pair
    members = list(iter_members(lang, inst.graph))
    target = random.Random(seed).choice(members)
    assert edit_distance_to_language(lang, inst) <= edit_distance_between(inst, target)
