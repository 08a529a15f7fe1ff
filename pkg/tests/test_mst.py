import itertools
import random

import pytest

from plslab.bits import CodecContext
from plslab.corpus import random_connected_graph
from plslab.engine import encode_map, run_verifier
from plslab.graph import AdjList, Graph, LabeledGraph, adjlist_labeling
from plslab.languages import Language, decide_membership
from plslab.mst import MstScheme, boruvka_rounds, certs_for_tree, round_count
from plslab.oracles import min_rejections
from plslab.spanning import kruskal, spanning_trees


def weighted(n, seed):
    return random_connected_graph(n, random.Random(seed), weighted=True)


def test_round_count():
    assert [round_count(n) for n in (1, 2, 3, 4, 5, 8, 9)] == [0, 1, 2, 2, 3, 3, 4]


@pytest.mark.parametrize("seed", range(30))
def test_honest_certificates_accepted_and_sized(seed):
    g = weighted(2 + seed % 8, seed)
    inst = LabeledGraph(g, adjlist_labeling(g, kruskal(g)), "adjlist")
    scheme = MstScheme()
    certs = scheme.prove(inst)
    ctx = CodecContext.for_instance(inst)
    for c in certs.values():
        assert len(scheme.encode(c, ctx)) == MstScheme.bits_formula(ctx.width, round_count(g.n))
    assert run_verifier(scheme, inst, encode_map(scheme, inst, certs)).all_accept


@pytest.mark.parametrize("seed", range(15))
def test_forged_trees_are_caught(seed):
    g = weighted(4 + seed % 3, 100 + seed)
    best = kruskal(g)
    scheme = MstScheme()
    for tree in spanning_trees(g):
        if tree == best:
            continue
        inst = LabeledGraph(g, adjlist_labeling(g, tree), "adjlist")
        assert not decide_membership(Language.MST_L, inst)
        assert run_verifier(scheme, inst, certs_for_tree(g, tree)).k >= 1


def test_boruvka_rounds_end_in_one_fragment():
    g = weighted(7, 3)
    inst = LabeledGraph(g, adjlist_labeling(g, kruskal(g)), "adjlist")
    rounds = boruvka_rounds(inst)
    assert len(set(rounds[-1].fragment.values())) == 1
    merged = set().union(*(r.merged for r in rounds))
    assert merged == set(kruskal(g))
    assert len(rounds) - 1 <= round_count(g.n)


def test_exact_search_on_triangle():
    g = Graph([1, 2, 3], [(1, 2), (2, 3), (1, 3)], {(1, 2): 1, (2, 3): 2, (1, 3): 3})
    inst = LabeledGraph(g, adjlist_labeling(g, [(1, 3), (2, 3)]), "adjlist")
    res = min_rejections(MstScheme(), inst)
    assert res.exhaustive and res.k >= 1
    assert res.k <= run_verifier(MstScheme(), inst, res.witness).k


def test_search_over_all_labelings_of_small_graph():
    g = Graph([1, 2, 3], [(1, 2), (2, 3), (1, 3)], {(1, 2): 2, (2, 3): 1, (1, 3): 3})
    scheme = MstScheme()
    choices = [[(), (a,), (a, b)] for a, b in ((2, 3), (1, 3), (1, 2))]
    for combo in itertools.product(*choices):
        labels = {v: AdjList(ids) for v, ids in zip((1, 2, 3), combo)}
        inst = LabeledGraph(g, labels, "adjlist")
        if decide_membership(Language.MST_L, inst):
            continue
        assert min_rejections(scheme, inst, cutoff=1).k is None
