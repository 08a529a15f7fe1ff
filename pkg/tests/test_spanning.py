import networkx as nx
from hypothesis import given, settings

from plslab.graph import Graph
from plslab.spanning import (count_spanning_trees, is_forest, is_spanning_tree, kruskal,
                             spanning_trees, tree_weight)

from strategies import graphs


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(g.nodes)
    for u, v in g.edges:
        h.add_edge(u, v, weight=float(g.weight(u, v)) if g.weighted else 1)
    return h


def test_complete_graph_counts():
    for n in range(1, 7):
        g = Graph(range(1, n + 1), [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])
        assert count_spanning_trees(g) == n ** (n - 2) if n > 1 else 1
        assert len(spanning_trees(g)) == count_spanning_trees(g)


@settings(max_examples=50, deadline=None)
@given(graphs(1, 7))
def test_enumeration_matches_matrix_tree_count(g):
    trees = spanning_trees(g)
    assert len(trees) == len(set(trees)) == count_spanning_trees(g)
    assert all(is_spanning_tree(g, t) for t in trees)


@settings(max_examples=50, deadline=None)
@given(graphs(1, 8, weighted=True))
def test_kruskal_matches_networkx(g):
    ours = kruskal(g)
    ref = {tuple(sorted(e)) for e in nx.minimum_spanning_tree(to_nx(g)).edges()}
    assert ours == ref
    assert tree_weight(g, ours) == min(tree_weight(g, t) for t in spanning_trees(g))


def test_forest_checks():
    assert is_forest([1, 2, 3], [(1, 2)])
    assert not is_forest([1, 2, 3], [(1, 2), (2, 3), (1, 3)])
    g = Graph([1, 2, 3], [(1, 2), (2, 3), (1, 3)])
    assert not is_spanning_tree(g, [(1, 2)])
