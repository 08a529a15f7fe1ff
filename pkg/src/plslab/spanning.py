"""Spanning tree enumeration, counting and Kruskal on exact weights."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .graph import Graph


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra > rb:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def is_spanning_tree(graph: Graph, edges) -> bool:
    edges = list(edges)
    if len(edges) != graph.n - 1:
        return False
    uf = UnionFind(graph.nodes)
    for u, v in edges:
        if not graph.has_edge(u, v) or not uf.union(u, v):
            return False
    return True


def count_components(nodes, edges) -> int:
    uf = UnionFind(nodes)
    count = len(uf.parent)
    for u, v in edges:
        if uf.union(u, v):
            count -= 1
    return count


def is_forest(nodes, edges) -> bool:
    uf = UnionFind(nodes)
    return all(uf.union(u, v) for u, v in edges)


def count_spanning_trees(graph: Graph) -> int:
    """Matrix-tree theorem, exact (fraction-free Bareiss elimination)."""
    n = graph.n
    if n <= 1:
        return 1
    idx = {v: i for i, v in enumerate(graph.nodes)}
    lap = [[0] * n for _ in range(n)]
    for u, v in graph.edges:
        i, j = idx[u], idx[v]
        lap[i][i] += 1
        lap[j][j] += 1
        lap[i][j] -= 1
        lap[j][i] -= 1
    m = [row[1:] for row in lap[1:]]
    size = n - 1
    sign, prev = 1, 1
    for k in range(size - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, size) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[size - 1][size - 1]


@lru_cache(maxsize=256)
def spanning_trees(graph: Graph) -> tuple[frozenset, ...]:
    """All spanning trees of a connected graph, as edge sets, in a deterministic order."""
    nodes = graph.nodes
    if not nodes:
        return (frozenset(),)
    edges = graph.sorted_edges()
    need = len(nodes) - 1
    out = []
    parent = {v: v for v in nodes}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    chosen = []

    def rec(i: int):
        if len(chosen) == need:
            out.append(frozenset(chosen))
            return
        if len(edges) - i < need - len(chosen):
            return
        u, v = edges[i]
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[rv] = ru
            chosen.append(edges[i])
            rec(i + 1)
            chosen.pop()
            parent[rv] = rv
        rec(i + 1)

    rec(0)
    return tuple(out)


def kruskal(graph: Graph, edges=None) -> frozenset:
    """Minimum spanning forest by Kruskal on exact weights (ties broken by edge order)."""
    if not graph.weighted:
        raise ValueError("Kruskal needs edge weights")
    pool = graph.sorted_edges() if edges is None else sorted(edges)
    pool.sort(key=lambda e: (graph.weights[e], e))
    uf = UnionFind(graph.nodes)
    return frozenset(e for e in pool if uf.union(*e))


def tree_weight(graph: Graph, edges) -> Fraction:
    return sum((graph.weights[e] for e in edges), Fraction(0))
