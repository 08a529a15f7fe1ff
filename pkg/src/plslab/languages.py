"""Centralized membership deciders and exact edit-distance oracles for the six languages."""
from __future__ import annotations

import enum
import itertools
from functools import lru_cache
from typing import Iterator

import numpy as np

from .graph import (AdjList, Bool, Graph, InstanceError, LabeledGraph, Pointer,
                    adjlist_labeling)
from .spanning import count_spanning_trees, is_spanning_tree, kruskal, spanning_trees

DEFAULT_BUDGET = 2_000_000


class BudgetExceeded(RuntimeError):
    """The exact oracle would need more work than the caller allowed."""


class Language(enum.Enum):
    ACYCLIC = "ACYCLIC"
    LEADER = "LEADER"
    ST_P = "ST_P"
    ST_L = "ST_L"
    MST_L = "MST_L"
    REGULAR = "REGULAR"

    @property
    def label_kind(self) -> str:
        return _LABEL_KIND[self]

    @classmethod
    def parse(cls, name: str) -> "Language":
        key = name.strip().upper().replace("-", "_")
        try:
            return cls[key]
        except KeyError:
            raise ValueError(f"unknown language {name!r}") from None


_LABEL_KIND = {
    Language.ACYCLIC: "pointer",
    Language.ST_P: "pointer",
    Language.ST_L: "adjlist",
    Language.MST_L: "adjlist",
    Language.REGULAR: "adjlist",
    Language.LEADER: "bool",
}


def _check_kind(lang: Language, instance: LabeledGraph) -> None:
    if instance.label_kind != lang.label_kind:
        raise InstanceError(f"{lang.value} expects {lang.label_kind} labels, "
                            f"instance has {instance.label_kind}")
    if lang is Language.MST_L and not instance.graph.weighted:
        raise InstanceError("MST_L needs a weighted graph")


# --------------------------------------------------------------------------
# well-formedness helpers


def pointer_ok(graph: Graph, v: int, label) -> bool:
    """Label is a pointer to a neighbor or null."""
    return isinstance(label, Pointer) and (label.target is None or label.target in graph.adj[v])


def adjlist_ok(graph: Graph, v: int, label) -> bool:
    return isinstance(label, AdjList) and label.ids <= graph.adj[v]


def symmetric_edges(instance: LabeledGraph) -> set[tuple[int, int]] | None:
    """Edge set of a well-formed symmetric adjacency-list labeling, else None."""
    g = instance.graph
    edges = set()
    for v in g.nodes:
        lab = instance.labels[v]
        if not adjlist_ok(g, v, lab):
            return None
        for u in lab.ids:
            other = instance.labels[u]
            if not isinstance(other, AdjList) or v not in other.ids:
                return None
            edges.add((v, u) if v < u else (u, v))
    return edges


def pointer_cycles(instance: LabeledGraph) -> tuple[set[int], int]:
    """(ill-formed nodes, number of directed cycles among well-formed pointers)."""
    g = instance.graph
    bad = {v for v in g.nodes if not pointer_ok(g, v, instance.labels[v])}
    nxt = {v: instance.labels[v].target for v in g.nodes if v not in bad}
    state: dict[int, int] = {}
    cycles = 0
    for start in g.nodes:
        if start in state:
            continue
        path = []
        v = start
        while v is not None and v not in bad and v not in state:
            state[v] = 1
            path.append(v)
            v = nxt[v]
        if v is not None and state.get(v) == 1:
            cycles += 1
        for u in path:
            state[u] = 2
    return bad, cycles


# --------------------------------------------------------------------------
# membership


def decide_membership(lang: Language, instance: LabeledGraph) -> bool:
    _check_kind(lang, instance)
    g = instance.graph
    labels = instance.labels
    if lang is Language.LEADER:
        if not all(isinstance(labels[v], Bool) for v in g.nodes):
            return False
        return sum(labels[v].value for v in g.nodes) == 1
    if lang in (Language.ACYCLIC, Language.ST_P):
        bad, cycles = pointer_cycles(instance)
        if bad or cycles:
            return False
        if lang is Language.ACYCLIC:
            return True
        return sum(1 for v in g.nodes if labels[v].target is None) == 1
    edges = symmetric_edges(instance)
    if edges is None:
        return False
    if lang is Language.REGULAR:
        degrees = {len(labels[v].ids) for v in g.nodes}
        return len(degrees) <= 1
    if not is_spanning_tree(g, edges):
        return False
    if lang is Language.ST_L:
        return True
    return frozenset(edges) == kruskal(g)


# --------------------------------------------------------------------------
# legal labelings


def pointer_labeling_toward(graph: Graph, tree_edges, root: int) -> dict[int, Pointer]:
    adj = {v: [] for v in graph.nodes}
    for u, v in tree_edges:
        adj[u].append(v)
        adj[v].append(u)
    labels = {root: Pointer(None)}
    stack = [root]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in labels:
                labels[w] = Pointer(u)
                stack.append(w)
    return labels


def iter_members(lang: Language, graph: Graph, budget: int = DEFAULT_BUDGET) -> Iterator[LabeledGraph]:
    """Every legal labeling of ``graph`` for ``lang`` (raises if more than ``budget``)."""
    kind = lang.label_kind
    nodes = graph.nodes
    if lang is Language.LEADER:
        for leader in nodes:
            yield LabeledGraph(graph, {v: Bool(int(v == leader)) for v in nodes}, kind)
    elif lang in (Language.ST_L, Language.ST_P):
        trees = _trees_within_budget(graph, budget, factor=graph.n if lang is Language.ST_P else 1)
        for tree in trees:
            if lang is Language.ST_L:
                yield LabeledGraph(graph, adjlist_labeling(graph, tree), kind)
            else:
                for root in nodes:
                    yield LabeledGraph(graph, pointer_labeling_toward(graph, tree, root), kind)
    elif lang is Language.MST_L:
        yield LabeledGraph(graph, adjlist_labeling(graph, kruskal(graph)), kind)
    elif lang is Language.ACYCLIC:
        choices = [[None, *sorted(graph.adj[v])] for v in nodes]
        total = int(np.prod([len(c) for c in choices], dtype=object))
        if total > budget:
            raise BudgetExceeded(f"{total} pointer labelings exceed budget {budget}")
        for combo in itertools.product(*choices):
            inst = LabeledGraph(graph, {v: Pointer(t) for v, t in zip(nodes, combo)}, kind)
            if decide_membership(lang, inst):
                yield inst
    elif lang is Language.REGULAR:
        for edges in regular_subgraphs(graph, budget=budget):
            yield LabeledGraph(graph, adjlist_labeling(graph, edges), kind)
    else:  # pragma: no cover
        raise ValueError(lang)


def _trees_within_budget(graph: Graph, budget: int, factor: int = 1):
    count = count_spanning_trees(graph)
    if count * factor > budget:
        raise BudgetExceeded(f"{count} spanning trees (x{factor}) exceed budget {budget}")
    return spanning_trees(graph)


def regular_subgraphs(graph: Graph, degree: int | None = None, budget: int = DEFAULT_BUDGET):
    """Edge sets of spanning r-regular subgraphs (for every r, or the given one)."""
    min_deg = min((len(graph.adj[v]) for v in graph.nodes), default=0)
    targets = range(min_deg + 1) if degree is None else [degree]
    edges = graph.sorted_edges()
    incident_left = {v: len(graph.adj[v]) for v in graph.nodes}
    steps = 0
    for r in targets:
        deg = {v: 0 for v in graph.nodes}
        left = dict(incident_left)
        chosen = []

        def rec(i):
            nonlocal steps
            steps += 1
            if steps > budget:
                raise BudgetExceeded(f"regular subgraph search exceeded budget {budget}")
            if i == len(edges):
                yield frozenset(chosen)
                return
            u, v = edges[i]
            left[u] -= 1
            left[v] -= 1
            if deg[u] < r and deg[v] < r:
                deg[u] += 1
                deg[v] += 1
                chosen.append((u, v))
                yield from rec(i + 1)
                chosen.pop()
                deg[u] -= 1
                deg[v] -= 1
            if deg[u] + left[u] >= r and deg[v] + left[v] >= r:
                yield from rec(i + 1)
            left[u] += 1
            left[v] += 1

        yield from rec(0)


# --------------------------------------------------------------------------
# edit distance


def edit_distance_to_language(lang: Language, instance: LabeledGraph,
                              budget: int = DEFAULT_BUDGET, strategy: str = "auto") -> int:
    """Exact edit distance from ``instance`` to ``lang``.

    ``strategy="enumerate"`` forces the generic route (minimum over every legal
    labeling) and is meant as a cross-check for the specialised routes.
    """
    _check_kind(lang, instance)
    if strategy == "enumerate":
        return min(_mismatches(instance, m) for m in iter_members(lang, instance.graph, budget))
    if strategy != "auto":
        raise ValueError(f"unknown strategy {strategy!r}")
    if lang is Language.LEADER:
        return _leader_distance(instance)
    if lang is Language.ACYCLIC:
        bad, cycles = pointer_cycles(instance)
        return len(bad) + cycles
    if lang is Language.MST_L:
        target = adjlist_labeling(instance.graph, kruskal(instance.graph))
        return sum(1 for v in instance.nodes if instance.labels[v] != target[v])
    if lang is Language.ST_L:
        return _tree_distance(instance, budget, rooted=False)
    if lang is Language.ST_P:
        return _tree_distance(instance, budget, rooted=True)
    return _regular_distance(instance, budget)


def _mismatches(a: LabeledGraph, b: LabeledGraph) -> int:
    return sum(1 for v in a.nodes if a.labels[v] != b.labels[v])


def _leader_distance(instance: LabeledGraph) -> int:
    ones = sum(1 for lab in instance.labels.values() if isinstance(lab, Bool) and lab.value == 1)
    bad = sum(1 for lab in instance.labels.values() if not isinstance(lab, Bool))
    if ones == 0:
        # an ill-formed node can be rewritten straight to the leader
        return bad if bad else 1
    return bad + ones - 1


def label_code(graph: Graph, v: int, label, kind: str) -> int:
    """Integer code of a label relative to node v; -1 for anything ill-formed."""
    if kind == "pointer":
        if not pointer_ok(graph, v, label):
            return -1
        return 0 if label.target is None else graph.nodes.index(label.target) + 1
    if kind == "adjlist":
        if not adjlist_ok(graph, v, label):
            return -1
        return sum(1 << graph.nodes.index(u) for u in label.ids)
    if kind == "bool":
        return label.value if isinstance(label, Bool) else -1
    return -1


def label_codes(lang: Language, instance: LabeledGraph) -> np.ndarray:
    g = instance.graph
    return np.array([label_code(g, v, instance.labels[v], lang.label_kind) for v in g.nodes],
                    dtype=np.int64)


@lru_cache(maxsize=64)
def member_table(lang: Language, graph: Graph, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Codes of every legal labeling of ``graph``, one row per member."""
    rows = [label_codes(lang, m) for m in iter_members(lang, graph, budget)]
    return np.array(rows, dtype=np.int64).reshape(len(rows), graph.n)


def distance_by_table(table: np.ndarray, codes: np.ndarray) -> np.ndarray:
    """Hamming distance from each row of ``codes`` (or a single vector) to the nearest member."""
    codes = np.atleast_2d(codes)
    step = max(1, 4_000_000 // max(1, table.size))
    parts = [(codes[i:i + step, None, :] != table[None, :, :]).sum(axis=2).min(axis=1)
             for i in range(0, len(codes), step)]
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def _tree_distance(instance: LabeledGraph, budget: int, rooted: bool) -> int:
    lang = Language.ST_P if rooted else Language.ST_L
    _trees_within_budget(instance.graph, budget, factor=instance.n if rooted else 1)
    table = member_table(lang, instance.graph, budget)
    return int(distance_by_table(table, label_codes(lang, instance))[0])


def regular_degree_lower_bound(instance: LabeledGraph) -> int:
    """Every r-regular target relabels each node whose list does not have size r."""
    g = instance.graph
    min_deg = min(len(g.adj[v]) for v in g.nodes)
    best = None
    for r in range(min_deg + 1):
        cost = sum(1 for v in g.nodes
                   if not adjlist_ok(g, v, instance.labels[v]) or len(instance.labels[v].ids) != r)
        best = cost if best is None else min(best, cost)
    return best


def _regular_distance(instance: LabeledGraph, budget: int) -> int:
    g = instance.graph
    idx = {v: i for i, v in enumerate(g.nodes)}
    current = [
        frozenset(instance.labels[v].ids) if adjlist_ok(g, v, instance.labels[v]) else None
        for v in g.nodes]
    edges = g.sorted_edges()
    best = g.n  # the empty subgraph relabels at most every node
    steps = 0
    min_deg = min(len(g.adj[v]) for v in g.nodes)
    for r in range(min_deg + 1):
        floor = sum(1 for v in g.nodes if current[idx[v]] is None or len(current[idx[v]]) != r)
        if floor >= best:
            continue
        deg = {v: 0 for v in g.nodes}
        left = {v: len(g.adj[v]) for v in g.nodes}
        nbrs = {v: set() for v in g.nodes}
        cost = 0

        def settle(v):
            return 0 if current[idx[v]] == nbrs[v] else 1

        def rec(i):
            nonlocal best, steps, cost
            steps += 1
            if steps > budget:
                raise BudgetExceeded(f"REGULAR distance search exceeded budget {budget}")
            if cost >= best:
                return
            if i == len(edges):
                best = cost
                return
            u, v = edges[i]
            left[u] -= 1
            left[v] -= 1
            for take in (True, False):
                if take and not (deg[u] < r and deg[v] < r):
                    continue
                if not take and not (deg[u] + left[u] >= r and deg[v] + left[v] >= r):
                    continue
                if take:
                    deg[u] += 1
                    deg[v] += 1
                    nbrs[u].add(v)
                    nbrs[v].add(u)
                added = 0
                for x in (u, v):
                    if left[x] == 0:
                        added += settle(x)
                cost += added
                rec(i + 1)
                cost -= added
                if take:
                    deg[u] -= 1
                    deg[v] -= 1
                    nbrs[u].discard(v)
                    nbrs[v].discard(u)
            left[u] += 1
            left[v] += 1

        # isolated nodes never appear in the edge loop
        cost = sum(settle(v) for v in g.nodes if not g.adj[v])
        rec(0)
    return best
