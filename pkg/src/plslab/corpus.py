"""Instance corpora: small graphs up to isomorphism, label universes, seeded corruptions."""
from __future__ import annotations

import itertools
import random
from functools import lru_cache
from typing import Iterator

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from .graph import AdjList, Bool, Graph, LabeledGraph, Pointer, Raw, label_key
from .languages import Language, decide_membership, iter_members

ILL_FORMED = Raw(b"\xff")  # one stand-in for every label of the wrong shape
ATLAS_MAX_N = 7


@lru_cache(maxsize=None)
def connected_graphs(max_n: int, min_n: int = 1) -> tuple[Graph, ...]:
    """Connected simple graphs with ids 1..n, one per isomorphism class (n <= 7)."""
    if max_n > ATLAS_MAX_N:
        raise ValueError(f"graph atlas only covers n <= {ATLAS_MAX_N}")
    out = []
    for g in nx.graph_atlas_g():
        n = g.number_of_nodes()
        if n < max(min_n, 1) or n > max_n or not nx.is_connected(g):
            continue
        out.append(Graph(range(1, n + 1), [(u + 1, v + 1) for u, v in g.edges()]))
    return tuple(out)


@lru_cache(maxsize=4096)
def automorphisms(graph: Graph) -> tuple[dict[int, int], ...]:
    g = nx.Graph()
    g.add_nodes_from(graph.nodes)
    g.add_edges_from(graph.edges)
    if graph.weighted:
        nx.set_edge_attributes(g, {e: w for e, w in graph.weights.items()}, "w")
        matcher = GraphMatcher(g, g, edge_match=lambda a, b: a["w"] == b["w"])
    else:
        matcher = GraphMatcher(g, g)
    return tuple(dict(m) for m in matcher.isomorphisms_iter())


def map_label(label, sigma: dict[int, int]):
    if isinstance(label, Pointer):
        return label if label.target is None else Pointer(sigma[label.target])
    if isinstance(label, AdjList):
        return AdjList(sigma.get(x, x) for x in label.ids)
    return label


def canonical_key(graph: Graph, labels: dict) -> tuple:
    """Smallest labeling key over the graph's automorphisms."""
    best = None
    for sigma in automorphisms(graph):
        image = {sigma[v]: map_label(labels[v], sigma) for v in graph.nodes}
        key = tuple(label_key(image[v]) for v in graph.nodes)
        if best is None or key < best:
            best = key
    return best


def label_universe(graph: Graph, v: int, kind: str, ill_formed: bool = True) -> list:
    if kind == "pointer":
        out = [Pointer(None)] + [Pointer(u) for u in sorted(graph.adj[v])]
    elif kind == "adjlist":
        nb = sorted(graph.adj[v])
        out = [AdjList(c) for r in range(len(nb) + 1) for c in itertools.combinations(nb, r)]
    elif kind == "bool":
        out = [Bool(0), Bool(1)]
    else:
        raise ValueError(kind)
    if ill_formed:
        out.append(ILL_FORMED)
    return out


def all_labelings(graph: Graph, kind: str, ill_formed: bool = True,
                  up_to_symmetry: bool = True) -> Iterator[LabeledGraph]:
    """Every labeling over the per-node universes, deduplicated under automorphisms."""
    universes = [label_universe(graph, v, kind, ill_formed) for v in graph.nodes]
    seen = set()
    for combo in itertools.product(*universes):
        labels = dict(zip(graph.nodes, combo))
        if up_to_symmetry:
            key = canonical_key(graph, labels)
            if key in seen:
                continue
            seen.add(key)
        yield LabeledGraph(graph, labels, kind)


def weighted_versions(graph: Graph) -> Iterator[Graph]:
    """The graph under every ordering of weights 1..m, one per automorphism class."""
    edges = graph.sorted_edges()
    autos = automorphisms(graph)
    seen = set()
    for perm in itertools.permutations(range(1, len(edges) + 1)):
        wmap = dict(zip(edges, perm))
        key = min(tuple(wmap[tuple(sorted((s[u], s[v])))] for u, v in edges) for s in autos)
        if key in seen:
            continue
        seen.add(key)
        yield Graph(graph.nodes, edges, wmap)


def exhaustive_suite(lang: Language, max_n: int, min_n: int = 1) -> Iterator[LabeledGraph]:
    """All labelings of all small graphs for ``lang`` (weighted orderings for MST_L)."""
    for g in connected_graphs(max_n, min_n):
        graphs = weighted_versions(g) if lang is Language.MST_L else [g]
        for wg in graphs:
            yield from all_labelings(wg, lang.label_kind, up_to_symmetry=lang is not Language.MST_L)


# --------------------------------------------------------------------------
# seeded random instances


def random_connected_graph(n: int, rng: random.Random, extra_p: float = 0.35,
                           weighted: bool = False, first_id: int = 1) -> Graph:
    """Random attachment tree plus independent extra edges."""
    ids = list(range(first_id, first_id + n))
    order = ids[:]
    rng.shuffle(order)
    edges = set()
    for i in range(1, n):
        u, v = order[i], order[rng.randrange(i)]
        edges.add((min(u, v), max(u, v)))
    for a, b in itertools.combinations(ids, 2):
        if (a, b) not in edges and rng.random() < extra_p:
            edges.add((a, b))
    edges = sorted(edges)
    weights = None
    if weighted:
        weights = dict(zip(edges, rng.sample(range(1, 10 * len(edges) + 10), len(edges))))
    return Graph(ids, edges, weights)


def random_member(lang: Language, graph: Graph, rng: random.Random) -> LabeledGraph:
    members = list(iter_members(lang, graph))
    return members[rng.randrange(len(members))]


def corrupt(instance: LabeledGraph, count: int, rng: random.Random,
            ill_formed: bool = True) -> LabeledGraph:
    """Overwrite ``count`` random nodes with a different label from their universe."""
    g = instance.graph
    nodes = rng.sample(list(g.nodes), min(count, g.n))
    changes = {}
    for v in nodes:
        options = [lab for lab in label_universe(g, v, instance.label_kind, ill_formed)
                   if lab != instance.labels[v]]
        if options:
            changes[v] = options[rng.randrange(len(options))]
    return instance.relabeled(changes)


def corrupted_corpus(lang: Language, count: int, seed: int, min_n: int = 2, max_n: int = 7,
                     max_corruptions: int | None = None) -> list[LabeledGraph]:
    """Seeded nonmembers: random member on a random graph with a few labels rewritten."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(min_n, max_n)
        g = random_connected_graph(n, rng, weighted=lang is Language.MST_L)
        member = random_member(lang, g, rng)
        hits = rng.randint(1, max_corruptions or n)
        inst = corrupt(member, hits, rng)
        if not decide_membership(lang, inst):
            out.append(inst)
    return out


def member_corpus(lang: Language, max_n: int, min_n: int = 1) -> Iterator[LabeledGraph]:
    for g in connected_graphs(max_n, min_n):
        yield from iter_members(lang, g)
