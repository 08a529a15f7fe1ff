"""Explicit counterexample instances with hand-built certificate maps."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .engine import Scheme, build_views, verify_view
from .graph import Graph, LabeledGraph, Pointer, adjlist_labeling
from .languages import Language, decide_membership
from .schemes import StpScheme, UniversalScheme, WrappedCert, WrappedScheme


class PreconditionError(ValueError):
    """Construction parameters outside the supported range."""


@dataclass(frozen=True)
class Construction:
    name: str
    instance: LabeledGraph
    certs: dict[int, Any]
    scheme: Scheme
    meta: dict


# --------------------------------------------------------------------------
# pointer paths


def path_graph(n: int, first_id: int = 1) -> Graph:
    ids = list(range(first_id, first_id + n))
    return Graph(ids, zip(ids, ids[1:]))


def path_pointing(n: int, toward: str) -> LabeledGraph:
    """Path u1..un with every pointer toward u1 ("left") or toward un ("right")."""
    g = path_graph(n)
    if toward == "right":
        labels = {i: Pointer(i + 1 if i < n else None) for i in g.nodes}
    else:
        labels = {i: Pointer(i - 1 if i > 1 else None) for i in g.nodes}
    return LabeledGraph(g, labels, "pointer")


def build_path_stp(n: int) -> Construction:
    """Path whose two halves point away from the middle, with certificates spliced from the two legal orientations."""
    if n < 4 or n % 2:
        raise PreconditionError("PATH_STP needs an even n >= 4")
    half = n // 2
    g = path_graph(n)
    labels = {}
    for i in g.nodes:
        if i == 1 or i == n:
            labels[i] = Pointer(None)
        elif i <= half:
            labels[i] = Pointer(i - 1)
        else:
            labels[i] = Pointer(i + 1)
    inst = LabeledGraph(g, labels, "pointer")
    scheme = StpScheme()
    left = scheme.prove(path_pointing(n, "left"))    # root u1
    right = scheme.prove(path_pointing(n, "right"))  # root un
    certs = {i: (left[i] if i <= half else right[i]) for i in g.nodes}
    return Construction(f"PATH_STP({n})", inst, certs, scheme,
                        {"expected_rejecting": (half, half + 1)})


# --------------------------------------------------------------------------
# regular graphs glued together


def circulant(m: int, d: int, first_id: int = 1) -> Graph:
    """d-regular circulant on m nodes: offsets 1..d//2, plus m/2 when d is odd."""
    if d < 0 or m <= d or (d * m) % 2:
        raise PreconditionError(f"no {d}-regular circulant on {m} nodes")
    offsets = set(range(1, d // 2 + 1))
    if d % 2:
        offsets.add(m // 2)
    ids = list(range(first_id, first_id + m))
    edges = set()
    for i in range(m):
        for o in offsets:
            a, b = ids[i], ids[(i + o) % m]
            edges.add((min(a, b), max(a, b)))
    g = Graph(ids, edges, allow_disconnected=True)
    if not g.is_connected():
        raise PreconditionError("circulant is disconnected")
    return g


def _swap_glue(a: Graph, b: Graph, ea: tuple[int, int], eb: tuple[int, int]) -> Graph:
    """Drop edge ea of a and eb of b, join their first and second endpoints crosswise."""
    edges = (set(a.edges) - {ea}) | (set(b.edges) - {eb})
    edges |= {tuple(sorted((ea[0], eb[0]))), tuple(sorted((ea[1], eb[1])))}
    return Graph(a.nodes + b.nodes, edges)


def build_regular_glue(d1: int, m1: int, d2: int, m2: int) -> Construction:
    """Join a d1-regular and a d2-regular graph; copy universal certificates from two legal doubles."""
    if d1 == d2:
        raise PreconditionError("degrees must differ")
    if min(d1, d2) < 1:
        raise PreconditionError("degrees must be positive")
    G1 = circulant(m1, d1, 1)
    G1c = circulant(m1, d1, m1 + 1)
    G2 = circulant(m2, d2, 2 * m1 + 1)
    G2c = circulant(m2, d2, 2 * m1 + m2 + 1)
    e1 = (G1.nodes[0], G1.nodes[1])
    e1c = (G1c.nodes[0], G1c.nodes[1])
    e2 = (G2.nodes[0], G2.nodes[1])
    e2c = (G2c.nodes[0], G2c.nodes[1])
    star1 = _swap_glue(G1, G1c, e1, e1c)
    star2 = _swap_glue(G2, G2c, e2, e2c)
    star3 = _swap_glue(G1, G2, e1, e2)
    inst1, inst2, inst3 = (LabeledGraph(g, adjlist_labeling(g, g.edges), "adjlist")
                           for g in (star1, star2, star3))
    scheme = UniversalScheme(Language.REGULAR)
    c1, c2 = scheme.prove(inst1), scheme.prove(inst2)
    certs = {v: (c1[v] if v in G1.adj else c2[v]) for v in inst3.nodes}
    return Construction(f"REGULAR_GLUE({d1},{m1},{d2},{m2})", inst3, certs, scheme, {
        "bound": 2 * d1 + 2 * d2 + 4,
        "distance_lower_bound": min(m1, m2),
        "glue_nodes": (*e1, *e2),
    })


# --------------------------------------------------------------------------
# wrapper fakes


def directed_cycle(n: int) -> LabeledGraph:
    """Cycle 1..n with every node pointing at its successor."""
    if n < 3:
        raise PreconditionError("a cycle needs n >= 3")
    ids = list(range(1, n + 1))
    g = Graph(ids, list(zip(ids, ids[1:])) + [(1, n)])
    return LabeledGraph(g, {i: Pointer(i % n + 1) for i in ids}, "pointer")


def paired_cycle(n: int) -> LabeledGraph:
    """Even cycle where consecutive nodes point at each other: n/2 disjoint 2-cycles."""
    if n < 4 or n % 2:
        raise PreconditionError("paired cycle needs an even n >= 4")
    ids = list(range(1, n + 1))
    g = Graph(ids, list(zip(ids, ids[1:])) + [(1, n)])
    labels = {i: Pointer(i + 1 if i % 2 else i - 1) for i in ids}
    return LabeledGraph(g, labels, "pointer")


def build_wrapper_fakes(wrapped: WrappedScheme, instance: LabeledGraph,
                        inner_certs: dict[int, Any] | None = None) -> dict[int, WrappedCert]:
    """Booleans set bottom-up so that every fault is forwarded to the tree root.

    Members get the honest map. For nonmembers the inner certificates default to
    the first value of each node's inner domain.
    """
    if decide_membership(wrapped.language, instance):
        return wrapped.prove(instance)
    if inner_certs is None:
        doms = wrapped.inner.domains(instance)
        inner_certs = {v: doms[v][0] for v in instance.nodes}
    tree = wrapped.tree_certs(instance)
    views = build_views(instance, inner_certs)
    inner_ok = {v: verify_view(wrapped.inner, views[v]) for v in instance.nodes}
    kids = {v: [] for v in instance.nodes}
    for v, t in tree.items():
        if t.P != v:
            kids[t.P].append(v)
    b = {}
    for v in sorted(instance.nodes, key=lambda x: -tree[x].d):
        b[v] = inner_ok[v] and all(b[c] for c in kids[v])
    return {v: WrappedCert(inner_certs[v], tree[v], b[v]) for v in instance.nodes}


def build_wrapper_construction(inner: Scheme, instance: LabeledGraph) -> Construction:
    wrapped = WrappedScheme(inner)
    certs = build_wrapper_fakes(wrapped, instance)
    return Construction(f"WRAPPER_FAKE({inner.name}, n={instance.n})", instance, certs, wrapped,
                        {"expected_rejecting": (min(instance.nodes),)})


__all__ = [
    "Construction", "PreconditionError", "build_path_stp", "build_regular_glue",
    "build_wrapper_construction", "build_wrapper_fakes", "circulant", "directed_cycle",
    "paired_cycle", "path_graph", "path_pointing",
]
