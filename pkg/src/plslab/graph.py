"""Graphs, labels and labeled instances, plus the canonical instance file format."""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union


class InstanceError(ValueError):
    """Raised when an instance violates a structural invariant."""


# --------------------------------------------------------------------------
# labels


@dataclass(frozen=True, order=True)
class Pointer:
    target: int | None  # None is the null pointer


@dataclass(frozen=True)
class AdjList:
    ids: frozenset

    def __init__(self, ids: Iterable[int] = ()):
        object.__setattr__(self, "ids", frozenset(ids))

    def __repr__(self) -> str:
        return f"AdjList({sorted(self.ids)})"


@dataclass(frozen=True, order=True)
class Bool:
    value: int

    def __post_init__(self):
        if self.value not in (0, 1):
            raise InstanceError(f"boolean label must be 0 or 1, got {self.value!r}")


@dataclass(frozen=True, order=True)
class Raw:
    data: bytes = b""


Label = Union[Pointer, AdjList, Bool, Raw]

LABEL_KINDS = ("pointer", "adjlist", "bool", "raw")
_KIND_OF = {Pointer: "pointer", AdjList: "adjlist", Bool: "bool", Raw: "raw"}


def label_kind_of(label: Label) -> str:
    return _KIND_OF[type(label)]


def label_key(label: Label) -> tuple:
    """Total order over labels of any variant (used for canonical forms)."""
    if isinstance(label, Pointer):
        return (0, -1 if label.target is None else label.target)
    if isinstance(label, AdjList):
        return (1, tuple(sorted(label.ids)))
    if isinstance(label, Bool):
        return (2, label.value)
    return (3, label.data)


# --------------------------------------------------------------------------
# graphs


def _edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph over positive integer ids, optionally weighted.

    Immutable. Equality and hashing are structural.
    """

    nodes: tuple[int, ...]
    edges: frozenset
    weights: Mapping[tuple[int, int], Fraction] | None = None
    allow_disconnected: bool = False
    adj: Mapping[int, frozenset] = field(init=False, repr=False)

    def __init__(self, nodes, edges=(), weights=None, allow_disconnected=False):
        nodes = tuple(sorted(nodes))
        if len(set(nodes)) != len(nodes):
            raise InstanceError("duplicate node id")
        for v in nodes:
            if not isinstance(v, int) or isinstance(v, bool) or v <= 0:
                raise InstanceError(f"node id must be a positive integer, got {v!r}")
        node_set = set(nodes)
        norm = set()
        for u, v in edges:
            if u == v:
                raise InstanceError(f"self-loop at node {u}")
            if u not in node_set or v not in node_set:
                raise InstanceError(f"edge {{{u},{v}}} references an unknown node")
            e = _edge(u, v)
            if e in norm:
                raise InstanceError(f"parallel edge {{{u},{v}}}")
            norm.add(e)
        wmap = None
        if weights is not None:
            wmap = {}
            for e, w in weights.items():
                e = _edge(*e)
                if e not in norm:
                    raise InstanceError(f"weight given for non-edge {e}")
                w = Fraction(w)
                if w <= 0:
                    raise InstanceError(f"edge weight must be positive, got {w}")
                wmap[e] = w
            if set(wmap) != norm:
                raise InstanceError("weighted graph must weight every edge")
            if len(set(wmap.values())) != len(wmap):
                raise InstanceError("duplicate edge weight")
        adj = {v: set() for v in nodes}
        for u, v in norm:
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", frozenset(norm))
        object.__setattr__(self, "weights", wmap)
        object.__setattr__(self, "allow_disconnected", bool(allow_disconnected))
        object.__setattr__(self, "adj", {v: frozenset(s) for v, s in adj.items()})
        if not allow_disconnected and not self.is_connected():
            raise InstanceError("graph is disconnected")

    # structural identity -------------------------------------------------
    def _key(self):
        w = None if self.weights is None else tuple(sorted(self.weights.items()))
        return (self.nodes, tuple(sorted(self.edges)), w)

    def __eq__(self, other):
        return isinstance(other, Graph) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    # queries -------------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def weighted(self) -> bool:
        return self.weights is not None

    @property
    def max_id(self) -> int:
        return self.nodes[-1] if self.nodes else 0

    def neighbors(self, v: int) -> frozenset:
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj.get(u, ())

    def weight(self, u: int, v: int) -> Fraction | None:
        if self.weights is None:
            return None
        return self.weights[_edge(u, v)]

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def is_connected(self) -> bool:
        if not self.nodes:
            return True
        seen = {self.nodes[0]}
        queue = deque(seen)
        while queue:
            u = queue.popleft()
            for w in self.adj[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == len(self.nodes)

    def distances_from(self, src: int) -> dict[int, int]:
        dist = {src: 0}
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for w in self.adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist


# --------------------------------------------------------------------------
# labeled graphs


@dataclass(frozen=True, eq=False)
class LabeledGraph:
    graph: Graph
    labels: Mapping[int, Label]
    label_kind: str

    def __init__(self, graph: Graph, labels: Mapping[int, Label], label_kind: str | None = None):
        labels = dict(labels)
        if set(labels) != set(graph.nodes):
            raise InstanceError("labeling must be defined on exactly the node set")
        for v, lab in labels.items():
            if not isinstance(lab, (Pointer, AdjList, Bool, Raw)):
                raise InstanceError(f"node {v}: not a label: {lab!r}")
            if isinstance(lab, Pointer) and lab.target is not None and lab.target not in graph.adj:
                raise InstanceError(f"node {v}: pointer to unknown node {lab.target}")
        if label_kind is None:
            kinds = {label_kind_of(lab) for lab in labels.values()} - {"raw"}
            label_kind = kinds.pop() if len(kinds) == 1 else "raw"
        if label_kind not in LABEL_KINDS:
            raise InstanceError(f"unknown label kind {label_kind!r}")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "label_kind", label_kind)

    def _key(self):
        return (self.graph._key(), self.label_kind,
                tuple(label_key(self.labels[v]) for v in self.graph.nodes))

    def __eq__(self, other):
        return isinstance(other, LabeledGraph) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def nodes(self) -> tuple[int, ...]:
        return self.graph.nodes

    @property
    def n(self) -> int:
        return self.graph.n

    def label(self, v: int) -> Label:
        return self.labels[v]

    def relabeled(self, changes: Mapping[int, Label]) -> "LabeledGraph":
        labels = dict(self.labels)
        labels.update(changes)
        return LabeledGraph(self.graph, labels, self.label_kind)


def edit_distance_between(a: LabeledGraph, b: LabeledGraph) -> int:
    """Number of nodes whose labels differ; both instances must share the graph."""
    if a.graph != b.graph:
        raise InstanceError("labelings are over different graphs")
    return sum(1 for v in a.nodes if a.labels[v] != b.labels[v])


def labeled_edges(instance: LabeledGraph, symmetric_only: bool = False) -> set[tuple[int, int]]:
    """Graph edges listed by an endpoint's adjacency list (by both, if symmetric_only)."""
    out = set()
    g = instance.graph
    for u, v in g.edges:
        lu, lv = instance.labels[u], instance.labels[v]
        in_u = isinstance(lu, AdjList) and v in lu.ids
        in_v = isinstance(lv, AdjList) and u in lv.ids
        if (in_u and in_v) if symmetric_only else (in_u or in_v):
            out.add((u, v))
    return out


def adjlist_labeling(graph: Graph, edges: Iterable[tuple[int, int]]) -> dict[int, AdjList]:
    nbrs = {v: set() for v in graph.nodes}
    for u, v in edges:
        nbrs[u].add(v)
        nbrs[v].add(u)
    return {v: AdjList(s) for v, s in nbrs.items()}


# --------------------------------------------------------------------------
# instance files


def _label_to_json(label: Label, kind: str):
    if isinstance(label, Raw) and kind != "raw":
        return {"raw": label.data.hex()}
    if isinstance(label, Pointer):
        return label.target
    if isinstance(label, AdjList):
        return sorted(label.ids)
    if isinstance(label, Bool):
        return label.value
    return label.data.hex()


def _label_from_json(value, kind: str) -> Label:
    if isinstance(value, dict):
        if set(value) != {"raw"}:
            raise InstanceError(f"bad label object {value!r}")
        return Raw(bytes.fromhex(value["raw"]))
    if kind == "pointer":
        if value is not None and (not isinstance(value, int) or isinstance(value, bool)):
            raise InstanceError(f"pointer label must be an id or null, got {value!r}")
        return Pointer(value)
    if kind == "adjlist":
        if value is None:
            return AdjList()
        if not isinstance(value, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in value):
            raise InstanceError(f"adjlist label must be a list of ids, got {value!r}")
        if len(set(value)) != len(value):
            raise InstanceError(f"adjlist label has repeated ids: {value!r}")
        return AdjList(value)
    if kind == "bool":
        if isinstance(value, bool) or value not in (0, 1):
            raise InstanceError(f"bool label must be 0 or 1, got {value!r}")
        return Bool(int(value))
    if kind == "raw":
        if not isinstance(value, str):
            raise InstanceError(f"raw label must be a hex string, got {value!r}")
        try:
            return Raw(bytes.fromhex(value))
        except ValueError as exc:
            raise InstanceError(f"raw label is not hex: {value!r}") from exc
    raise InstanceError(f"unknown label kind {kind!r}")


def _weight_to_json(w: Fraction):
    return w.numerator if w.denominator == 1 else f"{w.numerator}/{w.denominator}"


def _weight_from_json(value) -> Fraction:
    if isinstance(value, bool):
        raise InstanceError(f"bad weight {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except ValueError as exc:
            raise InstanceError(f"bad weight {value!r}") from exc
    raise InstanceError(f"weights must be integers or 'p/q' strings, got {value!r}")


def instance_to_dict(instance: LabeledGraph) -> dict:
    g = instance.graph
    edges = []
    for u, v in g.sorted_edges():
        e = {"u": u, "v": v}
        if g.weighted:
            e["weight"] = _weight_to_json(g.weights[(u, v)])
        edges.append(e)
    doc = {
        "label_kind": instance.label_kind,
        "nodes": [{"id": v, "label": _label_to_json(instance.labels[v], instance.label_kind)}
                  for v in g.nodes],
        "edges": edges,
    }
    if g.allow_disconnected:
        doc["allow_disconnected"] = True
    return doc


def instance_from_dict(doc) -> LabeledGraph:
    if not isinstance(doc, dict):
        raise InstanceError("instance must be a JSON object")
    unknown = set(doc) - {"label_kind", "nodes", "edges", "allow_disconnected"}
    if unknown:
        raise InstanceError(f"unknown instance fields: {sorted(unknown)}")
    try:
        kind = doc["label_kind"]
        raw_nodes = doc["nodes"]
        raw_edges = doc.get("edges", [])
    except KeyError as exc:
        raise InstanceError(f"missing field {exc.args[0]!r}") from None
    if kind not in LABEL_KINDS:
        raise InstanceError(f"unknown label kind {kind!r}")
    if not isinstance(raw_nodes, list) or not isinstance(raw_edges, list):
        raise InstanceError("'nodes' and 'edges' must be lists")
    ids, labels = [], {}
    for entry in raw_nodes:
        if not isinstance(entry, dict) or "id" not in entry:
            raise InstanceError(f"bad node entry {entry!r}")
        v = entry["id"]
        if v in labels:
            raise InstanceError(f"duplicate node id {v}")
        ids.append(v)
        labels[v] = _label_from_json(entry.get("label"), kind)
    edges, weights = [], {}
    weighted = None
    for entry in raw_edges:
        if not isinstance(entry, dict) or "u" not in entry or "v" not in entry:
            raise InstanceError(f"bad edge entry {entry!r}")
        e = (entry["u"], entry["v"])
        has_w = "weight" in entry
        if weighted is None:
            weighted = has_w
        elif weighted != has_w:
            raise InstanceError("either every edge is weighted or none is")
        edges.append(e)
        if has_w:
            weights[e] = _weight_from_json(entry["weight"])
    graph = Graph(ids, edges, weights if weighted else None,
                  allow_disconnected=bool(doc.get("allow_disconnected", False)))
    return LabeledGraph(graph, labels, kind)


def parse_instance(text: str) -> LabeledGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"malformed instance file: {exc}") from None
    return instance_from_dict(doc)


def serialize_instance(instance: LabeledGraph) -> str:
    return json.dumps(instance_to_dict(instance), indent=1, sort_keys=False) + "\n"
