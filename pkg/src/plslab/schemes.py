"""Concrete schemes: ACYCLIC, spanning tree (adjacency and pointer forms), universal, wrapper."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from functools import lru_cache

from .bits import BitReader, BitWriter, CodecContext, DecodeError, id_width
from .engine import ConjunctiveScheme, LocalView, Neighbor, Scheme, verify_view
from .graph import (AdjList, Bool, Graph, InstanceError, LabeledGraph, Pointer, Raw)
from .languages import DEFAULT_BUDGET, Language, decide_membership, iter_members


# --------------------------------------------------------------------------
# certificate values


@dataclass(frozen=True, order=True)
class AcyclicCert:
    d: int


@dataclass(frozen=True, order=True)
class StCert:
    I: int  # claimed root id
    P: int  # parent id, own id at the root
    d: int  # hop distance to the root


def _encode_st(cert: StCert, ctx: CodecContext) -> str:
    return BitWriter().uint(cert.I, ctx.width).uint(cert.P, ctx.width).uint(cert.d, ctx.width).getvalue()


def _read_st(reader: BitReader, ctx: CodecContext) -> StCert:
    return StCert(reader.uint(ctx.width), reader.uint(ctx.width), reader.uint(ctx.width))


def bfs_tree(adj, root: int) -> dict[int, tuple[int, int]]:
    """node -> (parent, depth) for a BFS from ``root`` (parent of root is root)."""
    out = {root: (root, 0)}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in sorted(adj[u]):
            if w not in out:
                out[w] = (u, out[u][1] + 1)
                queue.append(w)
    return out


def st_certs_for_tree(graph: Graph, tree_edges, root: int) -> dict[int, StCert]:
    adj = {v: set() for v in graph.nodes}
    for u, v in tree_edges:
        adj[u].add(v)
        adj[v].add(u)
    tree = bfs_tree(adj, root)
    return {v: StCert(root, p, d) for v, (p, d) in tree.items()}


def _st_domain(instance: LabeledGraph) -> list[StCert]:
    ids = instance.nodes
    return [StCert(i, p, d) for i in ids for p in ids for d in range(instance.n)]


# --------------------------------------------------------------------------
# ACYCLIC


def pointer_depths(instance: LabeledGraph) -> dict[int, int]:
    """Hops from each node to the null pointer ending its path (acyclic pointers only)."""
    labels = instance.labels
    depth: dict[int, int] = {}
    for start in instance.nodes:
        chain = []
        v = start
        while v not in depth and labels[v].target is not None:
            chain.append(v)
            v = labels[v].target
        base = depth.setdefault(v, 0)
        for u in reversed(chain):
            base += 1
            depth[u] = base
    return depth


class AcyclicScheme(ConjunctiveScheme):
    """Each node stores its hop distance to the null pointer at the end of its path."""

    name = "acyclic"
    language = Language.ACYCLIC

    def prove(self, instance):
        self.require_member(instance)
        depth = pointer_depths(instance)
        return {v: AcyclicCert(depth[v]) for v in instance.nodes}

    def self_ok(self, view):
        lab = view.label
        if not isinstance(lab, Pointer):
            return False
        if lab.target is None:
            return view.cert.d == 0
        return lab.target in view.neighbor_ids

    def pair_ok(self, view, nb):
        if view.label.target == nb.id:
            return nb.cert.d == view.cert.d - 1
        return True

    def encode(self, cert, ctx):
        return BitWriter().uint(cert.d, ctx.width).getvalue()

    def decode(self, bits, ctx):
        r = BitReader(bits)
        cert = AcyclicCert(r.uint(ctx.width))
        r.done()
        return cert

    def size_bound(self, ctx, n):
        return ctx.width

    def domains(self, instance):
        dom = [AcyclicCert(d) for d in range(instance.n)]
        return {v: dom for v in instance.nodes}


# --------------------------------------------------------------------------
# spanning tree, adjacency-list form


class StScheme(ConjunctiveScheme):
    """Root id, parent id and depth; labeled edges must be exactly the parent edges."""

    name = "st"
    language = Language.ST_L

    def prove(self, instance):
        self.require_member(instance)
        edges = {(u, v) for u in instance.nodes for v in instance.labels[u].ids if u < v}
        return st_certs_for_tree(instance.graph, edges, min(instance.nodes))

    def self_ok(self, view):
        lab, c = view.label, view.cert
        if not isinstance(lab, AdjList) or not lab.ids <= view.neighbor_ids:
            return False
        if c.P == view.id:
            return c.I == view.id and c.d == 0
        return c.P in lab.ids and c.I != view.id

    def pair_ok(self, view, nb):
        c, o = view.cert, nb.cert
        if o.I != c.I:
            return False
        listed = nb.id in view.label.ids
        if not isinstance(nb.label, AdjList) or listed != (view.id in nb.label.ids):
            return False
        if c.P == nb.id:
            return o.d == c.d - 1
        if listed:
            return o.P == view.id and o.d == c.d + 1
        return True

    def encode(self, cert, ctx):
        return _encode_st(cert, ctx)

    def decode(self, bits, ctx):
        r = BitReader(bits)
        cert = _read_st(r, ctx)
        r.done()
        return cert

    def size_bound(self, ctx, n):
        return 3 * ctx.width

    def domains(self, instance):
        dom = _st_domain(instance)
        return {v: dom for v in instance.nodes}


# --------------------------------------------------------------------------
# spanning tree, pointer form


class StpScheme(ConjunctiveScheme):
    """The spanning-tree certificate adapted to parent-pointer labels, rooted at the null node."""

    name = "stp"
    language = Language.ST_P

    def prove(self, instance):
        self.require_member(instance)
        labels = instance.labels
        root = next(v for v in instance.nodes if labels[v].target is None)
        depth = pointer_depths(instance)
        return {v: StCert(root, v if labels[v].target is None else labels[v].target, depth[v])
                for v in instance.nodes}

    def self_ok(self, view):
        lab, c = view.label, view.cert
        if not isinstance(lab, Pointer):
            return False
        if lab.target is None:
            return c.P == view.id and c.I == view.id and c.d == 0
        return lab.target in view.neighbor_ids and c.P == lab.target and c.I != view.id

    def pair_ok(self, view, nb):
        c, o = view.cert, nb.cert
        if o.I != c.I:
            return False
        if view.label.target == nb.id:
            return o.d == c.d - 1
        return True

    encode = StScheme.encode
    decode = StScheme.decode
    size_bound = StScheme.size_bound
    domains = StScheme.domains


# --------------------------------------------------------------------------
# universal scheme


@dataclass(frozen=True)
class UniversalCert:
    T: tuple[int, ...]
    M: tuple[tuple[int, ...], ...]
    L: tuple
    W: tuple | None = None  # (i, j, weight) for each edge i<j, row-major

    def instance(self, label_kind: str) -> LabeledGraph:
        n = len(self.T)
        edges = [(self.T[i], self.T[j]) for i in range(n) for j in range(i + 1, n) if self.M[i][j]]
        weights = None
        if self.W is not None:
            weights = {(self.T[i], self.T[j]): w for i, j, w in self.W}
        graph = Graph(self.T, edges, weights)
        return LabeledGraph(graph, dict(zip(self.T, self.L)), label_kind)


def universal_cert_of(instance: LabeledGraph, with_weights: bool = False) -> UniversalCert:
    T = instance.nodes
    idx = {v: i for i, v in enumerate(T)}
    n = len(T)
    M = [[0] * n for _ in range(n)]
    for u, v in instance.graph.edges:
        M[idx[u]][idx[v]] = M[idx[v]][idx[u]] = 1
    W = None
    if with_weights:
        g = instance.graph
        W = tuple((i, j, g.weight(T[i], T[j])) for i in range(n) for j in range(i + 1, n) if M[i][j])
    return UniversalCert(T, tuple(map(tuple, M)), tuple(instance.labels[v] for v in T), W)


WIDTH_HEADER_BITS = 6
_TAGS = {Pointer: 0, AdjList: 1, Bool: 2, Raw: 3}


def _write_label(w: BitWriter, lab, ctx: CodecContext) -> None:
    w.uint(_TAGS[type(lab)], 2)
    if isinstance(lab, Pointer):
        w.flag(lab.target is None)
        if lab.target is not None:
            w.uint(lab.target, ctx.width)
    elif isinstance(lab, AdjList):
        ids = sorted(lab.ids)
        w.uint(len(ids), ctx.width)
        for x in ids:
            w.uint(x, ctx.width)
    elif isinstance(lab, Bool):
        w.uint(lab.value, 1)
    else:
        w.uint(len(lab.data), 16)
        for byte in lab.data:
            w.uint(byte, 8)


def _read_label(r: BitReader, ctx: CodecContext):
    tag = r.uint(2)
    if tag == 0:
        return Pointer(None if r.flag() else r.uint(ctx.width))
    if tag == 1:
        count = r.uint(ctx.width)
        return AdjList(r.uint(ctx.width) for _ in range(count))
    if tag == 2:
        return Bool(r.uint(1))
    length = r.uint(16)
    return Raw(bytes(r.uint(8) for _ in range(length)))


class UniversalScheme(ConjunctiveScheme):
    """Every node holds the whole alleged instance; neighbors must hold identical copies."""

    def __init__(self, language: Language):
        self.language = language
        self.name = f"universal:{language.value}"
        self._memo: dict[UniversalCert, bool] = {}

    def described_member(self, cert: UniversalCert) -> bool:
        hit = self._memo.get(cert)
        if hit is None:
            try:
                hit = decide_membership(self.language, cert.instance(self.language.label_kind))
            except (InstanceError, ValueError, TypeError):
                hit = False
            if len(self._memo) > 200_000:
                self._memo.clear()
            self._memo[cert] = hit
        return hit

    def prove(self, instance):
        self.require_member(instance)
        cert = universal_cert_of(instance, self.language is Language.MST_L)
        return {v: cert for v in instance.nodes}

    def self_ok(self, view):
        c = view.cert
        n = len(c.T)
        if len(c.M) != n or len(c.L) != n or any(len(row) != n for row in c.M):
            return False
        i = c.T.index(view.id)
        if any(c.M[a][a] for a in range(n)):
            return False
        if any(c.M[a][b] != c.M[b][a] for a in range(n) for b in range(a)):
            return False
        if c.L[i] != view.label:
            return False
        if {c.T[j] for j in range(n) if c.M[i][j]} != view.neighbor_ids:
            return False
        if (self.language is Language.MST_L) != (c.W is not None):
            return False
        if c.W is not None:
            table = {(a, b): w for a, b, w in c.W}
            for nb in view.neighbors:
                j = c.T.index(nb.id)
                if table.get((min(i, j), max(i, j))) != nb.weight:
                    return False
        return self.described_member(c)

    def pair_ok(self, view, nb):
        # the neighbor's actual label must be the one the shared description assigns it
        c = view.cert
        return nb.cert == c and nb.id in c.T and c.L[c.T.index(nb.id)] == nb.label

    @staticmethod
    def _own_width(cert: UniversalCert, ctx: CodecContext) -> CodecContext:
        """A copied certificate may name ids absent from the host instance."""
        ids = [len(cert.T), *cert.T]
        for lab in cert.L:
            if isinstance(lab, Pointer) and lab.target is not None:
                ids.append(lab.target)
            elif isinstance(lab, AdjList):
                ids.extend(lab.ids)
        return replace(ctx, width=max(ctx.width, id_width(max(ids))))

    def encode(self, cert, ctx):
        ctx = self._own_width(cert, ctx)
        n = len(cert.T)
        w = BitWriter().uint(ctx.width, WIDTH_HEADER_BITS).uint(n, ctx.width)
        for x in cert.T:
            w.uint(x, ctx.width)
        w.raw("".join(str(b) for row in cert.M for b in row))
        for lab in cert.L:
            _write_label(w, lab, ctx)
        w.flag(cert.W is not None)
        if cert.W is not None:
            for _, _, weight in cert.W:
                w.uint(ctx.weight_rank(weight), ctx.weight_width)
        return w.getvalue()

    def decode(self, bits, ctx):
        r = BitReader(bits)
        ctx = replace(ctx, width=r.uint(WIDTH_HEADER_BITS))
        n = r.uint(ctx.width)
        T = tuple(r.uint(ctx.width) for _ in range(n))
        flat = r.take(n * n)
        M = tuple(tuple(int(flat[i * n + j]) for j in range(n)) for i in range(n))
        L = tuple(_read_label(r, ctx) for _ in range(n))
        W = None
        if r.flag():
            pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if M[i][j]]
            W = tuple((i, j, ctx.weight_at(r.uint(ctx.weight_width))) for i, j in pairs)
        r.done()
        return UniversalCert(T, M, L, W)

    def size_bound(self, ctx, n):
        per_label = {"pointer": 2 + 1 + ctx.width, "adjlist": 2 + ctx.width * n, "bool": 3}
        label_bits = per_label.get(ctx.label_kind, 2 + 16 + 8 * 64)
        weight_bits = (n * (n - 1) // 2) * ctx.weight_width if self.language is Language.MST_L else 0
        return WIDTH_HEADER_BITS + ctx.width * (n + 1) + n * n + n * label_bits + 1 + weight_bits

    def domains(self, instance, budget: int = DEFAULT_BUDGET):
        dom = _universal_domain(self.language, instance.graph, budget)
        return {v: dom for v in instance.nodes}


@lru_cache(maxsize=256)
def _universal_domain(language: Language, graph: Graph, budget: int) -> tuple:
    with_w = language is Language.MST_L
    return tuple(universal_cert_of(m, with_w) for m in iter_members(language, graph, budget))


# --------------------------------------------------------------------------
# wrapper


@dataclass(frozen=True)
class WrappedCert:
    inner: object
    tree: StCert
    b: bool


class WrappedScheme(Scheme):
    """Sound, complete, and never error-sensitive: a boolean flag funnels every fault to the root."""

    def __init__(self, inner: Scheme):
        self.inner = inner
        self.language = inner.language
        self.name = f"wrapped:{inner.name}"

    def prove(self, instance):
        inner = self.inner.prove(instance)
        tree = self.tree_certs(instance)
        return {v: WrappedCert(inner[v], tree[v], True) for v in instance.nodes}

    @staticmethod
    def tree_certs(instance: LabeledGraph) -> dict[int, StCert]:
        root = min(instance.nodes)
        tree = bfs_tree(instance.graph.adj, root)
        return {v: StCert(root, p, d) for v, (p, d) in tree.items()}

    def inner_view(self, view: LocalView) -> LocalView:
        nbs = tuple(Neighbor(nb.id, nb.label, nb.cert.inner, nb.weight) for nb in view.neighbors)
        return LocalView(view.id, view.label, view.cert.inner, nbs)

    @staticmethod
    def children(view: LocalView) -> list[Neighbor]:
        return [nb for nb in view.neighbors if nb.cert.tree.P == view.id]

    @staticmethod
    def _tree_self(view) -> bool:
        t = view.cert.tree
        if t.P == view.id:
            return t.I == view.id and t.d == 0
        return t.P in view.neighbor_ids and t.I != view.id

    @staticmethod
    def _tree_pair(view, nb) -> bool:
        t, o = view.cert.tree, nb.cert.tree
        if o.I != t.I:
            return False
        if t.P == nb.id:
            return o.d == t.d - 1
        return True

    @staticmethod
    def _vouches(view) -> bool:
        """Roots and nodes with b set must see a clean inner check and clean children."""
        return view.cert.tree.P == view.id or view.cert.b

    def self_ok(self, view):
        if not self._tree_self(view):
            return False
        if not self._vouches(view):
            return True
        return self.inner.self_ok(LocalView(view.id, view.label, view.cert.inner, view.neighbors))

    def pair_ok(self, view, nb):
        if not self._tree_pair(view, nb):
            return False
        if not self._vouches(view):
            return True
        if nb.cert.tree.P == view.id and not nb.cert.b:
            return False
        return self.inner.pair_ok(LocalView(view.id, view.label, view.cert.inner, ()),
                                  Neighbor(nb.id, nb.label, nb.cert.inner, nb.weight))

    def tree_ok(self, view) -> bool:
        return self._tree_self(view) and all(self._tree_pair(view, nb) for nb in view.neighbors)

    def verify(self, view):
        if not self.tree_ok(view):
            return False
        inner_ok = verify_view(self.inner, self.inner_view(view))
        kids_ok = all(nb.cert.b for nb in self.children(view))
        if view.cert.tree.P == view.id:
            return inner_ok and kids_ok
        if view.cert.b:
            return inner_ok and kids_ok
        return not inner_ok or not kids_ok

    def encode(self, cert, ctx):
        return self.inner.encode(cert.inner, ctx) + _encode_st(cert.tree, ctx) + ("1" if cert.b else "0")

    def decode(self, bits, ctx):
        tail = 3 * ctx.width + 1
        if len(bits) < tail:
            raise DecodeError("certificate too short")
        inner = self.inner.decode(bits[:-tail], ctx)
        r = BitReader(bits[-tail:])
        tree = _read_st(r, ctx)
        b = r.flag()
        r.done()
        return WrappedCert(inner, tree, b)

    def size_bound(self, ctx, n):
        return self.inner.size_bound(ctx, n) + 3 * ctx.width + 1

    def domains(self, instance):
        inner = self.inner.domains(instance)
        trees = _st_domain(instance)
        return {v: [WrappedCert(c, t, b) for c in inner[v] for t in trees for b in (False, True)]
                for v in instance.nodes}


# --------------------------------------------------------------------------
# registry


def make_scheme(name: str) -> Scheme:
    """Scheme by name: acyclic, st, stp, mst, universal:<LANG>, wrapped:<scheme>."""
    name = name.strip()
    low = name.lower()
    if low.startswith("wrapped:"):
        return WrappedScheme(make_scheme(name.split(":", 1)[1]))
    if low.startswith("universal:"):
        return UniversalScheme(Language.parse(name.split(":", 1)[1]))
    if low == "acyclic":
        return AcyclicScheme()
    if low == "st":
        return StScheme()
    if low == "stp":
        return StpScheme()
    if low == "mst":
        from .mst import MstScheme
        return MstScheme()
    raise ValueError(f"unknown scheme {name!r}")


DEFAULT_SCHEME = {
    Language.ACYCLIC: "acyclic",
    Language.ST_L: "st",
    Language.ST_P: "stp",
    Language.MST_L: "mst",
    Language.LEADER: "universal:LEADER",
    Language.REGULAR: "universal:REGULAR",
}
