"""Borůvka-layered MST certificates: O(log^2 n) bits per node.

Round i of a node's certificate describes the fragment holding the node when
round i starts: the fragment name (its minimum id), a BFS tree of the fragment
rooted at that node, a second BFS tree rooted at the fragment's endpoint of its
lightest outgoing edge, and that edge (other endpoint and weight).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .bits import BitReader, BitWriter, DecodeError
from .engine import ConjunctiveScheme, LocalView, Neighbor
from .graph import AdjList, Graph, LabeledGraph
from .languages import DEFAULT_BUDGET, BudgetExceeded, Language
from .schemes import StCert, StScheme, _encode_st, _read_st, bfs_tree, st_certs_for_tree
from .spanning import count_spanning_trees, spanning_trees

NO_EDGE = 0  # endpoint value of the "fragment skipped its turn" sentinel
ROUND_COUNT_BITS = 8


@dataclass(frozen=True)
class RoundRecord:
    frag: int
    p1: int
    d1: int
    p2: int
    d2: int
    moe_to: int
    moe_w: Fraction | None

    @property
    def sentinel(self) -> bool:
        return self.moe_to == NO_EDGE


@dataclass(frozen=True)
class MstCert:
    rounds: tuple[RoundRecord, ...]
    final: StCert


@dataclass(frozen=True)
class FragmentRound:
    """Fragments after ``index`` merging rounds, and the edges merged in that round."""

    index: int
    fragment: Mapping[int, int]
    merged: frozenset


def round_count(n: int) -> int:
    return max(0, (n - 1).bit_length())


def _fragments(frag: Mapping[int, int]) -> dict[int, set[int]]:
    groups: dict[int, set[int]] = {}
    for v, f in frag.items():
        groups.setdefault(f, set()).add(v)
    return groups


def _boruvka(graph: Graph, tree_edges) -> list[tuple[dict[int, int], dict[int, tuple[int, int, Fraction]]]]:
    """Borůvka restricted to ``tree_edges``.

    Returns, per round, (fragment map at the start of the round, chosen edge per
    fragment as (inside endpoint, outside endpoint, weight)).
    """
    tree_edges = sorted(tree_edges)
    frag = {v: v for v in graph.nodes}
    out = []
    while len(set(frag.values())) > 1:
        best: dict[int, tuple[int, int, Fraction]] = {}
        for u, v in tree_edges:
            if frag[u] == frag[v]:
                continue
            w = graph.weights[(u, v)]
            for a, b in ((u, v), (v, u)):
                cur = best.get(frag[a])
                if cur is None or w < cur[2]:
                    best[frag[a]] = (a, b, w)
        if len(best) != len(set(frag.values())):
            raise ValueError("edges do not connect the graph")
        out.append((dict(frag), best))
        parent = {f: f for f in set(frag.values())}

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        for a, b, _ in best.values():
            ra, rb = find(frag[a]), find(frag[b])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        roots = {f: find(f) for f in parent}
        groups = _fragments({v: roots[f] for v, f in frag.items()})
        frag = {v: min(members) for members in groups.values() for v in members}
    out.append((frag, {}))
    return out


def boruvka_rounds(instance: LabeledGraph) -> list[FragmentRound]:
    """Parallel Borůvka over the labeled tree edges of an MST_L member."""
    MstScheme().require_member(instance)
    edges = {(u, v) for u in instance.nodes for v in instance.labels[u].ids if u < v}
    run = _boruvka(instance.graph, edges)
    rounds = [FragmentRound(0, run[0][0], frozenset())]
    for i in range(1, len(run)):
        merged = frozenset(tuple(sorted((a, b))) for a, b, _ in run[i - 1][1].values())
        rounds.append(FragmentRound(i, run[i][0], merged))
    return rounds


def certs_for_tree(graph: Graph, tree_edges) -> dict[int, MstCert]:
    """Prover-style certificates built by running Borůvka on ``tree_edges``.

    Honest when ``tree_edges`` is the MST; for any other spanning tree these are
    the natural forged certificates an adversary would start from.
    """
    tree_edges = frozenset(tuple(sorted(e)) for e in tree_edges)
    run = _boruvka(graph, tree_edges)
    adj = {v: set() for v in graph.nodes}
    for u, v in tree_edges:
        adj[u].add(v)
        adj[v].add(u)
    records: dict[int, list[RoundRecord]] = {v: [] for v in graph.nodes}
    total = round_count(graph.n)
    for i in range(total):
        frag, best = run[min(i, len(run) - 1)]
        for name, members in _fragments(frag).items():
            inner = {v: adj[v] & members for v in members}
            t1 = bfs_tree(inner, name)
            if name in best:
                a, b, w = best[name]
                t2 = bfs_tree(inner, a)
                moe = (b, w)
            else:
                t2, moe = t1, (NO_EDGE, None)
            for v in members:
                records[v].append(RoundRecord(name, t1[v][0], t1[v][1], t2[v][0], t2[v][1], *moe))
    final = st_certs_for_tree(graph, tree_edges, min(graph.nodes))
    return {v: MstCert(tuple(records[v]), final[v]) for v in graph.nodes}


_ST = StScheme()


class MstScheme(ConjunctiveScheme):
    name = "mst"
    language = Language.MST_L

    def prove(self, instance):
        self.require_member(instance)
        edges = {(u, v) for u in instance.nodes for v in instance.labels[u].ids if u < v}
        return certs_for_tree(instance.graph, edges)

    # -- verifier -----------------------------------------------------------
    # Every rule involves the node alone or the node and one neighbor, so the
    # verifier is the conjunction of ``self_ok`` and one ``pair_ok`` per neighbor.

    def self_ok(self, view):
        u, lab, c = view.id, view.label, view.cert
        if not isinstance(lab, AdjList) or not lab.ids <= view.neighbor_ids:
            return False
        for r in c.rounds:
            for parent, dist in ((r.p1, r.d1), (r.p2, r.d2)):
                if parent == u and dist != 0:
                    return False
                if parent != u and parent not in lab.ids:
                    return False
                if r.sentinel:
                    break
            if r.p1 == u and r.frag != u:
                return False
            if r.sentinel:
                if r.moe_w is not None:
                    return False
            elif r.p2 == u and r.moe_to not in lab.ids:
                return False
        return _ST.self_ok(LocalView(u, lab, c.final, view.neighbors))

    def pair_ok(self, view, nb):
        u, lab, c, o = view.id, view.label, view.cert, nb.cert
        R = len(c.rounds)
        if len(o.rounds) != R or not isinstance(nb.label, AdjList):
            return False
        if (nb.id in lab.ids) != (u in nb.label.ids):
            return False
        for i, r in enumerate(c.rounds):
            q = o.rounds[i]
            same = q.frag == r.frag
            if r.p1 == nb.id != u and not (same and q.d1 == r.d1 - 1):
                return False
            if same:
                for j in range(i, R):
                    a, b = c.rounds[j], o.rounds[j]
                    if a.frag != b.frag or (a.moe_to, a.moe_w) != (b.moe_to, b.moe_w):
                        return False
            if r.sentinel:
                continue
            if r.p2 == nb.id != u and not (same and q.d2 == r.d2 - 1):
                return False
            is_root2 = r.p2 == u
            merges_here = is_root2 and nb.id == r.moe_to
            if merges_here:
                if nb.weight != r.moe_w or same:
                    return False
                if i + 1 < R and o.rounds[i + 1].frag != c.rounds[i + 1].frag:
                    return False
            if not same:
                if nb.weight < r.moe_w or (nb.weight == r.moe_w and not merges_here):
                    return False
            if not q.sentinel and q.p2 == nb.id and q.moe_to == u and i + 1 < R:
                if o.rounds[i + 1].frag != c.rounds[i + 1].frag:
                    return False
        # a labeled edge must be certified as some fragment's lightest edge
        if nb.id in lab.ids and not any(
                self._merged_by(c.rounds[i], u, nb.id) or self._merged_by(o.rounds[i], nb.id, u)
                for i in range(R)):
            return False
        return _ST.pair_ok(LocalView(u, lab, c.final, ()),
                           Neighbor(nb.id, nb.label, o.final, nb.weight))

    @staticmethod
    def _merged_by(rec: RoundRecord, owner: int, other: int) -> bool:
        return not rec.sentinel and rec.p2 == owner and rec.moe_to == other

    # -- codec --------------------------------------------------------------

    def encode(self, cert, ctx):
        w = BitWriter().uint(len(cert.rounds), ROUND_COUNT_BITS)
        for r in cert.rounds:
            for x in (r.frag, r.p1, r.d1, r.p2, r.d2, r.moe_to):
                w.uint(x, ctx.width)
            w.uint(0 if r.sentinel else ctx.weight_rank(r.moe_w), ctx.weight_width)
        return w.getvalue() + _encode_st(cert.final, ctx)

    def decode(self, bits, ctx):
        r = BitReader(bits)
        count = r.uint(ROUND_COUNT_BITS)
        rounds = []
        for _ in range(count):
            frag, p1, d1, p2, d2, to = (r.uint(ctx.width) for _ in range(6))
            rank = r.uint(ctx.weight_width)
            if to == NO_EDGE:
                if rank:
                    raise DecodeError("sentinel round carries a weight")
                weight = None
            else:
                weight = ctx.weight_at(rank)
            rounds.append(RoundRecord(frag, p1, d1, p2, d2, to, weight))
        final = _read_st(r, ctx)
        r.done()
        return MstCert(tuple(rounds), final)

    @staticmethod
    def bits_formula(width: int, rounds: int) -> int:
        """Exact length: count byte, 6 id-width fields plus a 2-width rank per round, final tree."""
        return ROUND_COUNT_BITS + rounds * 8 * width + 3 * width

    def size_bound(self, ctx, n):
        return self.bits_formula(ctx.width, round_count(n))

    def domains(self, instance, budget: int = DEFAULT_BUDGET):
        """Cross-assignments of prover-style certificates over every spanning tree of the graph."""
        count = count_spanning_trees(instance.graph)
        if count > budget:
            raise BudgetExceeded(f"{count} spanning trees exceed budget {budget}")
        return tree_cert_domains(instance.graph)


@lru_cache(maxsize=256)
def tree_cert_domains(graph: Graph) -> dict[int, tuple]:
    per_node: dict[int, dict[MstCert, None]] = {v: {} for v in graph.nodes}
    for tree in spanning_trees(graph):
        for v, cert in certs_for_tree(graph, tree).items():
            per_node[v].setdefault(cert)
    return {v: tuple(d) for v, d in per_node.items()}
