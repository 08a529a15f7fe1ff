"""Bounded adversarial search over certificate maps, sensitivity sweeps, stability probes."""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping, Sequence

import numpy as np

from . import kernels
from .corpus import connected_graphs
from .engine import ConjunctiveScheme, LocalView, Neighbor, Scheme, run_verifier, verify_view
from .graph import AdjList, Graph, LabeledGraph, Pointer
from .languages import (DEFAULT_BUDGET, Language, decide_membership, distance_by_table,
                        edit_distance_to_language, iter_members, label_code, member_table)
from .schemes import AcyclicCert, AcyclicScheme, StCert, StpScheme, StScheme

SCOPE_NOTE = ("bounded-space experiment: k-min is over the declared per-node certificate "
              "domains and the listed corpus only")


# --------------------------------------------------------------------------
# certificate spaces and search results


@dataclass(frozen=True)
class CertSpace:
    """Finite per-node certificate domains, searched in list order."""

    domains: Mapping[int, Sequence]
    description: str = ""

    @property
    def size(self) -> int:
        return math.prod(len(d) for d in self.domains.values())

    @classmethod
    def default(cls, scheme: Scheme, instance: LabeledGraph) -> "CertSpace":
        return cls(scheme.domains(instance), f"{scheme.name} default domains")


@dataclass
class SearchResult:
    """Outcome of a certificate search.

    ``k`` is the fewest rejections seen (None if nothing below the cutoff was
    seen). When ``exhaustive`` is true, ``lower_bound`` is proven over the whole
    space: it equals ``k`` if a map was found, else the cutoff.
    """

    k: int | None
    witness: dict[int, Any] | None
    exhaustive: bool
    lower_bound: int
    visits: int = 0
    method: str = ""


def _kernel_kind(scheme: Scheme) -> int | None:
    return {AcyclicScheme: 0, StScheme: 1, StpScheme: 2}.get(type(scheme))


def kernel_arrays(instance: LabeledGraph):
    """Integer tables the search kernels consume (see ``_kernels_py``)."""
    g = instance.graph
    n = g.n
    idx = {v: i for i, v in enumerate(g.nodes)}
    adj = np.zeros((n, n), dtype=np.intc)
    for u, v in g.edges:
        adj[idx[u], idx[v]] = adj[idx[v], idx[u]] = 1
    ptr = np.full(n, -2, dtype=np.intc)
    lab = np.zeros((n, n), dtype=np.intc)
    is_adj = np.zeros(n, dtype=np.intc)
    sub_ok = np.zeros(n, dtype=np.intc)
    for v in g.nodes:
        i, x = idx[v], instance.labels[v]
        if isinstance(x, Pointer):
            if x.target is None:
                ptr[i] = -1
            elif x.target in g.adj[v]:
                ptr[i] = idx[x.target]
        elif isinstance(x, AdjList):
            is_adj[i] = 1
            sub_ok[i] = int(x.ids <= g.adj[v])
            for u in x.ids & g.adj[v]:
                lab[i, idx[u]] = 1
    return adj, ptr, lab, is_adj, sub_ok


def kernel_cert(kind: int, instance: LabeledGraph, code: int):
    n = instance.n
    if kind == 0:
        return AcyclicCert(code)
    ids = instance.nodes
    return StCert(ids[code // (n * n)], ids[(code // n) % n], code % n)


def kernel_code(kind: int, instance: LabeledGraph, cert) -> int:
    if kind == 0:
        return cert.d
    n = instance.n
    pos = {v: i for i, v in enumerate(instance.nodes)}
    return (pos[cert.I] * n + pos[cert.P]) * n + cert.d


def _count(scheme, instance, certs) -> int:
    return run_verifier(scheme, instance, certs).k


# --------------------------------------------------------------------------
# branch and bound


def _branch_and_bound(scheme: Scheme, instance: LabeledGraph, domains, cutoff: int, budget: int):
    """Generic search in ascending id order; returns (best, witness, visits, complete)."""
    g = instance.graph
    nodes = list(g.nodes)
    n = len(nodes)
    pos = {v: i for i, v in enumerate(nodes)}
    doms = [list(domains[v]) for v in nodes]
    nbrs = [sorted(pos[w] for w in g.adj[v]) for v in nodes]
    closes = [[] for _ in range(n)]
    for i in range(n):
        closes[max([i] + nbrs[i])].append(i)
    conjunctive = isinstance(scheme, ConjunctiveScheme)
    labels = [instance.labels[v] for v in nodes]
    weights = [[g.weight(nodes[i], nodes[j]) if j in nbrs[i] else None for j in range(n)]
               for i in range(n)]
    templates = [tuple(Neighbor(nodes[j], labels[j], None, weights[i][j]) for j in nbrs[i])
                 for i in range(n)]

    def partial_view(i, value):
        return LocalView(nodes[i], labels[i], value, templates[i])

    def safe(fn, *args):
        try:
            return bool(fn(*args))
        except (TypeError, ValueError, AttributeError, KeyError, IndexError):
            return False

    ok_self = [[safe(scheme.self_ok, partial_view(i, c)) for c in doms[i]] for i in range(n)]
    pair_cache: dict = {}

    def pair(i, ci, j, cj):
        key = (i, ci, j, cj)
        hit = pair_cache.get(key)
        if hit is None:
            nb = Neighbor(nodes[j], labels[j], doms[j][cj], weights[i][j])
            hit = safe(scheme.pair_ok, partial_view(i, doms[i][ci]), nb)
            pair_cache[key] = hit
        return hit

    # nodes that reject whatever certificates are chosen give a static lower bound
    doomed = [not any(ok_self[i]) for i in range(n)]
    for i in range(n):
        for j in nbrs[i]:
            if doomed[i] or len(doms[i]) * len(doms[j]) > 4096:
                continue
            doomed[i] = not any(pair(i, ci, j, cj) for ci in range(len(doms[i]))
                                if ok_self[i][ci] for cj in range(len(doms[j])))
    ahead = [0] * (n + 1)
    for t in range(n - 1, -1, -1):
        ahead[t] = ahead[t + 1] + doomed[t]
    if ahead[0] >= cutoff:
        return cutoff, None, 0, True

    full_cache: dict = {}

    def full(i):
        key = (i, choice[i], tuple(choice[j] for j in nbrs[i]))
        hit = full_cache.get(key)
        if hit is None:
            nbs = tuple(Neighbor(nodes[j], labels[j], doms[j][choice[j]], weights[i][j]) for j in nbrs[i])
            hit = verify_view(scheme, LocalView(nodes[i], labels[i], doms[i][choice[i]], nbs))
            if len(full_cache) > 500_000:
                full_cache.clear()
            full_cache[key] = hit
        return hit

    choice = [0] * n
    reasons = [0] * n
    st = {"best": cutoff, "witness": None, "visits": 0, "dead": 0}

    def mark(i, marks):
        if reasons[i] == 0:
            st["dead"] += 1
        reasons[i] += 1
        marks.append(i)

    def rec(t):
        if t == n:
            st["best"] = st["dead"]
            st["witness"] = {nodes[i]: doms[i][choice[i]] for i in range(n)}
            return True
        for ci in range(len(doms[t])):
            st["visits"] += 1
            if st["visits"] > budget:
                return False
            choice[t] = ci
            marks: list[int] = []
            if not ok_self[t][ci]:
                mark(t, marks)
            for j in nbrs[t]:
                if j >= t:
                    break
                if not pair(t, ci, j, choice[j]):
                    mark(t, marks)
                if not pair(j, choice[j], t, ci):
                    mark(j, marks)
            if not conjunctive:
                for i in closes[t]:
                    if not full(i):
                        mark(i, marks)
            keep_going = True
            if st["dead"] + ahead[t + 1] < st["best"]:
                keep_going = rec(t + 1)
            for i in marks:
                reasons[i] -= 1
                if reasons[i] == 0:
                    st["dead"] -= 1
            if not keep_going:
                return False
            if st["best"] == 0:
                return True
        return True

    complete = rec(0) if n else True
    return st["best"], st["witness"], st["visits"], complete


def _rejection_set_search(scheme: Scheme, instance: LabeledGraph, domains, cutoff: int, budget: int):
    """Exact search by rejecting set, for verifiers that are not plain conjunctions.

    Candidate rejecting sets R are tried by size. For each one, backtracking
    with forward checking (through ``self_ok``/``pair_ok``, which every scheme
    guarantees to be necessary conditions) looks for a map under which all
    nodes outside R accept; a node's full verifier runs once its closed
    neighborhood is assigned. Returns (best, witness, visits, complete).
    """
    g = instance.graph
    nodes = list(g.nodes)
    n = len(nodes)
    if n == 0:
        return 0, {}, 0, True
    pos = {v: i for i, v in enumerate(nodes)}
    doms = [list(domains[v]) for v in nodes]
    nbrs = [sorted(pos[w] for w in g.adj[v]) for v in nodes]
    labels = [instance.labels[v] for v in nodes]
    weights = [{j: g.weight(nodes[i], nodes[j]) for j in nbrs[i]} for i in range(n)]
    templates = [tuple(Neighbor(nodes[j], labels[j], None, weights[i][j]) for j in nbrs[i])
                 for i in range(n)]

    def safe(fn, *args):
        try:
            return bool(fn(*args))
        except (TypeError, ValueError, AttributeError, KeyError, IndexError):
            return False

    ok_self = [[safe(scheme.self_ok, LocalView(nodes[i], labels[i], c, templates[i])) for c in doms[i]]
               for i in range(n)]
    pair_cache: dict = {}

    def pair(i, ci, j, cj):
        key = (i, ci, j, cj)
        hit = pair_cache.get(key)
        if hit is None:
            view = LocalView(nodes[i], labels[i], doms[i][ci], templates[i])
            hit = safe(scheme.pair_ok, view, Neighbor(nodes[j], labels[j], doms[j][cj], weights[i][j]))
            if len(pair_cache) > 2_000_000:
                pair_cache.clear()
            pair_cache[key] = hit
        return hit

    visits = 0

    def solve(rejecting):
        nonlocal visits
        in_a = [True] * n
        for i in rejecting:
            in_a[i] = False
        relevant = [in_a[i] or any(in_a[j] for j in nbrs[i]) for i in range(n)]
        choice = [-1 if relevant[i] else 0 for i in range(n)]
        start = [[c for c in range(len(doms[i])) if ok_self[i][c]] if in_a[i]
                 else list(range(len(doms[i]))) for i in range(n)]

        def accepts(i):
            nbs = tuple(Neighbor(nodes[j], labels[j], doms[j][choice[j]], weights[i][j]) for j in nbrs[i])
            return verify_view(scheme, LocalView(nodes[i], labels[i], doms[i][choice[i]], nbs))

        def bt(cur):
            nonlocal visits
            free = [i for i in range(n) if choice[i] < 0]
            if not free:
                return True
            v = min(free, key=lambda i: len(cur[i]))
            for c in cur[v]:
                visits += 1
                if visits > budget:
                    return None
                new = list(cur)
                ok = True
                for w in nbrs[v]:
                    if choice[w] >= 0:
                        continue
                    new[w] = [cw for cw in cur[w]
                              if (not in_a[v] or pair(v, c, w, cw)) and (not in_a[w] or pair(w, cw, v, c))]
                    if not new[w]:
                        ok = False
                        break
                if not ok:
                    continue
                choice[v] = c
                for a in [v, *nbrs[v]]:
                    if in_a[a] and choice[a] >= 0 and all(choice[j] >= 0 for j in nbrs[a]) \
                            and not accepts(a):
                        ok = False
                        break
                if ok:
                    res = bt(new)
                    if res is not False:
                        return res
                choice[v] = -1
            return False

        # nodes fixed up front (outside every accepting neighborhood) may already close one
        for a in range(n):
            if in_a[a] and all(choice[j] >= 0 for j in [a, *nbrs[a]]) and not accepts(a):
                return False
        res = bt(start)
        return {nodes[i]: doms[i][choice[i]] for i in range(n)} if res else res

    doomed = [i for i in range(n) if not any(ok_self[i])]
    for rejecting in kernels.rejection_sets(n, doomed, cutoff):
        res = solve(rejecting)
        if res is None:
            return cutoff, None, visits, False
        if res is not False:
            return len(rejecting), res, visits, True
    return cutoff, None, visits, True


def min_rejections(scheme: Scheme, instance: LabeledGraph, space: CertSpace | None = None,
                   budget: int = DEFAULT_BUDGET, cutoff: int | None = None,
                   seeds: Iterable[Mapping[int, Any]] = (), samples: int = 0, seed: int = 0,
                   use_kernel: bool = True) -> SearchResult:
    """Fewest rejecting nodes over a bounded certificate space.

    With ``cutoff`` only maps with fewer than ``cutoff`` rejections are sought,
    which turns the search into an exact decision of ``k_min >= cutoff``.
    ``seeds`` are certificate maps tried first (e.g. hand-built forgeries);
    ``samples`` random maps are drawn if the exhaustive pass runs out of budget.
    Members get the prover's map and k = 0.
    """
    if decide_membership(scheme.language, instance):
        return SearchResult(0, scheme.prove(instance), True, 0, 0, "prover")
    limit = instance.n + 1 if cutoff is None else cutoff
    best_k, witness = None, None
    for certs in seeds:
        k = _count(scheme, instance, certs)
        if k < limit and (best_k is None or k < best_k):
            best_k, witness = k, dict(certs)
    search_limit = min(limit, best_k) if best_k is not None else limit

    kind = _kernel_kind(scheme) if (use_kernel and space is None) else None
    if kind is not None:
        arrays = kernel_arrays(instance)
        b, codes, visits, complete = kernels.min_rejections(kind, *arrays, search_limit, budget)
        found = None if codes is None else {v: kernel_cert(kind, instance, c)
                                            for v, c in zip(instance.nodes, codes)}
        method = f"kernel-{kernels.BACKEND}"
    else:
        space = space or CertSpace.default(scheme, instance)
        search = _branch_and_bound if isinstance(scheme, ConjunctiveScheme) else _rejection_set_search
        b, found, visits, complete = search(scheme, instance, space.domains, search_limit, budget)
        method = "generic" if search is _branch_and_bound else "generic-sets"
    if found is not None:
        best_k, witness = b, found
    if not complete and samples:
        space = space or CertSpace.default(scheme, instance)
        k, certs = random_search(scheme, instance, space, samples, seed)
        if k < limit and (best_k is None or k < best_k):
            best_k, witness = k, certs
        method += "+random"
    lower = (best_k if best_k is not None else limit) if complete else 0
    return SearchResult(best_k, witness, complete, lower, visits, method)


def random_search(scheme: Scheme, instance: LabeledGraph, space: CertSpace, samples: int,
                  seed: int) -> tuple[int, dict]:
    """Random maps followed by greedy single-node improvement; returns the best seen."""
    rng = random.Random(seed)
    nodes = instance.nodes
    best_k, best = instance.n + 1, None
    for _ in range(samples):
        certs = {v: space.domains[v][rng.randrange(len(space.domains[v]))] for v in nodes}
        k = _count(scheme, instance, certs)
        improved = True
        while improved and k:
            improved = False
            for v in nodes:
                for value in rng.sample(list(space.domains[v]), min(8, len(space.domains[v]))):
                    trial = dict(certs)
                    trial[v] = value
                    kt = _count(scheme, instance, trial)
                    if kt < k:
                        certs, k, improved = trial, kt, True
        if k < best_k:
            best_k, best = k, certs
    return best_k, best


# --------------------------------------------------------------------------
# sensitivity sweeps


@dataclass
class SensitivityRow:
    instance_id: str
    n: int
    distance: int
    k_min: int | None
    exhaustive: bool
    witness_file: str = ""

    @property
    def ratio(self) -> float | None:
        if self.k_min is None or self.distance == 0:
            return None
        return self.k_min / self.distance


@dataclass
class SensitivityReport:
    scheme: str
    language: str
    rows: list[SensitivityRow] = field(default_factory=list)
    scope: str = SCOPE_NOTE

    @property
    def min_ratio(self) -> float | None:
        vals = [r.ratio for r in self.rows if r.ratio is not None]
        return min(vals) if vals else None

    @property
    def max_distance_per_rejection(self) -> float | None:
        vals = [r.distance / r.k_min for r in self.rows if r.k_min]
        return max(vals) if vals else None

    @property
    def all_exhaustive(self) -> bool:
        return all(r.exhaustive for r in self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# {self.scope}; scheme={self.scheme}; language={self.language}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["instance-id", "n", "edit-distance", "k-min", "ratio", "exhaustive", "witness-file"])
        for r in self.rows:
            ratio = "" if r.ratio is None else f"{r.ratio:.6f}"
            k = "" if r.k_min is None else r.k_min
            w.writerow([r.instance_id, r.n, r.distance, k, ratio, int(r.exhaustive), r.witness_file])
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "scheme": self.scheme,
            "language": self.language,
            "scope": self.scope,
            "instances": len(self.rows),
            "all_exhaustive": self.all_exhaustive,
            "min_ratio": self.min_ratio,
            "max_distance_per_rejection": self.max_distance_per_rejection,
        }

    def summary_json(self) -> str:
        return json.dumps(self.summary(), indent=1, sort_keys=True) + "\n"


def sensitivity_sweep(scheme: Scheme, lang: Language, corpus: Iterable[LabeledGraph],
                      budget: int = DEFAULT_BUDGET, seeds_for: Callable | None = None,
                      samples: int = 0, seed: int = 0,
                      on_witness: Callable[[str, LabeledGraph, dict], str] | None = None
                      ) -> SensitivityReport:
    """Exact edit distance and fewest rejections for each nonmember of ``corpus``."""
    report = SensitivityReport(scheme.name, lang.value)
    for i, inst in enumerate(corpus):
        if decide_membership(lang, inst):
            continue
        d = edit_distance_to_language(lang, inst, budget)
        seeds = seeds_for(inst) if seeds_for else ()
        res = min_rejections(scheme, inst, budget=budget, seeds=seeds, samples=samples, seed=seed + i)
        name = f"{lang.value.lower()}-{i:05d}"
        wfile = on_witness(name, inst, res.witness) if (on_witness and res.witness) else ""
        report.rows.append(SensitivityRow(name, inst.n, d, res.k, res.exhaustive, wfile))
    return report


# --------------------------------------------------------------------------
# strong local stability


@dataclass
class StabilityWitness:
    G: Graph
    ell: LabeledGraph
    G_prime: Graph
    ell_prime: LabeledGraph
    H_nodes: tuple[int, ...]
    pasted: LabeledGraph
    distance: int
    boundary: int

    def ratio(self) -> float:
        return math.inf if self.boundary == 0 else self.distance / self.boundary


@dataclass
class ProbeResult:
    language: str
    max_n: int
    witnesses: dict[float, StabilityWitness | None]
    exhaustive: bool
    pastes_checked: int
    worst: StabilityWitness | None


def connected_subsets(graph: Graph) -> list[tuple[int, ...]]:
    out = []
    nodes = graph.nodes
    for r in range(1, len(nodes) + 1):
        for combo in itertools.combinations(nodes, r):
            sub = Graph(combo, [e for e in graph.edges if e[0] in combo and e[1] in combo],
                        allow_disconnected=True)
            if sub.is_connected():
                out.append(combo)
    return out


def induced(graph: Graph, nodes: Sequence[int]) -> Graph:
    keep = set(nodes)
    edges = [e for e in graph.edges if e[0] in keep and e[1] in keep]
    weights = None if graph.weights is None else {e: graph.weights[e] for e in edges}
    return Graph(nodes, edges, weights)


def boundary(host: Graph, sub: Graph) -> int:
    """Nodes of ``sub`` incident to an edge of ``host`` that ``sub`` lacks."""
    return sum(1 for v in sub.nodes if host.adj[v] - sub.adj[v])


def strong_local_stability_probe(lang: Language, max_n: int, beta_candidates: Sequence[float],
                                 pair_cap: int = 400, seed: int = 0, min_n: int = 1,
                                 budget: int = DEFAULT_BUDGET) -> ProbeResult:
    """Search pasted labelings (G, l - l_H + l'_H) whose distance exceeds beta times the boundary.

    G ranges over connected graphs up to ``max_n`` nodes, H over connected induced
    subgraphs of G, and G' over {G, H}. For every (G, H, G') all combinations of
    distinct outside restrictions of l and inside restrictions of l' are tried
    when there are at most ``pair_cap`` of them; otherwise a seeded sample of
    ``pair_cap`` is drawn and the result is flagged non-exhaustive.
    """
    if lang is Language.MST_L:
        raise ValueError("the probe runs on unweighted languages")
    rng = random.Random(seed)
    betas = sorted(beta_candidates)
    found: dict[float, StabilityWitness | None] = {b: None for b in betas}
    exhaustive = True
    checked = 0
    worst, worst_ratio = None, -1.0
    for G in connected_graphs(max_n, min_n):
        table_G = member_table(lang, G, budget)
        members_G = list(iter_members(lang, G, budget))
        for S in connected_subsets(G):
            H = induced(G, S)
            inside_pos = [G.nodes.index(v) for v in S]
            outside_pos = [i for i, v in enumerate(G.nodes) if v not in S]
            for G_prime in ((G,) if H == G else (G, H)):
                members_P = members_G if G_prime is G else list(iter_members(lang, G_prime, budget))
                bnd = boundary(G, H) + boundary(G_prime, H)
                outs = _distinct(members_G, [G.nodes[i] for i in outside_pos])
                ins = _distinct(members_P, list(S))
                pairs = list(itertools.product(range(len(outs)), range(len(ins))))
                if len(pairs) > pair_cap:
                    exhaustive = False
                    pairs = rng.sample(pairs, pair_cap)
                if not pairs:
                    continue
                pasted_codes = []
                for a, b in pairs:
                    labels = {**{v: outs[a].labels[v] for v in G.nodes if v not in S},
                              **{v: ins[b].labels[v] for v in S}}
                    pasted_codes.append([label_code(G, v, labels[v], lang.label_kind) for v in G.nodes])
                dists = distance_by_table(table_G, np.array(pasted_codes, dtype=np.int64))
                checked += len(pairs)
                top = int(np.argmax(dists))
                top_ratio = math.inf if bnd == 0 and dists[top] else (dists[top] / bnd if bnd else 0.0)
                if top_ratio > worst_ratio:
                    worst_ratio = top_ratio
                    worst = _witness(lang, G, G_prime, S, outs, ins, pairs[top], int(dists[top]), bnd)
                for beta in betas:
                    if found[beta] is None and dists[top] > beta * bnd:
                        found[beta] = _witness(lang, G, G_prime, S, outs, ins, pairs[top],
                                               int(dists[top]), bnd)
    return ProbeResult(lang.value, max_n, found, exhaustive, checked, worst)


def _distinct(members: list[LabeledGraph], nodes: list[int]) -> list[LabeledGraph]:
    """One representative member per distinct restriction to ``nodes``."""
    seen, out = set(), []
    for m in members:
        key = tuple(m.labels[v] for v in nodes)
        if key not in seen:
            seen.add(key)
            out.append(m)
    return out


def _witness(lang, G, G_prime, S, outs, ins, pair, dist, bnd) -> StabilityWitness:
    ell, ell_p = outs[pair[0]], ins[pair[1]]
    labels = {v: (ell_p.labels[v] if v in S else ell.labels[v]) for v in G.nodes}
    pasted = LabeledGraph(G, labels, lang.label_kind)
    return StabilityWitness(G, ell, G_prime, ell_p, tuple(S), pasted, dist, bnd)


def recheck_witness(lang: Language, w: StabilityWitness) -> bool:
    """Recompute the pasted instance's distance independently of the probe's tables."""
    return edit_distance_to_language(lang, w.pasted) == w.distance
