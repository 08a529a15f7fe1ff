"""Pure-Python reference for the certificate search kernels.

Integer encoding shared with the compiled module:

* nodes are indices 0..n-1 (ascending id order);
* ``kind`` 0 is ACYCLIC with certificate d in [0, n);
* ``kind`` 1 (adjacency-list spanning tree) and 2 (pointer spanning tree) use
  c = (I*n + P)*n + d with I, P node indices and d in [0, n);
* ``ptr[v]`` is the pointer target index, -1 for null, -2 when ill-formed;
* ``lab[v][w]`` is 1 when w is listed by v, ``is_adj[v]`` says the label is an
  adjacency list and ``sub_ok[v]`` that it lists only neighbors.
"""
from __future__ import annotations

from itertools import combinations


def domain_size(kind: int, n: int) -> int:
    return n if kind == 0 else n * n * n


def _self_ok(kind, v, c, n, ptr, sub_ok):
    if kind == 0:
        p = ptr[v]
        if p == -2:
            return False
        return c == 0 if p == -1 else True
    d = c % n
    P = (c // n) % n
    I = c // (n * n)
    if kind == 1:
        if not sub_ok[v]:
            return False
        if P == v:
            return I == v and d == 0
        return I != v
    p = ptr[v]
    if p == -2:
        return False
    if p == -1:
        return P == v and I == v and d == 0
    return P == p and I != v


def _pair_ok(kind, v, c, w, cw, n, ptr, lab, is_adj):
    """Check made at v about its neighbor w."""
    if kind == 0:
        if ptr[v] == w:
            return cw == c - 1
        return True
    if cw // (n * n) != c // (n * n):
        return False
    d = c % n
    dw = cw % n
    if kind == 2:
        if ptr[v] == w:
            return dw == d - 1
        return True
    if not is_adj[w] or lab[v][w] != lab[w][v]:
        return False
    P = (c // n) % n
    if P == w:
        return lab[v][w] == 1 and dw == d - 1
    if lab[v][w]:
        return (cw // n) % n == v and dw == d + 1
    return True


def _self_and_parent_listed(kind, v, c, n, ptr, lab, sub_ok):
    if not _self_ok(kind, v, c, n, ptr, sub_ok):
        return False
    if kind == 1:
        P = (c // n) % n
        if P != v and not lab[v][P]:
            return False
    return True


def reject_vector(kind, adj, ptr, lab, is_adj, sub_ok, certs):
    n = len(adj)
    out = []
    for v in range(n):
        ok = _self_and_parent_listed(kind, v, certs[v], n, ptr, lab, sub_ok)
        if ok:
            for w in range(n):
                if adj[v][w] and not _pair_ok(kind, v, certs[v], w, certs[w], n, ptr, lab, is_adj):
                    ok = False
                    break
        out.append(0 if ok else 1)
    return out


def _doomed(ok_self):
    return [v for v, row in enumerate(ok_self) if not any(row)]


def rejection_sets(n, doomed, cutoff):
    """Candidate rejecting sets by size: supersets of ``doomed`` with fewer than ``cutoff`` nodes."""
    rest = [v for v in range(n) if v not in set(doomed)]
    for extra in range(0, max(0, cutoff - len(doomed))):
        if extra > len(rest):
            break
        for combo in combinations(rest, extra):
            yield sorted(doomed + list(combo))


def min_rejections(kind, adj, ptr, lab, is_adj, sub_ok, cutoff, budget):
    """Fewest rejecting nodes over all certificate maps.

    Rejection sets R are tried by increasing size; for each, a backtracking
    search with forward checking looks for a map under which every node
    outside R accepts. The first satisfiable R is optimal.

    Returns (best, witness, visits, complete). ``best`` is the minimum number of
    rejecting nodes among maps with fewer than ``cutoff`` rejections, or
    ``cutoff`` when there is none (``witness`` is then None). ``complete`` is
    False when the visit budget ran out.
    """
    n = len(adj)
    if n == 0:
        return 0, [], 0, True
    size = domain_size(kind, n)
    nbrs = [[w for w in range(n) if adj[v][w]] for v in range(n)]
    ok_self = [[_self_and_parent_listed(kind, v, c, n, ptr, lab, sub_ok) for c in range(size)]
               for v in range(n)]
    visits = 0

    def solve(rejecting):
        nonlocal visits
        in_a = [True] * n
        for v in rejecting:
            in_a[v] = False
        relevant = [in_a[v] or any(in_a[w] for w in nbrs[v]) for v in range(n)]
        assign = [0 if not relevant[v] else -1 for v in range(n)]
        doms = [[c for c in range(size) if ok_self[v][c]] if in_a[v] else list(range(size))
                for v in range(n)]

        def compat(v, cv, w, cw):
            if in_a[v] and not _pair_ok(kind, v, cv, w, cw, n, ptr, lab, is_adj):
                return False
            return not in_a[w] or _pair_ok(kind, w, cw, v, cv, n, ptr, lab, is_adj)

        def bt(doms):
            nonlocal visits
            free = [v for v in range(n) if assign[v] < 0]
            if not free:
                return True
            v = min(free, key=lambda u: len(doms[u]))
            for c in doms[v]:
                visits += 1
                if visits > budget:
                    return None
                new = list(doms)
                ok = True
                for w in nbrs[v]:
                    if assign[w] < 0:
                        new[w] = [cw for cw in doms[w] if compat(v, c, w, cw)]
                        if not new[w]:
                            ok = False
                            break
                if ok:
                    assign[v] = c
                    res = bt(new)
                    if res is not False:
                        return res
                    assign[v] = -1
            return False

        res = bt(doms)
        return assign if res else res

    for rejecting in rejection_sets(n, _doomed(ok_self), cutoff):
        res = solve(rejecting)
        if res is None:
            return cutoff, None, visits, False
        if res is not False:
            return len(rejecting), res, visits, True
    return cutoff, None, visits, True
