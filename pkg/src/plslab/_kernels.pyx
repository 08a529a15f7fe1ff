# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled certificate search kernels (same encoding as ``_kernels_py``)."""

import numpy as np
cimport numpy as cnp
from libc.string cimport memcpy

cnp.import_array()


def domain_size(int kind, int n):
    return n if kind == 0 else n * n * n


cdef inline bint _self_ok(int kind, int v, long c, int n, int[:] ptr, int[:, :] lab,
                          int[:] sub_ok) nogil:
    cdef int p, d, P, I
    if kind == 0:
        p = ptr[v]
        if p == -2:
            return False
        if p == -1:
            return c == 0
        return True
    d = c % n
    P = (c // n) % n
    I = c // (n * n)
    if kind == 1:
        if not sub_ok[v]:
            return False
        if P == v:
            return I == v and d == 0
        return I != v and lab[v, P] == 1
    p = ptr[v]
    if p == -2:
        return False
    if p == -1:
        return P == v and I == v and d == 0
    return P == p and I != v


cdef inline bint _pair_ok(int kind, int v, long c, int w, long cw, int n, int[:] ptr,
                          int[:, :] lab, int[:] is_adj) nogil:
    cdef int d, dw, P
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
    if not is_adj[w] or lab[v, w] != lab[w, v]:
        return False
    P = (c // n) % n
    if P == w:
        return lab[v, w] == 1 and dw == d - 1
    if lab[v, w]:
        return (cw // n) % n == v and dw == d + 1
    return True


def reject_vector(int kind, adj, ptr, lab, is_adj, sub_ok, certs):
    cdef int[:, :] A = np.ascontiguousarray(adj, dtype=np.intc)
    cdef int[:] PT = np.ascontiguousarray(ptr, dtype=np.intc)
    cdef int[:, :] L = np.ascontiguousarray(lab, dtype=np.intc)
    cdef int[:] IA = np.ascontiguousarray(is_adj, dtype=np.intc)
    cdef int[:] SO = np.ascontiguousarray(sub_ok, dtype=np.intc)
    cdef long[:] C = np.ascontiguousarray(certs, dtype=np.int_)
    cdef int n = A.shape[0]
    cdef int v, w
    cdef bint ok
    out = []
    for v in range(n):
        ok = _self_ok(kind, v, C[v], n, PT, L, SO)
        if ok:
            for w in range(n):
                if A[v, w] and not _pair_ok(kind, v, C[v], w, C[w], n, PT, L, IA):
                    ok = False
                    break
        out.append(0 if ok else 1)
    return out


cdef class _Csp:
    cdef int kind, n
    cdef long size
    cdef long long visits, budget
    cdef int[:, :] nbrs
    cdef int[:] deg
    cdef int[:] ptr
    cdef int[:, :] lab
    cdef int[:] is_adj
    cdef unsigned char[:, :] ok_self
    cdef unsigned char[:, :, :] dom
    cdef long[:, :] cnt
    cdef unsigned char[:] in_a
    cdef long[:] assign

    cdef inline bint compat(self, int v, long cv, int w, long cw) nogil:
        if self.in_a[v] and not _pair_ok(self.kind, v, cv, w, cw, self.n, self.ptr, self.lab, self.is_adj):
            return False
        return not self.in_a[w] or _pair_ok(self.kind, w, cw, v, cv, self.n, self.ptr, self.lab, self.is_adj)

    cdef int bt(self, int lvl) nogil:
        """1 when satisfiable, 0 when not, -1 when the budget ran out."""
        cdef int n = self.n
        cdef int u, v = -1, w, i, r
        cdef long c, cw, best = -1, left
        cdef bint ok
        for u in range(n):
            if self.assign[u] < 0 and (v < 0 or self.cnt[lvl, u] < best):
                v = u
                best = self.cnt[lvl, u]
        if v < 0:
            return 1
        for c in range(self.size):
            if not self.dom[lvl, v, c]:
                continue
            self.visits += 1
            if self.visits > self.budget:
                return -1
            memcpy(&self.dom[lvl + 1, 0, 0], &self.dom[lvl, 0, 0], n * self.size)
            for u in range(n):
                self.cnt[lvl + 1, u] = self.cnt[lvl, u]
            ok = True
            for i in range(self.deg[v]):
                w = self.nbrs[v, i]
                if self.assign[w] >= 0:
                    continue
                left = 0
                for cw in range(self.size):
                    if self.dom[lvl + 1, w, cw]:
                        if self.compat(v, c, w, cw):
                            left += 1
                        else:
                            self.dom[lvl + 1, w, cw] = 0
                self.cnt[lvl + 1, w] = left
                if left == 0:
                    ok = False
                    break
            if ok:
                self.assign[v] = c
                r = self.bt(lvl + 1)
                if r != 0:
                    return r
                self.assign[v] = -1
        return 0

    cdef int solve(self, rejecting):
        cdef int n = self.n
        cdef int v, w, i
        cdef long c
        cdef bint rel
        cdef int res
        for v in range(n):
            self.in_a[v] = 1
        for v in rejecting:
            self.in_a[v] = 0
        for v in range(n):
            rel = self.in_a[v]
            for i in range(self.deg[v]):
                if self.in_a[self.nbrs[v, i]]:
                    rel = True
            self.assign[v] = -1 if rel else 0
            self.cnt[0, v] = 0
            for c in range(self.size):
                self.dom[0, v, c] = self.ok_self[v, c] if self.in_a[v] else 1
                self.cnt[0, v] += self.dom[0, v, c]
        with nogil:
            res = self.bt(0)
        return res


def min_rejections(int kind, adj, ptr, lab, is_adj, sub_ok, int cutoff, long long budget):
    """Same contract and search order as the pure-Python ``min_rejections``."""
    from ._kernels_py import rejection_sets
    cdef int[:, :] A = np.ascontiguousarray(adj, dtype=np.intc)
    cdef int n = A.shape[0]
    if n == 0:
        return 0, [], 0, True
    cdef _Csp s = _Csp()
    cdef int v, w, k, r
    cdef long c
    s.kind = kind
    s.n = n
    s.size = n if kind == 0 else <long>n * n * n
    s.visits = 0
    s.budget = budget
    s.ptr = np.ascontiguousarray(ptr, dtype=np.intc)
    s.lab = np.ascontiguousarray(lab, dtype=np.intc)
    s.is_adj = np.ascontiguousarray(is_adj, dtype=np.intc)
    cdef int[:] SO = np.ascontiguousarray(sub_ok, dtype=np.intc)
    nb = np.full((n, n), -1, dtype=np.intc)
    dg = np.zeros(n, dtype=np.intc)
    for v in range(n):
        k = 0
        for w in range(n):
            if A[v, w]:
                nb[v, k] = w
                k += 1
        dg[v] = k
    s.nbrs = nb
    s.deg = dg
    oks = np.zeros((n, s.size), dtype=np.uint8)
    cdef unsigned char[:, :] O = oks
    for v in range(n):
        for c in range(s.size):
            O[v, c] = _self_ok(kind, v, c, n, s.ptr, s.lab, SO)
    s.ok_self = O
    s.dom = np.zeros((n + 1, n, s.size), dtype=np.uint8)
    s.cnt = np.zeros((n + 1, n), dtype=np.int_)
    s.in_a = np.zeros(n, dtype=np.uint8)
    s.assign = np.zeros(n, dtype=np.int_)
    doomed = [v for v in range(n) if not oks[v].any()]
    for rejecting in rejection_sets(n, doomed, cutoff):
        r = s.solve(rejecting)
        if r < 0:
            return cutoff, None, s.visits, False
        if r == 1:
            return len(rejecting), [int(x) for x in s.assign], s.visits, True
    return cutoff, None, s.visits, True
