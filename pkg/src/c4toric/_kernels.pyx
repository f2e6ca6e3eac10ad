# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; statically typed mirror of ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()

BACKEND = "cython"


def min_weight_perfect_matching_dense(weights):
    """Exact minimum-weight perfect matching on a complete graph."""
    cdef cnp.ndarray[int64_t, ndim=2] w = np.ascontiguousarray(weights, dtype=np.int64)
    cdef Py_ssize_t n = w.shape[0], i, j, k = 0
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    cdef int64_t top = w.max() + 1
    cdef Py_ssize_t m = n * (n - 1) // 2
    cdef cnp.ndarray[int64_t, ndim=2] edges = np.empty((m, 3), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            edges[k, 0] = i
            edges[k, 1] = j
            edges[k, 2] = top - w[i, j]
            k += 1
    b = _Blossom(edges, n, True)
    return np.asarray(b.solve(), dtype=np.int64)


def max_weight_matching(edges, nvertex, maxcardinality=False):
    """Maximum-weight matching of a general graph with integer edge weights."""
    arr = np.asarray(edges, dtype=np.int64).reshape(-1, 3)
    return list(_Blossom(arr, int(nvertex), bool(maxcardinality)).solve())


cdef class _Blossom:
    cdef Py_ssize_t n, m
    cdef bint maxcard
    cdef int64_t[:] ei, ej, ew, endpoint, nb_start, nb_list
    cdef int64_t[:] mate, label, labelend, inblossom, parent, base, bestedge, dual
    cdef int64_t[:] allow, bestto
    cdef list childs, endps, bestedges, unused, queue

    def __init__(self, cnp.ndarray edges, Py_ssize_t nvertex, bint maxcardinality):
        cdef Py_ssize_t n = nvertex, m = edges.shape[0], k, i, j
        self.n = n
        self.m = m
        self.maxcard = maxcardinality
        self.ei = np.ascontiguousarray(edges[:, 0], dtype=np.int64)
        self.ej = np.ascontiguousarray(edges[:, 1], dtype=np.int64)
        self.ew = np.ascontiguousarray(2 * edges[:, 2], dtype=np.int64)
        self.endpoint = np.empty(2 * m, dtype=np.int64)
        deg = np.zeros(n + 1, dtype=np.int64)
        cdef int64_t[:] dg = deg
        for k in range(m):
            i = self.ei[k]
            j = self.ej[k]
            if i == j or i < 0 or j < 0 or i >= n or j >= n:
                raise ValueError(f"bad edge ({i}, {j})")
            self.endpoint[2 * k] = i
            self.endpoint[2 * k + 1] = j
            dg[i + 1] += 1
            dg[j + 1] += 1
        self.nb_start = np.cumsum(deg).astype(np.int64)
        self.nb_list = np.empty(2 * m, dtype=np.int64)
        fill = np.array(self.nb_start[:n], dtype=np.int64)
        cdef int64_t[:] fl = fill
        for k in range(m):
            i = self.ei[k]
            j = self.ej[k]
            self.nb_list[fl[i]] = 2 * k + 1
            fl[i] += 1
            self.nb_list[fl[j]] = 2 * k
            fl[j] += 1
        cdef int64_t maxw = 0
        for k in range(m):
            if self.ew[k] > maxw:
                maxw = self.ew[k]
        self.mate = np.full(n, -1, dtype=np.int64)
        self.label = np.zeros(2 * n, dtype=np.int64)
        self.labelend = np.full(2 * n, -1, dtype=np.int64)
        self.inblossom = np.arange(n, dtype=np.int64)
        self.parent = np.full(2 * n, -1, dtype=np.int64)
        self.base = np.concatenate([np.arange(n), np.full(n, -1)]).astype(np.int64)
        self.bestedge = np.full(2 * n, -1, dtype=np.int64)
        self.dual = np.concatenate([np.full(n, maxw // 2), np.zeros(n)]).astype(np.int64)
        self.allow = np.zeros(max(m, 1), dtype=np.int64)
        self.bestto = np.full(2 * n, -1, dtype=np.int64)
        self.childs = [None] * (2 * n)
        self.endps = [None] * (2 * n)
        self.bestedges = [None] * (2 * n)
        self.unused = list(range(n, 2 * n))
        self.queue = []

    cdef inline int64_t slack(self, Py_ssize_t k):
        return self.dual[self.ei[k]] + self.dual[self.ej[k]] - self.ew[k]

    cdef list leaves(self, Py_ssize_t b):
        cdef list out = []
        cdef list stack
        cdef Py_ssize_t t
        if b < self.n:
            out.append(b)
            return out
        stack = [b]
        while stack:
            t = stack.pop()
            if t < self.n:
                out.append(t)
            else:
                stack.extend(self.childs[t])
        return out

    cdef void assign_label(self, Py_ssize_t w, int64_t t, int64_t p):
        cdef Py_ssize_t b, mb
        while True:
            b = self.inblossom[w]
            self.label[w] = t
            self.label[b] = t
            self.labelend[w] = p
            self.labelend[b] = p
            self.bestedge[w] = -1
            self.bestedge[b] = -1
            if t == 1:
                self.queue.extend(self.leaves(b))
                return
            mb = self.mate[self.base[b]]
            w = self.endpoint[mb]
            t = 1
            p = mb ^ 1

    cdef Py_ssize_t scan_blossom(self, Py_ssize_t v, Py_ssize_t w):
        cdef list path = []
        cdef Py_ssize_t base = -1, b, tmp
        while v != -1 or w != -1:
            b = self.inblossom[v]
            if self.label[b] & 4:
                base = self.base[b]
                break
            path.append(b)
            self.label[b] = 5
            if self.labelend[b] == -1:
                v = -1
            else:
                v = self.endpoint[self.labelend[b]]
                b = self.inblossom[v]
                v = self.endpoint[self.labelend[b]]
            if w != -1:
                tmp = v
                v = w
                w = tmp
        for b in path:
            self.label[b] = 1
        return base

    cdef void add_blossom(self, Py_ssize_t base, Py_ssize_t k):
        cdef Py_ssize_t n = self.n
        cdef Py_ssize_t v = self.ei[k], w = self.ej[k]
        cdef Py_ssize_t bb = self.inblossom[base]
        cdef Py_ssize_t bv = self.inblossom[v]
        cdef Py_ssize_t bw = self.inblossom[w]
        cdef Py_ssize_t b = self.unused.pop()
        cdef Py_ssize_t i, j, bj, kk, x, q
        cdef list path = [], endps = [], nbl
        self.base[b] = base
        self.parent[b] = -1
        self.parent[bb] = b
        while bv != bb:
            self.parent[bv] = b
            path.append(bv)
            endps.append(self.labelend[bv])
            v = self.endpoint[self.labelend[bv]]
            bv = self.inblossom[v]
        path.append(bb)
        path.reverse()
        endps.reverse()
        endps.append(2 * k)
        while bw != bb:
            self.parent[bw] = b
            path.append(bw)
            endps.append(self.labelend[bw] ^ 1)
            w = self.endpoint[self.labelend[bw]]
            bw = self.inblossom[w]
        self.childs[b] = path
        self.endps[b] = endps
        self.label[b] = 1
        self.labelend[b] = self.labelend[bb]
        self.dual[b] = 0
        for v in self.leaves(b):
            if self.label[self.inblossom[v]] == 2:
                self.queue.append(v)
            self.inblossom[v] = b
        for x in range(2 * n):
            self.bestto[x] = -1
        for bv in path:
            if self.bestedges[bv] is None:
                nbl = []
                for x in self.leaves(bv):
                    for q in range(self.nb_start[x], self.nb_start[x + 1]):
                        nbl.append(self.nb_list[q] // 2)
            else:
                nbl = self.bestedges[bv]
            for kk in nbl:
                i = self.ei[kk]
                j = self.ej[kk]
                if self.inblossom[j] == b:
                    j = i
                bj = self.inblossom[j]
                if (bj != b and self.label[bj] == 1
                        and (self.bestto[bj] == -1 or self.slack(kk) < self.slack(self.bestto[bj]))):
                    self.bestto[bj] = kk
            self.bestedges[bv] = None
            self.bestedge[bv] = -1
        nbl = []
        for x in range(2 * n):
            if self.bestto[x] != -1:
                nbl.append(self.bestto[x])
        self.bestedges[b] = nbl
        self.bestedge[b] = -1
        for kk in nbl:
            if self.bestedge[b] == -1 or self.slack(kk) < self.slack(self.bestedge[b]):
                self.bestedge[b] = kk

    cdef void expand_blossom(self, Py_ssize_t b, bint endstage):
        cdef Py_ssize_t n = self.n
        cdef Py_ssize_t s, v, j, jstep, trick, p, bv, entry, hit
        cdef list childs, endps
        for s in self.childs[b]:
            self.parent[s] = -1
            if s < n:
                self.inblossom[s] = s
            elif endstage and self.dual[s] == 0:
                self.expand_blossom(s, endstage)
            else:
                for v in self.leaves(s):
                    self.inblossom[v] = s
        if not endstage and self.label[b] == 2:
            childs = self.childs[b]
            endps = self.endps[b]
            entry = self.inblossom[self.endpoint[self.labelend[b] ^ 1]]
            j = childs.index(entry)
            if j & 1:
                j -= len(childs)
                jstep = 1
                trick = 0
            else:
                jstep = -1
                trick = 1
            p = self.labelend[b]
            while j != 0:
                self.label[self.endpoint[p ^ 1]] = 0
                self.label[self.endpoint[(<Py_ssize_t>endps[_wrap(j - trick, len(endps))]) ^ trick ^ 1]] = 0
                self.assign_label(self.endpoint[p ^ 1], 2, p)
                self.allow[(<Py_ssize_t>endps[_wrap(j - trick, len(endps))]) // 2] = 1
                j += jstep
                p = (<Py_ssize_t>endps[_wrap(j - trick, len(endps))]) ^ trick
                self.allow[p // 2] = 1
                j += jstep
            bv = childs[_wrap(j, len(childs))]
            self.label[self.endpoint[p ^ 1]] = 2
            self.label[bv] = 2
            self.labelend[self.endpoint[p ^ 1]] = p
            self.labelend[bv] = p
            self.bestedge[bv] = -1
            j += jstep
            while childs[_wrap(j, len(childs))] != entry:
                bv = childs[_wrap(j, len(childs))]
                if self.label[bv] == 1:
                    j += jstep
                    continue
                hit = -1
                for v in self.leaves(bv):
                    if self.label[v] != 0:
                        hit = v
                        break
                if hit != -1:
                    self.label[hit] = 0
                    self.label[self.endpoint[self.mate[self.base[bv]]]] = 0
                    self.assign_label(hit, 2, self.labelend[hit])
                j += jstep
        self.label[b] = -1
        self.labelend[b] = -1
        self.childs[b] = None
        self.endps[b] = None
        self.base[b] = -1
        self.bestedges[b] = None
        self.bestedge[b] = -1
        self.unused.append(b)

    cdef void augment_blossom(self, Py_ssize_t b, Py_ssize_t v):
        cdef Py_ssize_t n = self.n
        cdef Py_ssize_t t = v, i, j, jstep, trick, p, L
        cdef list childs, endps
        while self.parent[t] != b:
            t = self.parent[t]
        if t >= n:
            self.augment_blossom(t, v)
        childs = self.childs[b]
        endps = self.endps[b]
        L = len(childs)
        i = childs.index(t)
        j = i
        if i & 1:
            j -= L
            jstep = 1
            trick = 0
        else:
            jstep = -1
            trick = 1
        while j != 0:
            j += jstep
            t = childs[_wrap(j, L)]
            p = (<Py_ssize_t>endps[_wrap(j - trick, L)]) ^ trick
            if t >= n:
                self.augment_blossom(t, self.endpoint[p])
            j += jstep
            t = childs[_wrap(j, L)]
            if t >= n:
                self.augment_blossom(t, self.endpoint[p ^ 1])
            self.mate[self.endpoint[p]] = p ^ 1
            self.mate[self.endpoint[p ^ 1]] = p
        self.childs[b] = childs[i:] + childs[:i]
        self.endps[b] = endps[i:] + endps[:i]
        self.base[b] = self.base[self.childs[b][0]]

    cdef void augment_matching(self, Py_ssize_t k):
        cdef Py_ssize_t n = self.n
        cdef Py_ssize_t s, p, bs, t, bt, j, side
        for side in range(2):
            if side == 0:
                s = self.ei[k]
                p = 2 * k + 1
            else:
                s = self.ej[k]
                p = 2 * k
            while True:
                bs = self.inblossom[s]
                if bs >= n:
                    self.augment_blossom(bs, s)
                self.mate[s] = p
                if self.labelend[bs] == -1:
                    break
                t = self.endpoint[self.labelend[bs]]
                bt = self.inblossom[t]
                s = self.endpoint[self.labelend[bt]]
                j = self.endpoint[self.labelend[bt] ^ 1]
                if bt >= n:
                    self.augment_blossom(bt, j)
                self.mate[j] = self.labelend[bt]
                p = self.labelend[bt] ^ 1

    def solve(self):
        cdef Py_ssize_t n = self.n
        cdef Py_ssize_t it, x, v, w, p, k, b, base, i, j, dedge, dblossom
        cdef int64_t kslack, delta, d
        cdef int dtype
        cdef bint augmented
        for it in range(n):
            for x in range(2 * n):
                self.label[x] = 0
                self.bestedge[x] = -1
            for x in range(n, 2 * n):
                self.bestedges[x] = None
            for x in range(self.m):
                self.allow[x] = 0
            self.queue = []
            for v in range(n):
                if self.mate[v] == -1 and self.label[self.inblossom[v]] == 0:
                    self.assign_label(v, 1, -1)
            augmented = False
            while True:
                while self.queue and not augmented:
                    v = self.queue.pop()
                    for x in range(self.nb_start[v], self.nb_start[v + 1]):
                        p = self.nb_list[x]
                        k = p // 2
                        w = self.endpoint[p]
                        if self.inblossom[v] == self.inblossom[w]:
                            continue
                        kslack = 0
                        if not self.allow[k]:
                            kslack = self.slack(k)
                            if kslack <= 0:
                                self.allow[k] = 1
                        if self.allow[k]:
                            if self.label[self.inblossom[w]] == 0:
                                self.assign_label(w, 2, p ^ 1)
                            elif self.label[self.inblossom[w]] == 1:
                                base = self.scan_blossom(v, w)
                                if base >= 0:
                                    self.add_blossom(base, k)
                                else:
                                    self.augment_matching(k)
                                    augmented = True
                                    break
                            elif self.label[w] == 0:
                                self.label[w] = 2
                                self.labelend[w] = p ^ 1
                        elif self.label[self.inblossom[w]] == 1:
                            b = self.inblossom[v]
                            if self.bestedge[b] == -1 or kslack < self.slack(self.bestedge[b]):
                                self.bestedge[b] = k
                        elif self.label[w] == 0:
                            if self.bestedge[w] == -1 or kslack < self.slack(self.bestedge[w]):
                                self.bestedge[w] = k
                if augmented:
                    break
                dtype = -1
                delta = 0
                dedge = -1
                dblossom = -1
                if not self.maxcard:
                    dtype = 1
                    delta = self.dual[0]
                    for v in range(1, n):
                        if self.dual[v] < delta:
                            delta = self.dual[v]
                for v in range(n):
                    if self.label[self.inblossom[v]] == 0 and self.bestedge[v] != -1:
                        d = self.slack(self.bestedge[v])
                        if dtype == -1 or d < delta:
                            delta = d
                            dtype = 2
                            dedge = self.bestedge[v]
                for b in range(2 * n):
                    if self.parent[b] == -1 and self.label[b] == 1 and self.bestedge[b] != -1:
                        d = self.slack(self.bestedge[b]) // 2
                        if dtype == -1 or d < delta:
                            delta = d
                            dtype = 3
                            dedge = self.bestedge[b]
                for b in range(n, 2 * n):
                    if (self.base[b] >= 0 and self.parent[b] == -1 and self.label[b] == 2
                            and (dtype == -1 or self.dual[b] < delta)):
                        delta = self.dual[b]
                        dtype = 4
                        dblossom = b
                if dtype == -1:
                    dtype = 1
                    delta = self.dual[0]
                    for v in range(1, n):
                        if self.dual[v] < delta:
                            delta = self.dual[v]
                    if delta < 0:
                        delta = 0
                for v in range(n):
                    x = self.label[self.inblossom[v]]
                    if x == 1:
                        self.dual[v] -= delta
                    elif x == 2:
                        self.dual[v] += delta
                for b in range(n, 2 * n):
                    if self.base[b] >= 0 and self.parent[b] == -1:
                        if self.label[b] == 1:
                            self.dual[b] += delta
                        elif self.label[b] == 2:
                            self.dual[b] -= delta
                if dtype == 1:
                    break
                elif dtype == 2:
                    self.allow[dedge] = 1
                    i = self.ei[dedge]
                    j = self.ej[dedge]
                    if self.label[self.inblossom[i]] == 0:
                        i = j
                    self.queue.append(i)
                elif dtype == 3:
                    self.allow[dedge] = 1
                    self.queue.append(self.ei[dedge])
                else:
                    self.expand_blossom(dblossom, False)
            if not augmented:
                break
            for b in range(n, 2 * n):
                if (self.parent[b] == -1 and self.base[b] >= 0 and self.label[b] == 1
                        and self.dual[b] == 0):
                    self.expand_blossom(b, True)
        out = []
        for v in range(n):
            p = self.mate[v]
            out.append(self.endpoint[p] if p >= 0 else -1)
        return out


cdef inline Py_ssize_t _wrap(Py_ssize_t j, Py_ssize_t L):
    # python-style negative indexing for the blossom cycle lists
    return j + L if j < 0 else j
