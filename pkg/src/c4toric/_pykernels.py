"""Pure-Python kernels.

These are the reference implementations; ``_kernels.pyx`` mirrors them with
static types.  ``c4toric.kernels`` picks one at import time.
"""

from __future__ import annotations

import numpy as np

__all__ = ["max_weight_matching", "min_weight_perfect_matching_dense", "BACKEND"]

BACKEND = "python"


def min_weight_perfect_matching_dense(weights) -> np.ndarray:
    """Exact minimum-weight perfect matching on a complete graph.

    ``weights`` is a symmetric ``(n, n)`` array of non-negative integers with
    ``n`` even.  Returns ``mate`` with ``mate[i]`` the partner of ``i``.
    """
    w = np.asarray(weights, dtype=np.int64)
    n = w.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    top = int(w.max()) + 1
    edges = [(i, j, top - int(w[i, j])) for i in range(n) for j in range(i + 1, n)]
    mate = max_weight_matching(edges, n, maxcardinality=True)
    return np.asarray(mate, dtype=np.int64)


def max_weight_matching(edges, nvertex: int, maxcardinality: bool = False) -> list[int]:
    """Maximum-weight matching of a general graph with integer edge weights.

    Primal-dual blossom algorithm in O(n^3).  ``edges`` holds ``(i, j, w)``
    triples; returns ``mate`` (``-1`` for unmatched vertices).  With
    ``maxcardinality`` the result has maximum cardinality and maximum weight
    among those.
    """
    return _Blossom(edges, nvertex, maxcardinality).solve()


class _Blossom:
    # Vertices are 0..n-1, blossoms n..2n-1.  Edge k has endpoints 2k and
    # 2k+1; endpoint p belongs to vertex ``endpoint[p]`` and its mate
    # endpoint is ``p ^ 1``.  Weights are doubled so all duals stay integral.

    def __init__(self, edges, nvertex, maxcardinality):
        self.n = n = nvertex
        self.maxcard = maxcardinality
        self.ei = [int(e[0]) for e in edges]
        self.ej = [int(e[1]) for e in edges]
        self.ew = [2 * int(e[2]) for e in edges]
        m = len(edges)
        self.m = m
        self.endpoint = [0] * (2 * m)
        self.neighbend = [[] for _ in range(n)]
        for k in range(m):
            i, j = self.ei[k], self.ej[k]
            if i == j or not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"bad edge ({i}, {j})")
            self.endpoint[2 * k] = i
            self.endpoint[2 * k + 1] = j
            self.neighbend[i].append(2 * k + 1)
            self.neighbend[j].append(2 * k)
        maxw = max([0] + self.ew)
        self.mate = [-1] * n
        self.label = [0] * (2 * n)
        self.labelend = [-1] * (2 * n)
        self.inblossom = list(range(n))
        self.parent = [-1] * (2 * n)
        self.childs = [None] * (2 * n)
        self.base = list(range(n)) + [-1] * n
        self.endps = [None] * (2 * n)
        self.bestedge = [-1] * (2 * n)
        self.bestedges = [None] * (2 * n)
        self.unused = list(range(n, 2 * n))
        self.dual = [maxw // 2] * n + [0] * n
        self.allow = [False] * m
        self.queue = []

    def slack(self, k):
        return self.dual[self.ei[k]] + self.dual[self.ej[k]] - self.ew[k]

    def leaves(self, b):
        n = self.n
        if b < n:
            return [b]
        out = []
        stack = [b]
        while stack:
            t = stack.pop()
            if t < n:
                out.append(t)
            else:
                stack.extend(self.childs[t])
        return out

    def assign_label(self, w, t, p):
        label, endpoint = self.label, self.endpoint
        while True:
            b = self.inblossom[w]
            label[w] = label[b] = t
            self.labelend[w] = self.labelend[b] = p
            self.bestedge[w] = self.bestedge[b] = -1
            if t == 1:
                self.queue.extend(self.leaves(b))
                return
            base = self.base[b]
            mb = self.mate[base]
            w, t, p = endpoint[mb], 1, mb ^ 1

    def scan_blossom(self, v, w):
        label, labelend, endpoint, inblossom = self.label, self.labelend, self.endpoint, self.inblossom
        path = []
        base = -1
        while v != -1 or w != -1:
            b = inblossom[v]
            if label[b] & 4:
                base = self.base[b]
                break
            path.append(b)
            label[b] = 5
            if labelend[b] == -1:
                v = -1
            else:
                v = endpoint[labelend[b]]
                b = inblossom[v]
                v = endpoint[labelend[b]]
            if w != -1:
                v, w = w, v
        for b in path:
            label[b] = 1
        return base

    def add_blossom(self, base, k):
        n = self.n
        inblossom, labelend, endpoint = self.inblossom, self.labelend, self.endpoint
        v, w = self.ei[k], self.ej[k]
        bb = inblossom[base]
        bv = inblossom[v]
        bw = inblossom[w]
        b = self.unused.pop()
        self.base[b] = base
        self.parent[b] = -1
        self.parent[bb] = b
        path = []
        endps = []
        while bv != bb:
            self.parent[bv] = b
            path.append(bv)
            endps.append(labelend[bv])
            v = endpoint[labelend[bv]]
            bv = inblossom[v]
        path.append(bb)
        path.reverse()
        endps.reverse()
        endps.append(2 * k)
        while bw != bb:
            self.parent[bw] = b
            path.append(bw)
            endps.append(labelend[bw] ^ 1)
            w = endpoint[labelend[bw]]
            bw = inblossom[w]
        self.childs[b] = path
        self.endps[b] = endps
        self.label[b] = 1
        labelend[b] = labelend[bb]
        self.dual[b] = 0
        for v in self.leaves(b):
            if self.label[inblossom[v]] == 2:
                self.queue.append(v)
            inblossom[v] = b
        # least-slack edges from the new blossom to other S-blossoms
        bestto = [-1] * (2 * n)
        for bv in path:
            if self.bestedges[bv] is None:
                nblists = [[p // 2 for p in self.neighbend[x]] for x in self.leaves(bv)]
            else:
                nblists = [self.bestedges[bv]]
            for nblist in nblists:
                for kk in nblist:
                    i, j = self.ei[kk], self.ej[kk]
                    if inblossom[j] == b:
                        i, j = j, i
                    bj = inblossom[j]
                    if (bj != b and self.label[bj] == 1
                            and (bestto[bj] == -1 or self.slack(kk) < self.slack(bestto[bj]))):
                        bestto[bj] = kk
            self.bestedges[bv] = None
            self.bestedge[bv] = -1
        self.bestedges[b] = [kk for kk in bestto if kk != -1]
        self.bestedge[b] = -1
        for kk in self.bestedges[b]:
            if self.bestedge[b] == -1 or self.slack(kk) < self.slack(self.bestedge[b]):
                self.bestedge[b] = kk

    def expand_blossom(self, b, endstage):
        n = self.n
        label, labelend, endpoint, inblossom = self.label, self.labelend, self.endpoint, self.inblossom
        for s in self.childs[b]:
            self.parent[s] = -1
            if s < n:
                inblossom[s] = s
            elif endstage and self.dual[s] == 0:
                self.expand_blossom(s, endstage)
            else:
                for v in self.leaves(s):
                    inblossom[v] = s
        if not endstage and label[b] == 2:
            childs = self.childs[b]
            endps = self.endps[b]
            entry = inblossom[endpoint[labelend[b] ^ 1]]
            j = childs.index(entry)
            if j & 1:
                j -= len(childs)
                jstep, trick = 1, 0
            else:
                jstep, trick = -1, 1
            p = labelend[b]
            while j != 0:
                label[endpoint[p ^ 1]] = 0
                label[endpoint[endps[j - trick] ^ trick ^ 1]] = 0
                self.assign_label(endpoint[p ^ 1], 2, p)
                self.allow[endps[j - trick] // 2] = True
                j += jstep
                p = endps[j - trick] ^ trick
                self.allow[p // 2] = True
                j += jstep
            bv = childs[j]
            label[endpoint[p ^ 1]] = label[bv] = 2
            labelend[endpoint[p ^ 1]] = labelend[bv] = p
            self.bestedge[bv] = -1
            j += jstep
            while childs[j] != entry:
                bv = childs[j]
                if label[bv] == 1:
                    j += jstep
                    continue
                hit = -1
                for v in self.leaves(bv):
                    if label[v] != 0:
                        hit = v
                        break
                if hit != -1:
                    label[hit] = 0
                    label[endpoint[self.mate[self.base[bv]]]] = 0
                    self.assign_label(hit, 2, labelend[hit])
                j += jstep
        label[b] = labelend[b] = -1
        self.childs[b] = self.endps[b] = None
        self.base[b] = -1
        self.bestedges[b] = None
        self.bestedge[b] = -1
        self.unused.append(b)

    def augment_blossom(self, b, v):
        n = self.n
        endpoint = self.endpoint
        t = v
        while self.parent[t] != b:
            t = self.parent[t]
        if t >= n:
            self.augment_blossom(t, v)
        childs = self.childs[b]
        endps = self.endps[b]
        i = j = childs.index(t)
        if i & 1:
            j -= len(childs)
            jstep, trick = 1, 0
        else:
            jstep, trick = -1, 1
        while j != 0:
            j += jstep
            t = childs[j]
            p = endps[j - trick] ^ trick
            if t >= n:
                self.augment_blossom(t, endpoint[p])
            j += jstep
            t = childs[j]
            if t >= n:
                self.augment_blossom(t, endpoint[p ^ 1])
            self.mate[endpoint[p]] = p ^ 1
            self.mate[endpoint[p ^ 1]] = p
        self.childs[b] = childs[i:] + childs[:i]
        self.endps[b] = endps[i:] + endps[:i]
        self.base[b] = self.base[self.childs[b][0]]

    def augment_matching(self, k):
        n = self.n
        endpoint, inblossom, labelend = self.endpoint, self.inblossom, self.labelend
        for s, p in ((self.ei[k], 2 * k + 1), (self.ej[k], 2 * k)):
            while True:
                bs = inblossom[s]
                if bs >= n:
                    self.augment_blossom(bs, s)
                self.mate[s] = p
                if labelend[bs] == -1:
                    break
                t = endpoint[labelend[bs]]
                bt = inblossom[t]
                s = endpoint[labelend[bt]]
                j = endpoint[labelend[bt] ^ 1]
                if bt >= n:
                    self.augment_blossom(bt, j)
                self.mate[j] = labelend[bt]
                p = labelend[bt] ^ 1

    def solve(self):
        n = self.n
        label, inblossom, endpoint = self.label, self.inblossom, self.endpoint
        dual, bestedge = self.dual, self.bestedge
        for _ in range(n):
            for x in range(2 * n):
                label[x] = 0
                bestedge[x] = -1
            for x in range(n, 2 * n):
                self.bestedges[x] = None
            for x in range(self.m):
                self.allow[x] = False
            self.queue = []
            for v in range(n):
                if self.mate[v] == -1 and label[inblossom[v]] == 0:
                    self.assign_label(v, 1, -1)
            augmented = False
            while True:
                while self.queue and not augmented:
                    v = self.queue.pop()
                    for p in self.neighbend[v]:
                        k = p // 2
                        w = endpoint[p]
                        if inblossom[v] == inblossom[w]:
                            continue
                        kslack = 0
                        if not self.allow[k]:
                            kslack = self.slack(k)
                            if kslack <= 0:
                                self.allow[k] = True
                        if self.allow[k]:
                            if label[inblossom[w]] == 0:
                                self.assign_label(w, 2, p ^ 1)
                            elif label[inblossom[w]] == 1:
                                base = self.scan_blossom(v, w)
                                if base >= 0:
                                    self.add_blossom(base, k)
                                else:
                                    self.augment_matching(k)
                                    augmented = True
                                    break
                            elif label[w] == 0:
                                label[w] = 2
                                self.labelend[w] = p ^ 1
                        elif label[inblossom[w]] == 1:
                            b = inblossom[v]
                            if bestedge[b] == -1 or kslack < self.slack(bestedge[b]):
                                bestedge[b] = k
                        elif label[w] == 0:
                            if bestedge[w] == -1 or kslack < self.slack(bestedge[w]):
                                bestedge[w] = k
                if augmented:
                    break
                dtype = -1
                delta = 0
                dedge = -1
                dblossom = -1
                if not self.maxcard:
                    dtype = 1
                    delta = min(dual[:n])
                for v in range(n):
                    if label[inblossom[v]] == 0 and bestedge[v] != -1:
                        d = self.slack(bestedge[v])
                        if dtype == -1 or d < delta:
                            delta, dtype, dedge = d, 2, bestedge[v]
                for b in range(2 * n):
                    if self.parent[b] == -1 and label[b] == 1 and bestedge[b] != -1:
                        d = self.slack(bestedge[b]) // 2
                        if dtype == -1 or d < delta:
                            delta, dtype, dedge = d, 3, bestedge[b]
                for b in range(n, 2 * n):
                    if (self.base[b] >= 0 and self.parent[b] == -1 and label[b] == 2
                            and (dtype == -1 or dual[b] < delta)):
                        delta, dtype, dblossom = dual[b], 4, b
                if dtype == -1:
                    dtype = 1
                    delta = max(0, min(dual[:n]))
                for v in range(n):
                    lb = label[inblossom[v]]
                    if lb == 1:
                        dual[v] -= delta
                    elif lb == 2:
                        dual[v] += delta
                for b in range(n, 2 * n):
                    if self.base[b] >= 0 and self.parent[b] == -1:
                        if label[b] == 1:
                            dual[b] += delta
                        elif label[b] == 2:
                            dual[b] -= delta
                if dtype == 1:
                    break
                elif dtype == 2:
                    self.allow[dedge] = True
                    i, j = self.ei[dedge], self.ej[dedge]
                    if label[inblossom[i]] == 0:
                        i, j = j, i
                    self.queue.append(i)
                elif dtype == 3:
                    self.allow[dedge] = True
                    self.queue.append(self.ei[dedge])
                else:
                    self.expand_blossom(dblossom, False)
            if not augmented:
                break
            for b in range(n, 2 * n):
                if (self.parent[b] == -1 and self.base[b] >= 0 and label[b] == 1
                        and dual[b] == 0):
                    self.expand_blossom(b, True)
        return [endpoint[p] if p >= 0 else -1 for p in self.mate]
