# cython: boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled DP kernel for the path mapping distance.

Mirrors _dp_py.distance_arrays case by case with the same arithmetic
operation order, so both kernels return bit-identical values. Children
matchings for degrees up to three are enumerated inline; larger degrees
fall back to the shared Python assignment solver.
"""

from cython.operator cimport dereference
from libc.math cimport fabs, INFINITY
from libcpp.unordered_map cimport unordered_map

import numpy as np

from .assignment import child_assignment

# dense memo while nstates1 * nstates2 stays within this, hashed otherwise
cdef long DENSE_LIMIT = 16777216


cdef void _sa_rec(double* cost, int k1, int k2, double* dels, double* inss,
                  int i, int used, double acc, double* best):
    # same option order and accumulation order as assignment._enumerate_small
    cdef double t
    cdef int j
    if i == k1:
        t = acc
        for j in range(k2):
            if not (used >> j) & 1:
                t = t + inss[j]
        if t < best[0]:
            best[0] = t
        return
    _sa_rec(cost, k1, k2, dels, inss, i + 1, used, acc + dels[i], best)
    for j in range(k2):
        if not (used >> j) & 1:
            _sa_rec(cost, k1, k2, dels, inss, i + 1, used | (1 << j),
                    acc + cost[i * k2 + j], best)


cdef class _Kernel:
    cdef long[::1] dep1, off1, cs1, cl1
    cdef long[::1] dep2, off2, cs2, cl2
    cdef double[::1] lab1, sp1, up1
    cdef double[::1] lab2, sp2, up2
    cdef long nstates2
    cdef bint dense
    cdef double[:, ::1] memo
    cdef unordered_map[long long, double] hmemo

    cdef double pd(self, long n1, long p1, long n2, long p2):
        cdef long i1 = self.off1[n1] + self.dep1[p1]
        cdef long i2 = self.off2[n2] + self.dep2[p2]
        cdef long long hkey = 0
        cdef double v
        cdef unordered_map[long long, double].iterator it
        if self.dense:
            v = self.memo[i1, i2]
            if v >= 0.0:
                return v
        else:
            hkey = (<long long> i1) * self.nstates2 + i2
            it = self.hmemo.find(hkey)
            if it != self.hmemo.end():
                return dereference(it).second
        cdef long a1 = self.cs1[n1], b1 = self.cs1[n1 + 1]
        cdef long a2 = self.cs2[n2], b2 = self.cs2[n2 + 1]
        cdef long k1 = b1 - a1, k2 = b2 - a2
        cdef double pl1 = self.up1[n1] - self.up1[p1]
        cdef double pl2 = self.up2[n2] - self.up2[p2]
        cdef double d1, d2, cand, best
        cdef long c1, c2, i, j
        cdef double cbuf[9]
        cdef double dbuf[3]
        cdef double ibuf[3]
        if k1 == 0 and k2 == 0:
            v = fabs(pl1 - pl2)
        elif k1 == 0:
            v = INFINITY
            for j in range(a2, b2):
                c2 = self.cl2[j]
                cand = (self.sp2[n2] - self.lab2[c2] - self.sp2[c2]) + self.pd(n1, p1, c2, p2)
                if cand < v:
                    v = cand
        elif k2 == 0:
            v = INFINITY
            for i in range(a1, b1):
                c1 = self.cl1[i]
                cand = (self.sp1[n1] - self.lab1[c1] - self.sp1[c1]) + self.pd(c1, p1, n2, p2)
                if cand < v:
                    v = cand
        else:
            d1 = INFINITY
            for i in range(a1, b1):
                c1 = self.cl1[i]
                cand = (self.sp1[n1] - self.lab1[c1] - self.sp1[c1]) + self.pd(c1, p1, n2, p2)
                if cand < d1:
                    d1 = cand
            d2 = INFINITY
            for j in range(a2, b2):
                c2 = self.cl2[j]
                cand = (self.sp2[n2] - self.lab2[c2] - self.sp2[c2]) + self.pd(n1, p1, c2, p2)
                if cand < d2:
                    d2 = cand
            if k1 <= 3 and k2 <= 3:
                for i in range(k1):
                    c1 = self.cl1[a1 + i]
                    dbuf[i] = self.lab1[c1] + self.sp1[c1]
                    for j in range(k2):
                        c2 = self.cl2[a2 + j]
                        cbuf[i * k2 + j] = self.pd(c1, n1, c2, n2)
                for j in range(k2):
                    c2 = self.cl2[a2 + j]
                    ibuf[j] = self.lab2[c2] + self.sp2[c2]
                best = INFINITY
                _sa_rec(cbuf, <int> k1, <int> k2, dbuf, ibuf, 0, 0, 0.0, &best)
            else:
                best = self._big_assignment(n1, n2, a1, b1, a2, b2)
            v = fabs(pl1 - pl2) + best
            if d1 < v:
                v = d1
            if d2 < v:
                v = d2
        if self.dense:
            self.memo[i1, i2] = v
        else:
            self.hmemo[hkey] = v
        return v

    cdef double _big_assignment(self, long n1, long n2, long a1, long b1, long a2, long b2):
        cdef long i, j, c1, c2
        cost = []
        dels = []
        inss = []
        for i in range(a1, b1):
            c1 = self.cl1[i]
            row = []
            for j in range(a2, b2):
                c2 = self.cl2[j]
                row.append(self.pd(c1, n1, c2, n2))
            cost.append(row)
            dels.append(self.lab1[c1] + self.sp1[c1])
        for j in range(a2, b2):
            c2 = self.cl2[j]
            inss.append(self.lab2[c2] + self.sp2[c2])
        total, _ = child_assignment(cost, dels, inss)
        return <double> total


def _csr(children):
    starts = np.zeros(len(children) + 1, dtype=np.int64)
    flat = []
    for i, cs in enumerate(children):
        flat.extend(cs)
        starts[i + 1] = len(flat)
    return starts, np.asarray(flat, dtype=np.int64)


def distance_arrays(a1, a2):
    """delta_1 between two non-empty trees given as _prep.TreeArrays."""
    cdef _Kernel k = _Kernel()
    k.dep1 = np.asarray(a1.depth, dtype=np.int64)
    k.off1 = np.asarray(a1.offset, dtype=np.int64)
    k.lab1 = np.asarray(a1.label, dtype=np.float64)
    k.sp1 = np.asarray(a1.subpers, dtype=np.float64)
    k.up1 = np.asarray(a1.upsum, dtype=np.float64)
    cs1, cl1 = _csr(a1.children)
    k.cs1 = cs1
    k.cl1 = cl1 if len(cl1) else np.zeros(1, dtype=np.int64)
    k.dep2 = np.asarray(a2.depth, dtype=np.int64)
    k.off2 = np.asarray(a2.offset, dtype=np.int64)
    k.lab2 = np.asarray(a2.label, dtype=np.float64)
    k.sp2 = np.asarray(a2.subpers, dtype=np.float64)
    k.up2 = np.asarray(a2.upsum, dtype=np.float64)
    cs2, cl2 = _csr(a2.children)
    k.cs2 = cs2
    k.cl2 = cl2 if len(cl2) else np.zeros(1, dtype=np.int64)
    k.nstates2 = a2.nstates
    if a1.nstates * a2.nstates <= DENSE_LIMIT:
        k.dense = True
        k.memo = np.full((max(a1.nstates, 1), max(a2.nstates, 1)), -1.0)
    else:
        k.dense = False
    r1 = a1.root
    r2 = a2.root
    return k.pd(a1.children[r1][0], r1, a2.children[r2][0], r2)
