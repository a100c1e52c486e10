# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops (int64).  Callers must rule out overflow beforehand."""
import numpy as np

cdef long long[2][12] _D1
cdef long long[2][12] _D2
cdef int[2] _NDIG = [8, 12]
cdef int[2] _BASE = [3, 4]

_D1[0][:8] = [0, 0, 0, 1, 1, 2, 2, 2]
_D2[0][:8] = [0, 1, 2, 0, 2, 0, 1, 2]
_D1[1][:] = [0, 0, 0, 0, 1, 1, 2, 2, 3, 3, 3, 3]
_D2[1][:] = [0, 1, 2, 3, 0, 3, 0, 1, 0, 1, 2, 3]


def oracle_level_counts(long long P, long long Q, long long M, long long N, tags, long long budget):
    cdef Py_ssize_t size = 1, nsize, i, m
    cdef long long D = 1, target, X, Y, Xc, Yc, visited = 0
    cdef int t, b, nd, g
    cdef long long[::1] fx, fy, gx, gy
    counts = [1]
    fx = np.zeros(1, dtype=np.int64)
    fy = np.zeros(1, dtype=np.int64)
    for t in tags:
        b = _BASE[t]
        nd = _NDIG[t]
        if visited + size * nd > budget:
            break
        visited += size * nd
        D *= b
        target = P * N * D
        gx = np.empty(size * nd, dtype=np.int64)
        gy = np.empty(size * nd, dtype=np.int64)
        nsize = 0
        for i in range(size):
            X = fx[i] * b
            Y = fy[i] * b
            for g in range(nd):
                Xc = X + _D1[t][g]
                Yc = Y + _D2[t][g]
                if Q * (N * Yc - M * (Xc + 1)) <= target and target <= Q * (N * (Yc + 1) - M * Xc):
                    gx[nsize] = Xc
                    gy[nsize] = Yc
                    nsize += 1
        fx = gx[:nsize]
        fy = gy[:nsize]
        size = nsize
        counts.append(int(size))
    return counts


def word_norms(long long[:, :, :, ::1] mats, tags_in):
    """Entry-sum norms of A_x for every word x, lexicographic order.

    ``mats`` has shape (2, 4, n, n); tag-0 slot 3 is ignored.
    """
    cdef Py_ssize_t n = mats.shape[2]
    cdef Py_ssize_t k = len(tags_in)
    cdef Py_ssize_t total = 1, idx = 0, lvl, r, c, s, j
    cdef long long acc
    cdef int t
    tags_np = np.asarray(tags_in, dtype=np.int32)
    cdef int[::1] tags = tags_np
    for lvl in range(k):
        total *= _BASE[tags[lvl]]
    out_np = np.empty(total, dtype=np.int64)
    cdef long long[::1] out = out_np
    if k == 0:
        out[0] = n
        return out_np
    cdef long long[:, :, ::1] prods = np.zeros((k, n, n), dtype=np.int64)
    cdef long long[:, :, ::1] rowsum = np.zeros((2, 4, n), dtype=np.int64)
    cdef long long[::1] colsum = np.zeros(n, dtype=np.int64)
    cdef int[::1] digit = np.zeros(k, dtype=np.int32)
    for t in range(2):
        for j in range(_BASE[t]):
            for r in range(n):
                acc = 0
                for c in range(n):
                    acc += mats[t, j, r, c]
                rowsum[t, j, r] = acc
    for r in range(n):
        prods[0, r, r] = 1
    # prods[l] is the product of the first l factors; the last factor is
    # only folded in through row sums.
    lvl = 0
    while lvl >= 0:
        if lvl == k - 1:
            t = tags[lvl]
            for c in range(n):
                acc = 0
                for r in range(n):
                    acc += prods[lvl, r, c]
                colsum[c] = acc
            for j in range(_BASE[t]):
                acc = 0
                for c in range(n):
                    acc += colsum[c] * rowsum[t, j, c]
                out[idx] = acc
                idx += 1
            lvl -= 1
            while lvl >= 0:
                digit[lvl] += 1
                if digit[lvl] < _BASE[tags[lvl]]:
                    break
                digit[lvl] = 0
                lvl -= 1
            if lvl < 0:
                break
        t = tags[lvl]
        j = digit[lvl]
        for r in range(n):
            for c in range(n):
                acc = 0
                for s in range(n):
                    acc += prods[lvl, r, s] * mats[t, j, s, c]
                prods[lvl + 1, r, c] = acc
        lvl += 1
    return out_np
