# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled non-dominated sorting kernel (dominance counting + front peeling).

This is the O(m * N^2) hot loop of environmental selection; it runs once or
twice per generation on the merged parent/offspring pool.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def nds_ranks(object f_obj):
    """Front index per row of the objective matrix (N x m), minimization."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] f = \
        np.ascontiguousarray(f_obj, dtype=np.float64)
    cdef Py_ssize_t n = f.shape[0]
    cdef Py_ssize_t m = f.shape[1]
    ranks_arr = np.full(n, -1, dtype=np.int32)
    if n == 0:
        return ranks_arr
    cdef cnp.int32_t[::1] ranks = ranks_arr
    # dominated-index lists, flattened row-major: row i holds the indices i dominates
    dominated_arr = np.empty(n * n, dtype=np.int32)
    dom_len_arr = np.zeros(n, dtype=np.int32)
    dom_count_arr = np.zeros(n, dtype=np.int32)
    cur_arr = np.empty(n, dtype=np.int32)
    nxt_arr = np.empty(n, dtype=np.int32)
    cdef cnp.int32_t[::1] dominated = dominated_arr
    cdef cnp.int32_t[::1] dom_len = dom_len_arr
    cdef cnp.int32_t[::1] dom_count = dom_count_arr
    cdef cnp.int32_t[::1] cur = cur_arr
    cdef cnp.int32_t[::1] nxt = nxt_arr

    cdef Py_ssize_t i, j, k, pos, q
    cdef Py_ssize_t n_cur, n_nxt
    cdef cnp.int32_t rank
    cdef double a, b
    cdef bint i_le, i_lt, j_le, j_lt

    for i in range(n):
        for j in range(i + 1, n):
            i_le = True
            i_lt = False
            j_le = True
            j_lt = False
            for k in range(m):
                a = f[i, k]
                b = f[j, k]
                if a < b:
                    i_lt = True
                    j_le = False
                elif b < a:
                    j_lt = True
                    i_le = False
            if i_le and i_lt:
                dominated[i * n + dom_len[i]] = <cnp.int32_t> j
                dom_len[i] += 1
                dom_count[j] += 1
            elif j_le and j_lt:
                dominated[j * n + dom_len[j]] = <cnp.int32_t> i
                dom_len[j] += 1
                dom_count[i] += 1

    n_cur = 0
    for i in range(n):
        if dom_count[i] == 0:
            ranks[i] = 0
            cur[n_cur] = <cnp.int32_t> i
            n_cur += 1
    rank = 0
    while n_cur > 0:
        n_nxt = 0
        for pos in range(n_cur):
            i = cur[pos]
            for q in range(dom_len[i]):
                j = dominated[i * n + q]
                dom_count[j] -= 1
                if dom_count[j] == 0:
                    ranks[j] = rank + 1
                    nxt[n_nxt] = <cnp.int32_t> j
                    n_nxt += 1
        rank += 1
        cur, nxt = nxt, cur
        n_cur = n_nxt
    return ranks_arr
