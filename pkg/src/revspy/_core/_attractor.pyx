# cython: language_level=3
"""Compiled safety-game attractor kernel.

Wave-synchronized backward induction over the product state space
(rev config) x (spy config) x (side to move), flat C loops over CSR
neighbor tables.  Must stay result-identical to the NumPy fallback in
`pure.py`; the test suite compares both backends directly.
"""

import numpy as np

cimport cython
cimport numpy as cnp

cnp.import_array()


@cython.boundscheck(False)
@cython.wraparound(False)
def attractor(
    cnp.int64_t[::1] rev_indptr,
    cnp.int32_t[::1] rev_indices,
    cnp.int64_t[::1] spy_indptr,
    cnp.int32_t[::1] spy_indices,
    cnp.uint8_t[::1] bad,
    Py_ssize_t nr,
    Py_ssize_t ns,
):
    cdef Py_ssize_t size = nr * ns
    losing_r_arr = np.zeros(size, dtype=np.uint8)
    losing_s_arr = np.zeros(size, dtype=np.uint8)
    rank_r_arr = np.full(size, -1, dtype=np.int32)
    rank_s_arr = np.full(size, -1, dtype=np.int32)
    safe_cnt_arr = np.zeros(size, dtype=np.int32)
    qs_arr = np.empty(size, dtype=np.int64)
    qr_arr = np.empty(size, dtype=np.int64)

    cdef cnp.uint8_t[::1] losing_r = losing_r_arr
    cdef cnp.uint8_t[::1] losing_s = losing_s_arr
    cdef cnp.int32_t[::1] rank_r = rank_r_arr
    cdef cnp.int32_t[::1] rank_s = rank_s_arr
    cdef cnp.int32_t[::1] safe_cnt = safe_cnt_arr
    cdef cnp.int64_t[::1] qs = qs_arr
    cdef cnp.int64_t[::1] qr = qr_arr

    cdef Py_ssize_t rev, spy, spyp, revp, i, j, base, state, tgt
    cdef Py_ssize_t s_lo = 0, s_hi = 0, s_tail = 0, r_lo, r_hi, r_tail = 0
    cdef cnp.int32_t k = 0
    cdef cnp.int32_t cnt

    # safe_cnt[rev, spy] = number of spy successors spy' with bad[rev, spy'] == 0
    for rev in range(nr):
        base = rev * ns
        for spy in range(ns):
            cnt = 0
            for j in range(spy_indptr[spy], spy_indptr[spy + 1]):
                if bad[base + spy_indices[j]] == 0:
                    cnt += 1
            safe_cnt[base + spy] = cnt
            if cnt == 0:
                losing_s[base + spy] = 1
                rank_s[base + spy] = 0
                qs[s_tail] = base + spy
                s_tail += 1
    s_hi = s_tail

    while s_lo < s_hi:
        # lost spy-to-move states (rank k) -> rev predecessors lost at rank k+1
        r_lo = r_tail
        for i in range(s_lo, s_hi):
            state = qs[i]
            revp = state / ns
            spy = state - revp * ns
            for j in range(rev_indptr[revp], rev_indptr[revp + 1]):
                tgt = (<Py_ssize_t> rev_indices[j]) * ns + spy
                if losing_r[tgt] == 0:
                    losing_r[tgt] = 1
                    rank_r[tgt] = k + 1
                    qr[r_tail] = tgt
                    r_tail += 1
        r_hi = r_tail

        # each newly lost rev-to-move state (rev, spy') eliminates option spy'
        # from spy predecessors where it had counted as safe (not bad)
        for i in range(r_lo, r_hi):
            state = qr[i]
            if bad[state]:
                continue
            rev = state / ns
            spyp = state - rev * ns
            base = rev * ns
            for j in range(spy_indptr[spyp], spy_indptr[spyp + 1]):
                tgt = base + spy_indices[j]
                if losing_s[tgt]:
                    continue
                safe_cnt[tgt] -= 1
                if safe_cnt[tgt] == 0:
                    losing_s[tgt] = 1
                    rank_s[tgt] = k + 1
                    qs[s_tail] = tgt
                    s_tail += 1
        s_lo, s_hi = s_hi, s_tail
        k += 1

    return losing_r_arr, losing_s_arr, rank_r_arr, rank_s_arr
