# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled backward-induction kernel; semantics mirror _kernel_py exactly.

Status codes: 0 unseen, 1 reachable, 2 winning-for-pursuers. Ranks are BFS
layers of the backward pass and do not depend on within-layer order, so the
two kernels produce identical arrays.
"""

import numpy as np

KERNEL_NAME = "cython"

cdef enum:
    MAXN = 16

cdef int UNSEEN = 0
cdef int REACHED = 1
cdef int WIN = 2


cdef inline long long _crank_sorted(int* dests, int n, long long[:, ::1] binom) nogil:
    cdef long long rank = 0
    cdef int i
    for i in range(n):
        rank += binom[dests[i] + i, i + 1]
    return rank


cdef inline void _unrank(long long rank, int n, long long[:, ::1] binom, int* out) nogil:
    cdef long long rem = rank
    cdef int i, d
    for i in range(n, 0, -1):
        d = i - 1
        while binom[d + 1, i] <= rem:
            d += 1
        rem -= binom[d, i]
        out[i - 1] = d - (i - 1)


cdef inline void _insertion_sort(int* a, int n) nogil:
    cdef int i, j, key
    for i in range(1, n):
        key = a[i]
        j = i - 1
        while j >= 0 and a[j] > key:
            a[j + 1] = a[j]
            j -= 1
        a[j + 1] = key


cdef inline bint _threatened(unsigned long long[:, ::1] unprot_words, int words,
                             int* cops, int n, int r) nogil:
    cdef int i, c
    for i in range(n):
        c = cops[i]
        if unprot_words[r, c >> 6] & ((<unsigned long long>1) << (c & 63)):
            return True
    return False


def solve_attractor(cg, bint mode_full, long long start_crank, int start_robber,
                    bint start_c2m):
    cdef int V = cg.V
    cdef int n = cg.n
    if n > MAXN:
        raise ValueError(f"kernel supports at most {MAXN} cops")
    cdef long long M = cg.n_multisets
    cdef long long S = cg.states_per_side

    cdef int[::1] nbhd_indptr = cg.nbhd_indptr
    cdef int[::1] nbhd_indices = cg.nbhd_indices
    cdef unsigned long long[:, ::1] unprot_words = cg.unprot_words
    cdef long long[:, ::1] binom = cg.binom_arr
    cdef int words = cg.words

    status_c2m_np = np.zeros(S, dtype=np.uint8)
    status_r2m_np = np.zeros(S, dtype=np.uint8)
    rank_c2m_np = np.full(S, -1, dtype=np.int32)
    rank_r2m_np = np.full(S, -1, dtype=np.int32)
    dec_np = np.zeros(S, dtype=np.int32)
    cdef unsigned char[::1] status_c2m = status_c2m_np
    cdef unsigned char[::1] status_r2m = status_r2m_np
    cdef int[::1] rank_c2m = rank_c2m_np
    cdef int[::1] rank_r2m = rank_r2m_np
    cdef int[::1] dec_r2m = dec_np

    # FIFO queues: entries encode sidx * 2 + parity (1 = cops to move).
    queue_np = np.zeros(2 * S + 2, dtype=np.int64)
    cdef long long[::1] queue = queue_np
    cdef long long qhead = 0, qtail = 0

    back_np = np.zeros(2 * S + 2, dtype=np.int64)
    cdef long long[::1] back = back_np
    cdef long long bhead = 0, btail = 0

    cdef int cops[MAXN]
    cdef int tmp[MAXN]
    cdef int idx[MAXN]
    cdef int starts[MAXN]
    cdef int lens[MAXN]

    cdef long long crank, s, s2, base, seeds = 0
    cdef int r, u, i, j, layer
    cdef bint c2m, exhausted

    if mode_full:
        for crank in range(M):
            _unrank(crank, n, binom, cops)
            base = crank * V
            for r in range(V):
                if _threatened(unprot_words, words, cops, n, r):
                    status_c2m[base + r] = WIN
                    rank_c2m[base + r] = 0
                    back[btail] = (base + r) * 2 + 1
                    btail += 1
                    seeds += 1
                else:
                    status_c2m[base + r] = REACHED
                status_r2m[base + r] = REACHED
    else:
        s = start_crank * V + start_robber
        _unrank(start_crank, n, binom, cops)
        if start_c2m:
            if _threatened(unprot_words, words, cops, n, start_robber):
                status_c2m[s] = WIN
                rank_c2m[s] = 0
                back[btail] = s * 2 + 1
                btail += 1
                seeds += 1
            else:
                status_c2m[s] = REACHED
                queue[qtail] = s * 2 + 1
                qtail += 1
        else:
            status_r2m[s] = REACHED
            queue[qtail] = s * 2
            qtail += 1

        while qhead < qtail:
            s = queue[qhead] >> 1
            c2m = queue[qhead] & 1
            qhead += 1
            crank = s / V
            r = <int> (s - crank * V)
            _unrank(crank, n, binom, cops)
            if c2m:
                for i in range(n):
                    starts[i] = nbhd_indptr[cops[i]]
                    lens[i] = nbhd_indptr[cops[i] + 1] - starts[i]
                    idx[i] = 0
                while True:
                    for i in range(n):
                        tmp[i] = nbhd_indices[starts[i] + idx[i]]
                    _insertion_sort(tmp, n)
                    s2 = _crank_sorted(tmp, n, binom) * V + r
                    if status_r2m[s2] == UNSEEN:
                        status_r2m[s2] = REACHED
                        queue[qtail] = s2 * 2
                        qtail += 1
                    exhausted = True
                    for i in range(n):
                        idx[i] += 1
                        if idx[i] < lens[i]:
                            exhausted = False
                            break
                        idx[i] = 0
                    if exhausted:
                        break
            else:
                base = crank * V
                for j in range(nbhd_indptr[r], nbhd_indptr[r + 1]):
                    u = nbhd_indices[j]
                    s2 = base + u
                    if status_c2m[s2] == UNSEEN:
                        if _threatened(unprot_words, words, cops, n, u):
                            status_c2m[s2] = WIN
                            rank_c2m[s2] = 0
                            back[btail] = s2 * 2 + 1
                            btail += 1
                            seeds += 1
                        else:
                            status_c2m[s2] = REACHED
                            queue[qtail] = s2 * 2 + 1
                            qtail += 1

    # Backward propagation from the capture seeds.
    while bhead < btail:
        s = back[bhead] >> 1
        c2m = back[bhead] & 1
        bhead += 1
        crank = s / V
        r = <int> (s - crank * V)
        _unrank(crank, n, binom, cops)
        if c2m:
            layer = rank_c2m[s] + 1
            base = crank * V
            for j in range(nbhd_indptr[r], nbhd_indptr[r + 1]):
                u = nbhd_indices[j]
                s2 = base + u
                if status_r2m[s2] == REACHED:
                    dec_r2m[s2] += 1
                    if dec_r2m[s2] == nbhd_indptr[u + 1] - nbhd_indptr[u]:
                        status_r2m[s2] = WIN
                        rank_r2m[s2] = layer
                        back[btail] = s2 * 2
                        btail += 1
        else:
            layer = rank_r2m[s] + 1
            for i in range(n):
                starts[i] = nbhd_indptr[cops[i]]
                lens[i] = nbhd_indptr[cops[i] + 1] - starts[i]
                idx[i] = 0
            while True:
                for i in range(n):
                    tmp[i] = nbhd_indices[starts[i] + idx[i]]
                _insertion_sort(tmp, n)
                s2 = _crank_sorted(tmp, n, binom) * V + r
                if status_c2m[s2] == REACHED:
                    status_c2m[s2] = WIN
                    rank_c2m[s2] = layer
                    back[btail] = s2 * 2 + 1
                    btail += 1
                exhausted = True
                for i in range(n):
                    idx[i] += 1
                    if idx[i] < lens[i]:
                        exhausted = False
                        break
                    idx[i] = 0
                if exhausted:
                    break

    layers = int(max(rank_c2m_np.max(), rank_r2m_np.max())) + 1
    stats = {
        "kernel": KERNEL_NAME,
        "mode": "full" if mode_full else "reachable",
        "states_c2m": int(np.count_nonzero(status_c2m_np)),
        "states_r2m": int(np.count_nonzero(status_r2m_np)),
        "win_c2m": int(np.count_nonzero(status_c2m_np == WIN)),
        "win_r2m": int(np.count_nonzero(status_r2m_np == WIN)),
        "seeds": int(seeds),
        "layers": layers,
    }
    return status_c2m_np, status_r2m_np, rank_c2m_np, rank_r2m_np, stats
