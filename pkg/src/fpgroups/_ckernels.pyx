# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; mirrors :mod:`fpgroups._pykernels` exactly."""

from libc.stdlib cimport malloc, free
from libc.string cimport memset
import time

from fpgroups._pykernels import relator_conjugates, STATUS_DONE, STATUS_TIMEOUT, STATUS_NODES


cdef struct LowIndexState:
    int ncols
    int n
    int *table
    int *trail
    int ntrail
    int *queue
    int nqueue
    # conjugates: flat letters, per-first-letter ranges
    int *conj_letters
    int *conj_start      # start offset of each conjugate
    int *conj_len
    int *bucket_start    # per letter: first conjugate index
    int *bucket_end
    long nodes
    long max_nodes
    int stopped          # 0 running, 1 node limit, 2 timeout
    int first_only
    int found


cdef inline void _assign(LowIndexState *st, int c, int x, int d) nogil:
    cdef int p = c * st.ncols + x
    cdef int q = d * st.ncols + (x ^ 1)
    st.table[p] = d
    st.table[q] = c
    st.trail[st.ntrail] = p
    st.trail[st.ntrail + 1] = q
    st.ntrail += 2


cdef inline int _scan(LowIndexState *st, int c, int k) nogil:
    cdef int *w = st.conj_letters + st.conj_start[k]
    cdef int L = st.conj_len[k]
    cdef int ncols = st.ncols
    cdef int f = c, b = c, i = 0, j, nxt, x
    while i < L:
        nxt = st.table[f * ncols + w[i]]
        if nxt < 0:
            break
        f = nxt
        i += 1
    if i == L:
        return f == c
    j = L - 1
    while j > i:
        nxt = st.table[b * ncols + (w[j] ^ 1)]
        if nxt < 0:
            break
        b = nxt
        j -= 1
    if j == i:
        x = w[i]
        if st.table[b * ncols + (x ^ 1)] >= 0:
            return 0
        _assign(st, f, x, b)
        st.queue[2 * st.nqueue] = f
        st.queue[2 * st.nqueue + 1] = x
        st.nqueue += 1
    return 1


cdef int _deduce(LowIndexState *st) nogil:
    cdef int c, x, d, k
    while st.nqueue > 0:
        st.nqueue -= 1
        c = st.queue[2 * st.nqueue]
        x = st.queue[2 * st.nqueue + 1]
        for k in range(st.bucket_start[x], st.bucket_end[x]):
            if not _scan(st, c, k):
                st.nqueue = 0
                return 0
        d = st.table[c * st.ncols + x]
        for k in range(st.bucket_start[x ^ 1], st.bucket_end[x ^ 1]):
            if not _scan(st, d, k):
                st.nqueue = 0
                return 0
    return 1


cdef inline void _undo(LowIndexState *st, int mark) nogil:
    while st.ntrail > mark:
        st.ntrail -= 1
        st.table[st.trail[st.ntrail]] = -1


cdef int _search(LowIndexState *st, int k, int start, list results, double deadline) except -1:
    cdef int pos, end, c, x, inv, d, mark
    st.nodes += 1
    if st.max_nodes > 0 and st.nodes > st.max_nodes:
        st.stopped = 1
        return 1
    if deadline > 0 and (st.nodes & 1023) == 0 and time.monotonic() > deadline:
        st.stopped = 2
        return 1
    pos = start
    end = k * st.ncols
    while pos < end and st.table[pos] >= 0:
        pos += 1
    if pos == end:
        if k >= 2:
            results.append(tuple([st.table[i] for i in range(end)]))
            return 1 if st.first_only else 0
        return 0
    c = pos // st.ncols
    x = pos % st.ncols
    inv = x ^ 1
    for d in range(k):
        if st.table[d * st.ncols + inv] < 0:
            mark = st.ntrail
            _assign(st, c, x, d)
            st.queue[0] = c
            st.queue[1] = x
            st.nqueue = 1
            if _deduce(st):
                if _search(st, k, pos + 1, results, deadline):
                    return 1
            _undo(st, mark)
    if k < st.n:
        mark = st.ntrail
        _assign(st, c, x, k)
        st.queue[0] = c
        st.queue[1] = x
        st.nqueue = 1
        if _deduce(st):
            if _search(st, k + 1, pos + 1, results, deadline):
                return 1
        _undo(st, mark)
    return 0


def low_index_search(int ncols, relators, int max_index, first_only=False, deadline=None, max_nodes=0):
    conj = relator_conjugates(ncols, relators)
    cdef LowIndexState st
    cdef int total_conj = sum(len(b) for b in conj)
    cdef int total_letters = sum(len(w) for b in conj for w in b)
    cdef int size = max_index * ncols
    cdef int i, k, pos
    results = []
    if max_index < 1 or ncols == 0:
        return results, 0, STATUS_DONE
    memset(&st, 0, sizeof(LowIndexState))
    st.ncols = ncols
    st.n = max_index
    st.table = <int *> malloc(size * sizeof(int))
    st.trail = <int *> malloc((2 * size + 2) * sizeof(int))
    st.queue = <int *> malloc((2 * size + 2) * sizeof(int))
    st.conj_letters = <int *> malloc((total_letters + 1) * sizeof(int))
    st.conj_start = <int *> malloc((total_conj + 1) * sizeof(int))
    st.conj_len = <int *> malloc((total_conj + 1) * sizeof(int))
    st.bucket_start = <int *> malloc(ncols * sizeof(int))
    st.bucket_end = <int *> malloc(ncols * sizeof(int))
    try:
        for i in range(size):
            st.table[i] = -1
        k = 0
        pos = 0
        for i in range(ncols):
            st.bucket_start[i] = k
            for w in conj[i]:
                st.conj_start[k] = pos
                st.conj_len[k] = len(w)
                for letter in w:
                    st.conj_letters[pos] = letter
                    pos += 1
                k += 1
            st.bucket_end[i] = k
        st.max_nodes = max_nodes or 0
        st.first_only = 1 if first_only else 0
        _search(&st, 1, 0, results, deadline if deadline is not None else -1.0)
        status = STATUS_DONE
        if st.stopped == 1:
            status = STATUS_NODES
        elif st.stopped == 2:
            status = STATUS_TIMEOUT
        return results, st.nodes, status
    finally:
        free(st.table)
        free(st.trail)
        free(st.queue)
        free(st.conj_letters)
        free(st.conj_start)
        free(st.conj_len)
        free(st.bucket_start)
        free(st.bucket_end)


def lcp_array(codes, sa):
    cdef Py_ssize_t n = len(codes)
    cdef long *s = <long *> malloc((n + 1) * sizeof(long))
    cdef long *sap = <long *> malloc((n + 1) * sizeof(long))
    cdef long *rank = <long *> malloc((n + 1) * sizeof(long))
    cdef long *lcp = <long *> malloc((n + 1) * sizeof(long))
    cdef Py_ssize_t i, p, q, r, h = 0
    try:
        for i in range(n):
            s[i] = codes[i]
            sap[i] = sa[i]
        for i in range(n):
            rank[sap[i]] = i
        for i in range(n):
            lcp[i] = 0
        for p in range(n):
            r = rank[p]
            if r == 0:
                h = 0
                continue
            q = sap[r - 1]
            while p + h < n and q + h < n and s[p + h] == s[q + h]:
                h += 1
            lcp[r] = h
            if h:
                h -= 1
        return [lcp[i] for i in range(n)]
    finally:
        free(s)
        free(sap)
        free(rank)
        free(lcp)


def piece_scan(sa, lcp, owner, offset, length, period, Py_ssize_t nwords):
    cdef Py_ssize_t n = len(sa)
    cdef long *keep = <long *> malloc((n + 1) * sizeof(long))
    cdef long *klcp = <long *> malloc((n + 1) * sizeof(long))
    cdef long *own = <long *> malloc((n + 1) * sizeof(long))
    cdef long *off = <long *> malloc((n + 1) * sizeof(long))
    cdef long *lens = <long *> malloc((nwords + 1) * sizeof(long))
    cdef long *pers = <long *> malloc((nwords + 1) * sizeof(long))
    cdef long *best = <long *> malloc((nwords + 1) * sizeof(long))
    cdef long *wa = <long *> malloc((nwords + 1) * sizeof(long))
    cdef long *wb = <long *> malloc((nwords + 1) * sizeof(long))
    cdef long BIG = 1L << 62
    cdef long run, Li, per, oi, cand, pi, pj, wi, wj, d
    cdef Py_ssize_t i, m = 0, a, b, step
    try:
        for i in range(n):
            own[i] = owner[i]
            off[i] = offset[i]
        for i in range(nwords):
            lens[i] = length[i]
            pers[i] = period[i]
            best[i] = 0
            wa[i] = -1
            wb[i] = -1
        run = BIG
        for i in range(n):
            if i:
                run = min(run, <long> lcp[i])
            pi = sa[i]
            if own[pi] >= 0:
                keep[m] = pi
                klcp[m] = run
                m += 1
                run = BIG
        for a in range(m):
            pi = keep[a]
            wi = own[pi]
            Li = lens[wi]
            per = pers[wi]
            oi = off[pi]
            for step in (-1, 1):
                run = BIG
                b = a + step
                while 0 <= b < m:
                    run = min(run, klcp[b + 1] if step < 0 else klcp[b])
                    if min(run, Li) <= best[wi]:
                        break
                    pj = keep[b]
                    wj = own[pj]
                    d = (oi - off[pj]) % per
                    if d < 0:
                        d += per
                    if wj == wi and d == 0:
                        cand = Li - 1
                    else:
                        cand = min(run, min(Li, lens[wj]))
                    if cand > best[wi]:
                        best[wi] = cand
                        wa[wi] = pi
                        wb[wi] = pj
                    b += step
        return [best[i] for i in range(nwords)], [(wa[i], wb[i]) for i in range(nwords)]
    finally:
        free(keep)
        free(klcp)
        free(own)
        free(off)
        free(lens)
        free(pers)
        free(best)
        free(wa)
        free(wb)
