"""Pure-Python implementations of the hot kernels.

Same signatures as the compiled ``_ckernels`` module; :mod:`fpgroups.kernels`
picks one at import time.  Letter codes: generator ``i`` is ``2i``, its
inverse ``2i + 1`` (so inversion is ``c ^ 1``).
"""

from __future__ import annotations

import time

STATUS_DONE = "complete"
STATUS_TIMEOUT = "timeout"
STATUS_NODES = "node-limit"


def relator_conjugates(ncols: int, relators) -> list[list[tuple[int, ...]]]:
    """All cyclic conjugates of relators and inverses, bucketed by first letter."""
    buckets: list[set] = [set() for _ in range(ncols)]
    for r in relators:
        r = list(r)
        inv = [c ^ 1 for c in reversed(r)]
        for w in (r, inv):
            for k in range(len(w)):
                rot = tuple(w[k:] + w[:k])
                buckets[rot[0]].add(rot)
    return [sorted(b) for b in buckets]


def low_index_search(ncols, relators, max_index, first_only=False, deadline=None, max_nodes=0):
    """Enumerate standardized complete coset tables of index 2..max_index.

    Returns ``(tables, nodes, status)``; each table is a flat row-major tuple
    of length ``index * ncols`` with 0-based coset numbers.  Entries are
    filled in row-major order and new cosets numbered on first use, so every
    subgroup of index ≤ ``max_index`` appears exactly once.
    """
    n = max_index
    table = [-1] * (n * ncols)
    conj = relator_conjugates(ncols, relators)
    trail: list[int] = []
    results: list[tuple[int, ...]] = []
    state = {"nodes": 0, "status": STATUS_DONE}

    def assign(c, x, d):
        p = c * ncols + x
        q = d * ncols + (x ^ 1)
        table[p] = d
        table[q] = c
        trail.append(p)
        trail.append(q)

    def scan(c, w, queue):
        L = len(w)
        f = c
        i = 0
        while i < L:
            nxt = table[f * ncols + w[i]]
            if nxt < 0:
                break
            f = nxt
            i += 1
        if i == L:
            return f == c
        b = c
        j = L - 1
        while j > i:
            nxt = table[b * ncols + (w[j] ^ 1)]
            if nxt < 0:
                break
            b = nxt
            j -= 1
        if j == i:
            x = w[i]
            if table[b * ncols + (x ^ 1)] >= 0:
                return False
            assign(f, x, b)
            queue.append((f, x))
        return True

    def deduce(queue):
        while queue:
            c, x = queue.pop()
            for w in conj[x]:
                if not scan(c, w, queue):
                    return False
            d = table[c * ncols + x]
            for w in conj[x ^ 1]:
                if not scan(d, w, queue):
                    return False
        return True

    def undo(mark):
        while len(trail) > mark:
            table[trail.pop()] = -1

    def search(k, start):
        state["nodes"] += 1
        if max_nodes and state["nodes"] > max_nodes:
            state["status"] = STATUS_NODES
            return True
        if deadline is not None and state["nodes"] % 256 == 0 and time.monotonic() > deadline:
            state["status"] = STATUS_TIMEOUT
            return True
        pos = start
        end = k * ncols
        while pos < end and table[pos] >= 0:
            pos += 1
        if pos == end:
            if k >= 2:
                results.append(tuple(table[:end]))
                return first_only
            return False
        c, x = divmod(pos, ncols)
        inv = x ^ 1
        for d in range(k):
            if table[d * ncols + inv] < 0:
                mark = len(trail)
                assign(c, x, d)
                if deduce([(c, x)]) and search(k, pos + 1):
                    return True
                undo(mark)
        if k < n:
            mark = len(trail)
            assign(c, x, k)
            if deduce([(c, x)]) and search(k + 1, pos + 1):
                return True
            undo(mark)
        return False

    if n >= 1 and ncols > 0:
        search(1, 0)
    return results, state["nodes"], state["status"]


def lcp_array(codes, sa):
    """Kasai: ``lcp[i]`` = longest common prefix of suffixes ``sa[i-1]`` and ``sa[i]``."""
    s = list(codes)
    sa = list(sa)
    n = len(s)
    rank = [0] * n
    for i, p in enumerate(sa):
        rank[p] = i
    lcp = [0] * n
    h = 0
    for p in range(n):
        r = rank[p]
        if r == 0:
            h = 0
            continue
        q = sa[r - 1]
        while p + h < n and q + h < n and s[p + h] == s[q + h]:
            h += 1
        lcp[r] = h
        if h:
            h -= 1
    return lcp


def piece_scan(sa, lcp, owner, offset, length, period, nwords):
    """Longest piece per cyclic word.

    ``owner[p]`` is the cyclic word whose first copy contains text position
    ``p`` (or -1), ``offset[p]`` the rotation it starts.  Two suffixes from
    the same word whose offsets agree modulo its period read the same element
    from different positions; they contribute ``length - 1``.  Otherwise the
    contribution is the common prefix capped at both lengths.

    Returns ``(best, witness)``: per word the longest piece and a pair of
    text positions realising it (``(-1, -1)`` when there is none).
    """
    # klcp[k]: common prefix of kept suffixes k-1 and k (range minimum of lcp)
    keep = []
    klcp = []
    run = 1 << 62
    for i, p in enumerate(sa):
        if i:
            run = min(run, lcp[i])
        if owner[p] >= 0:
            keep.append(p)
            klcp.append(run)
            run = 1 << 62
    best = [0] * nwords
    wit_a = [-1] * nwords
    wit_b = [-1] * nwords
    m = len(keep)
    for a in range(m):
        pi = keep[a]
        wi = owner[pi]
        Li = length[wi]
        per = period[wi]
        oi = offset[pi]
        for step in (-1, 1):
            run = 1 << 62
            b = a + step
            while 0 <= b < m:
                run = min(run, klcp[b + 1] if step < 0 else klcp[b])
                if min(run, Li) <= best[wi]:
                    break
                pj = keep[b]
                wj = owner[pj]
                if wj == wi and (oi - offset[pj]) % per == 0:
                    cand = Li - 1
                else:
                    cand = min(run, Li, length[wj])
                if cand > best[wi]:
                    best[wi] = cand
                    wit_a[wi] = pi
                    wit_b[wi] = pj
                b += step
    return best, list(zip(wit_a, wit_b))
