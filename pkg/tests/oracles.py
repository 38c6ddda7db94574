"""Slow, independent reference implementations used only by the tests."""

from itertools import combinations, permutations, product
from math import gcd


def bareiss_det(m):
    """Integer determinant by fraction-free elimination."""
    a = [row[:] for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def determinantal_divisors(m):
    """Invariant factors d_k = D_k / D_(k-1), D_k = gcd of all k x k minors."""
    rows, cols = len(m), len(m[0]) if m else 0
    ds = [1]
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                g = gcd(g, bareiss_det([[m[i][j] for j in cs] for i in rs]))
                if g == 1:
                    break
            if g == 1:
                break
        ds.append(g)
    out = []
    for k in range(1, len(ds)):
        out.append(ds[k] // ds[k - 1] if ds[k] else 0)
    return out


def xgcd(a, b):
    if b % a == 0:
        return a, 1, 0
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def snf_bezout(m):
    """Smith form by 2x2 Bezout row/column operations always pivoting at (t, t)."""
    a = [row[:] for row in m]
    rows, cols = len(a), len(a[0]) if a else 0
    for t in range(min(rows, cols)):
        pos = next(((i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]), None)
        if pos is None:
            break
        i, j = pos
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            for i in range(t + 1, rows):
                if a[i][t]:
                    g, x, y = xgcd(a[t][t], a[i][t])
                    p, q = a[t][t] // g, a[i][t] // g
                    rt, ri = a[t], a[i]
                    a[t] = [x * u + y * v for u, v in zip(rt, ri)]
                    a[i] = [-q * u + p * v for u, v in zip(rt, ri)]
            for j in range(t + 1, cols):
                if a[t][j]:
                    g, x, y = xgcd(a[t][t], a[t][j])
                    p, q = a[t][t] // g, a[t][j] // g
                    for row in a:
                        u, v = row[t], row[j]
                        row[t], row[j] = x * u + y * v, -q * u + p * v
            if all(a[i][t] == 0 for i in range(t + 1, rows)):
                bad = next((i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % a[t][t]), None)
                if bad is None:
                    break
                a[t] = [u + v for u, v in zip(a[t], a[bad])]
        if a[t][t] < 0:
            a[t] = [-u for u in a[t]]
    return [a[k][k] for k in range(min(rows, cols))]


def transitive_action_counts(generators, relators, n):
    """Number of subgroups of index exactly n, by brute force over S_n.

    Counts homomorphisms to S_n with transitive image and divides by (n-1)!:
    each index-n subgroup corresponds to (n-1)! labelled transitive actions.
    """
    perms = list(permutations(range(n)))
    inv = {p: tuple(sorted(range(n), key=lambda i: p[i])) for p in perms}
    count = 0
    for images in product(perms, repeat=len(generators)):
        act = dict(zip(generators, images))
        ok = True
        for r in relators:
            for start in range(n):
                pt = start
                for x, e in r:
                    pt = act[x][pt] if e == 1 else inv[act[x]][pt]
                if pt != start:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        seen, stack = {0}, [0]
        while stack:
            pt = stack.pop()
            for g in images:
                for q in (g[pt], inv[g][pt]):
                    if q not in seen:
                        seen.add(q)
                        stack.append(q)
        if len(seen) == n:
            count += 1
    fact = 1
    for k in range(2, n):
        fact *= k
    return count // fact


def brute_force_lambda(relators, invert):
    """Max over relators of (longest piece in r) / |r|, pieces read off explicit rotations.

    ``relators`` are lists of letter codes, ``invert`` maps a code to its inverse.
    Two positions spelling the same element (a proper power) count |r| - 1.
    """
    from fractions import Fraction

    elements = []
    for idx, r in enumerate(relators):
        ri = [invert(c) for c in reversed(r)]
        for flip, word in ((0, r), (1, ri)):
            for k in range(len(word)):
                elements.append((idx, flip, k, tuple(word[k:] + word[:k])))
    best = Fraction(0)
    longest = [0] * len(relators)
    for i, (ri_, _, _, e) in enumerate(elements):
        for j, (_, _, _, f) in enumerate(elements):
            if i == j:
                continue
            n = 0
            while n < len(e) and n < len(f) and e[n] == f[n]:
                n += 1
            if e == f:
                n = len(e) - 1
            longest[ri_] = max(longest[ri_], n)
    for idx, r in enumerate(relators):
        best = max(best, Fraction(longest[idx], len(r)))
    return best
