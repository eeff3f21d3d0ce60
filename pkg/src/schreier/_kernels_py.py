"""Reference implementations of the hot loops.

These work for any ordered field (``Fraction`` or ``float``) and double as the
fallback when the compiled module is unavailable.  The compiled versions in
``_kernels.pyx`` follow the same algorithms on C doubles.
"""

from __future__ import annotations

import heapq


def sign_max_gram(G):
    """Maximize ``eps^T G eps`` over sign vectors with ``eps[0] = +1``.

    Walks the 2^(t-1) patterns in Gray-code order, updating ``r = G eps`` in
    O(t) per step.  Returns ``(value, signs)``.
    """
    t = len(G)
    if t == 0:
        return 0, ()
    eps = [1] * t
    r = [sum(G[i][j] for j in range(t)) for i in range(t)]
    value = sum(r)
    best, best_eps = value, tuple(eps)
    for step in range(1, 1 << (t - 1)):
        # flip the coordinate given by the lowest set bit, skipping eps[0]
        j = (step & -step).bit_length()
        e = eps[j]
        value = value - 4 * e * (r[j] - G[j][j] * e)
        for i in range(t):
            r[i] = r[i] - 2 * e * G[i][j]
        eps[j] = -e
        if value > best:
            best, best_eps = value, tuple(eps)
    return best, best_eps


def _top_masses(pos, vals, i):
    """``mass(i, e)`` for e = i..n-1: vals[i] plus the largest pos[i]-1 of vals[i+1..e]."""
    keep = pos[i] - 1
    heap: list = []
    total = vals[i] - vals[i]
    out = [vals[i]]
    for e in range(i + 1, len(vals)):
        v = vals[e]
        if keep > 0:
            if len(heap) < keep:
                heapq.heappush(heap, v)
                total += v
            elif v > heap[0]:
                total += v - heapq.heapreplace(heap, v)
        out.append(vals[i] + total)
    return out


def hxi_s1(pos, vals, p):
    """Order-1 H_xi norm over l_p (``p`` a number) or c_0 (``p is None``).

    ``pos`` are the support indices in increasing order and ``vals`` the
    absolute values there.  Blocks are sets with at most ``min`` elements; a
    block starting at point i may only use points before the next block starts,
    so the best block ending before e keeps the largest values.
    Returns the p-th power of the norm (the norm itself for c_0).
    """
    n = len(vals)
    if n == 0:
        return 0
    if p is None:
        return max(max(_top_masses(pos, vals, i)) for i in range(n))
    zero = vals[0] - vals[0]
    V = [zero] * (n + 1)
    for i in range(n - 1, -1, -1):
        best = V[i + 1]
        for off, m in enumerate(_top_masses(pos, vals, i)):
            cand = m**p + V[i + off + 1]
            if cand > best:
                best = cand
        V[i] = best
    return V[0]


def tsirelson_s1(pos, vals, theta):
    """Norm of ``sum vals[i] e_{pos[i]}`` in the order-1 Tsirelson space.

    ``N[i][j]`` is the norm restricted to points i..j.  An admissible family of
    intervals can always be taken to start at support points, to cover every
    point from its first start onwards, and to have at least two members; with
    first start ``s`` at most ``pos[s]`` members are allowed.  ``D[a][j][k]``
    is the best sum over partitions of points a..j into at most k groups.
    """
    n = len(vals)
    if n == 0:
        return 0
    vals = [abs(v) for v in vals]
    N = [[None] * n for _ in range(n)]
    # D[a][j] is a list indexed by k (number of groups allowed), k >= 1
    D = [[None] * n for _ in range(n)]
    for length in range(1, n + 1):
        for i in range(0, n - length + 1):
            j = i + length - 1
            best = max(vals[i : j + 1])
            inner = None
            for s in range(i, j):
                k = min(pos[s], j - s + 1)
                if k < 2:
                    continue
                for e in range(s, j):
                    rest = D[e + 1][j]
                    cand = N[s][e] + rest[min(k - 1, len(rest) - 1)]
                    if inner is None or cand > inner:
                        inner = cand
            if inner is not None and theta * inner > best:
                best = theta * inner
            N[i][j] = best
            # partitions of i..j into at most k groups, k = 1..length
            row = [None, best]
            for k in range(2, length + 1):
                top = row[k - 1]
                for e in range(i, j):
                    cand = N[i][e] + D[e + 1][j][min(k - 1, j - e)]
                    if cand > top:
                        top = cand
                row.append(top)
            D[i][j] = row
    return N[0][n - 1]
