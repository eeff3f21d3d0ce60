# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled float versions of the hot loops in ``_kernels_py``."""

from libc.math cimport pow, fabs
from libc.stdlib cimport malloc, free


def sign_max_gram(G):
    cdef Py_ssize_t t = len(G)
    if t == 0:
        return 0.0, ()
    if t > 62:
        raise ValueError("too many vectors for sign enumeration")
    cdef double *g = <double *> malloc(t * t * sizeof(double))
    cdef double *r = <double *> malloc(t * sizeof(double))
    cdef int *eps = <int *> malloc(t * sizeof(int))
    cdef int *best_eps = <int *> malloc(t * sizeof(int))
    cdef Py_ssize_t i, j
    cdef long long step, last
    cdef double value, best
    cdef int e
    try:
        for i in range(t):
            row = G[i]
            for j in range(t):
                g[i * t + j] = row[j]
        for i in range(t):
            eps[i] = 1
            best_eps[i] = 1
            r[i] = 0.0
            for j in range(t):
                r[i] += g[i * t + j]
        value = 0.0
        for i in range(t):
            value += r[i]
        best = value
        last = (<long long> 1) << (t - 1)
        for step in range(1, last):
            j = 0
            while not (step >> j) & 1:
                j += 1
            j += 1
            e = eps[j]
            value = value - 4.0 * e * (r[j] - g[j * t + j] * e)
            for i in range(t):
                r[i] = r[i] - 2.0 * e * g[i * t + j]
            eps[j] = -e
            if value > best:
                best = value
                for i in range(t):
                    best_eps[i] = eps[i]
        return best, tuple(best_eps[i] for i in range(t))
    finally:
        free(g)
        free(r)
        free(eps)
        free(best_eps)


cdef void _masses(long *pos, double *vals, Py_ssize_t n, Py_ssize_t i, double *out, double *heap):
    # out[e - i] = vals[i] + sum of the largest pos[i]-1 values in vals[i+1..e]
    cdef Py_ssize_t keep = pos[i] - 1
    cdef Py_ssize_t size = 0, e, k, c, child
    cdef double total = 0.0, v, tmp
    out[0] = vals[i]
    for e in range(i + 1, n):
        v = vals[e]
        if keep > 0:
            if size < keep:
                # sift up into a min-heap
                k = size
                heap[k] = v
                size += 1
                while k > 0 and heap[(k - 1) // 2] > heap[k]:
                    tmp = heap[k]
                    heap[k] = heap[(k - 1) // 2]
                    heap[(k - 1) // 2] = tmp
                    k = (k - 1) // 2
                total += v
            elif v > heap[0]:
                total += v - heap[0]
                heap[0] = v
                k = 0
                while True:
                    child = 2 * k + 1
                    if child >= size:
                        break
                    if child + 1 < size and heap[child + 1] < heap[child]:
                        child += 1
                    if heap[child] < heap[k]:
                        tmp = heap[k]
                        heap[k] = heap[child]
                        heap[child] = tmp
                        k = child
                    else:
                        break
        out[e - i] = vals[i] + total


def hxi_s1(pos, vals, p):
    cdef Py_ssize_t n = len(vals)
    if n == 0:
        return 0.0
    cdef long *cpos = <long *> malloc(n * sizeof(long))
    cdef double *cv = <double *> malloc(n * sizeof(double))
    cdef double *m = <double *> malloc(n * sizeof(double))
    cdef double *heap = <double *> malloc(n * sizeof(double))
    cdef double *V = <double *> malloc((n + 1) * sizeof(double))
    cdef Py_ssize_t i, off
    cdef double best, cand, cp
    cdef bint sup = p is None
    try:
        for i in range(n):
            cpos[i] = pos[i]
            cv[i] = fabs(vals[i])
        if sup:
            best = 0.0
            for i in range(n):
                _masses(cpos, cv, n, i, m, heap)
                for off in range(n - i):
                    if m[off] > best:
                        best = m[off]
            return best
        cp = p
        V[n] = 0.0
        for i in range(n - 1, -1, -1):
            _masses(cpos, cv, n, i, m, heap)
            best = V[i + 1]
            for off in range(n - i):
                cand = pow(m[off], cp) + V[i + off + 1]
                if cand > best:
                    best = cand
            V[i] = best
        return V[0]
    finally:
        free(cpos)
        free(cv)
        free(m)
        free(heap)
        free(V)


def tsirelson_s1(pos, vals, theta):
    cdef Py_ssize_t n = len(vals)
    if n == 0:
        return 0.0
    cdef double th = theta
    cdef long *cpos = <long *> malloc(n * sizeof(long))
    cdef double *cv = <double *> malloc(n * sizeof(double))
    # N[i*n+j]; D[(i*n+j)*(n+1)+k]
    cdef double *N = <double *> malloc(n * n * sizeof(double))
    cdef double *D = <double *> malloc(n * n * (n + 1) * sizeof(double))
    cdef Py_ssize_t length, i, j, s, e, k, kk, w
    cdef double best, inner, cand, top
    cdef bint have
    try:
        for i in range(n):
            cpos[i] = pos[i]
            cv[i] = fabs(vals[i])
        for length in range(1, n + 1):
            for i in range(0, n - length + 1):
                j = i + length - 1
                best = 0.0
                for w in range(i, j + 1):
                    if cv[w] > best:
                        best = cv[w]
                have = False
                inner = 0.0
                for s in range(i, j):
                    k = cpos[s]
                    if k > j - s + 1:
                        k = j - s + 1
                    if k < 2:
                        continue
                    for e in range(s, j):
                        kk = k - 1
                        if kk > j - e:
                            kk = j - e
                        cand = N[s * n + e] + D[((e + 1) * n + j) * (n + 1) + kk]
                        if not have or cand > inner:
                            inner = cand
                            have = True
                if have and th * inner > best:
                    best = th * inner
                N[i * n + j] = best
                D[(i * n + j) * (n + 1) + 1] = best
                for k in range(2, length + 1):
                    top = D[(i * n + j) * (n + 1) + k - 1]
                    for e in range(i, j):
                        kk = k - 1
                        if kk > j - e:
                            kk = j - e
                        cand = N[i * n + e] + D[((e + 1) * n + j) * (n + 1) + kk]
                        if cand > top:
                            top = cand
                    D[(i * n + j) * (n + 1) + k] = top
        return N[n - 1]
    finally:
        free(cpos)
        free(cv)
        free(N)
        free(D)
