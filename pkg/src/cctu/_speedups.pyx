# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: exact twins of cctu._kernels_py on the 64-bit-safe
domain (the dispatcher guarantees inputs stay in range).  Scan orders match
the pure versions bit for bit, so results are backend-independent."""

from libc.stdlib cimport malloc, free
from libc.string cimport memcpy

BACKEND = "compiled"


cdef long long _det_ll(long long* a, int n):
    cdef int i, j, kk, piv_row
    cdef long long sign = 1, prev = 1, pivot, aij
    if n == 0:
        return 1
    for j in range(n - 1):
        if a[j * n + j] == 0:
            piv_row = -1
            for i in range(j + 1, n):
                if a[i * n + j] != 0:
                    piv_row = i
                    break
            if piv_row < 0:
                return 0
            for kk in range(n):
                a[j * n + kk], a[piv_row * n + kk] = a[piv_row * n + kk], a[j * n + kk]
            sign = -sign
        pivot = a[j * n + j]
        for i in range(j + 1, n):
            aij = a[i * n + j]
            for kk in range(j + 1, n):
                a[i * n + kk] = (pivot * a[i * n + kk] - aij * a[j * n + kk]) // prev
            a[i * n + j] = 0
        prev = pivot
    return sign * a[n * n - 1]


def det_bareiss(flat, int n):
    cdef long long* a = <long long*>malloc(n * n * sizeof(long long))
    cdef int i
    cdef long long result
    if a == NULL and n > 0:
        raise MemoryError()
    try:
        for i in range(n * n):
            a[i] = flat[i]
        result = _det_ll(a, n)
    finally:
        free(a)
    return result


cdef bint _next_combination(int* comb, int r, int limit):
    # lexicographic successor of comb[0..r-1] over {0..limit-1}; False at end
    cdef int i = r - 1, j
    while i >= 0 and comb[i] == limit - r + i:
        i -= 1
    if i < 0:
        return False
    comb[i] += 1
    for j in range(i + 1, r):
        comb[j] = comb[j - 1] + 1
    return True


def find_non_unit_subdet(flat, int k, int n, max_order=None):
    cdef int top = k if k < n else n
    cdef int order, i, j, rr, cc
    cdef long long d, v
    cdef long long* mat
    cdef long long* sub
    cdef int* rows
    cdef int* cols
    if max_order is not None and <int>max_order < top:
        top = <int>max_order
    mat = <long long*>malloc(k * n * sizeof(long long))
    if mat == NULL and k * n > 0:
        raise MemoryError()
    try:
        for i in range(k * n):
            mat[i] = flat[i]
        for i in range(k):
            for j in range(n):
                v = mat[i * n + j]
                if v < -1 or v > 1:
                    return ((i,), (j,), int(v))
        if top < 2:
            return None
        sub = <long long*>malloc(top * top * sizeof(long long))
        rows = <int*>malloc(top * sizeof(int))
        cols = <int*>malloc(top * sizeof(int))
        if sub == NULL or rows == NULL or cols == NULL:
            free(sub); free(rows); free(cols)
            raise MemoryError()
        try:
            for order in range(2, top + 1):
                for i in range(order):
                    rows[i] = i
                while True:
                    for j in range(order):
                        cols[j] = j
                    while True:
                        for rr in range(order):
                            for cc in range(order):
                                sub[rr * order + cc] = mat[rows[rr] * n + cols[cc]]
                        d = _det_ll(sub, order)
                        if d < -1 or d > 1:
                            return (
                                tuple(rows[i] for i in range(order)),
                                tuple(cols[j] for j in range(order)),
                                int(d),
                            )
                        if not _next_combination(cols, order, n):
                            break
                    if not _next_combination(rows, order, k):
                        break
        finally:
            free(sub); free(rows); free(cols)
    finally:
        free(mat)
    return None


cdef bint _signing_rec(long long* rows, int t, int n, int i, long long* sums, int* remaining):
    cdef int j, sgn_i
    cdef long long sgn
    cdef bint ok
    if i == t:
        for j in range(n):
            if sums[j] < -1 or sums[j] > 1:
                return False
        return True
    for sgn_i in range(2):
        sgn = 1 if sgn_i == 0 else -1
        ok = True
        for j in range(n):
            sums[j] += sgn * rows[i * n + j]
            if sums[j] > 1 + remaining[(i + 1) * n + j] or -sums[j] > 1 + remaining[(i + 1) * n + j]:
                ok = False
        if ok and _signing_rec(rows, t, n, i + 1, sums, remaining):
            return True
        for j in range(n):
            sums[j] -= sgn * rows[i * n + j]
    return False


def ghouila_houri_ok(flat, int k, int n):
    cdef long long* mat = <long long*>malloc(k * n * sizeof(long long))
    cdef long long* chosen = <long long*>malloc(k * n * sizeof(long long))
    cdef long long* sums = <long long*>malloc(n * sizeof(long long))
    cdef int* remaining = <int*>malloc((k + 1) * n * sizeof(int))
    cdef int* comb = <int*>malloc(k * sizeof(int))
    cdef int size, i, j
    cdef bint ok
    if k * n > 0 and (mat == NULL or chosen == NULL or sums == NULL or remaining == NULL or comb == NULL):
        free(mat); free(chosen); free(sums); free(remaining); free(comb)
        raise MemoryError()
    try:
        for i in range(k * n):
            mat[i] = flat[i]
        for size in range(1, k + 1):
            for i in range(size):
                comb[i] = i
            while True:
                for i in range(size):
                    memcpy(chosen + i * n, mat + comb[i] * n, n * sizeof(long long))
                for j in range(n):
                    remaining[size * n + j] = 0
                for i in range(size - 1, -1, -1):
                    for j in range(n):
                        remaining[i * n + j] = remaining[(i + 1) * n + j] + (
                            1 if chosen[i * n + j] != 0 else 0
                        )
                for j in range(n):
                    sums[j] = 0
                if not _signing_rec(chosen, size, n, 0, sums, remaining):
                    return False
                if not _next_combination(comb, size, k):
                    break
    finally:
        free(mat); free(chosen); free(sums); free(remaining); free(comb)
    return True


cdef struct BoxCtx:
    int k
    int n
    long long* row  # k x n
    long long* b
    long long* gamma
    long long m
    unsigned long long rmask
    long long* lo
    long long* hi
    long long* cvec
    long long* suf_min  # k x (n+1)
    long long* csuf_min  # n+1
    long long* partial  # k
    long long* x
    long long* best_x
    bint minimize
    bint has_best
    long long best_val


cdef bint _box_rec(BoxCtx* ctx, int j, long long cost):
    cdef long long v, res, new_cost
    cdef int i
    cdef bint ok
    if j == ctx.n:
        res = 0
        for i in range(ctx.n):
            res += ctx.gamma[i] * ctx.x[i]
        res %= ctx.m
        if res < 0:
            res += ctx.m
        if (ctx.rmask >> res) & 1:
            if not ctx.has_best or cost < ctx.best_val:
                ctx.best_val = cost
                ctx.has_best = True
                memcpy(ctx.best_x, ctx.x, ctx.n * sizeof(long long))
            return True
        return False
    for v in range(ctx.lo[j], ctx.hi[j] + 1):
        ok = True
        for i in range(ctx.k):
            ctx.partial[i] += ctx.row[i * ctx.n + j] * v
            if ctx.partial[i] + ctx.suf_min[i * (ctx.n + 1) + j + 1] > ctx.b[i]:
                ok = False
        new_cost = cost + ctx.cvec[j] * v
        if ok and ctx.minimize and ctx.has_best and new_cost + ctx.csuf_min[j + 1] >= ctx.best_val:
            ok = False
        if ok:
            ctx.x[j] = v
            if _box_rec(ctx, j + 1, new_cost) and not ctx.minimize:
                for i in range(ctx.k):
                    ctx.partial[i] -= ctx.row[i * ctx.n + j] * v
                return True
        for i in range(ctx.k):
            ctx.partial[i] -= ctx.row[i * ctx.n + j] * v
    return False


def box_search(tflat, int k, int n, b, gamma, long long m, rmask, lo, hi, c, bint minimize):
    cdef BoxCtx ctx
    cdef int i, j
    cdef long long t, contrib, cj
    cdef list out
    if n == 0:
        ok = all(bv >= 0 for bv in b) and (int(rmask) >> 0) & 1
        return (bool(ok), [] if ok else None, 0)
    for j in range(n):
        if lo[j] > hi[j]:
            return (False, None, 0)
    ctx.k = k
    ctx.n = n
    ctx.m = m
    ctx.rmask = <unsigned long long>rmask
    ctx.minimize = minimize
    ctx.has_best = False
    ctx.best_val = 0
    ctx.row = <long long*>malloc(max(k * n, 1) * sizeof(long long))
    ctx.b = <long long*>malloc(max(k, 1) * sizeof(long long))
    ctx.gamma = <long long*>malloc(n * sizeof(long long))
    ctx.lo = <long long*>malloc(n * sizeof(long long))
    ctx.hi = <long long*>malloc(n * sizeof(long long))
    ctx.cvec = <long long*>malloc(n * sizeof(long long))
    ctx.suf_min = <long long*>malloc(max(k, 1) * (n + 1) * sizeof(long long))
    ctx.csuf_min = <long long*>malloc((n + 1) * sizeof(long long))
    ctx.partial = <long long*>malloc(max(k, 1) * sizeof(long long))
    ctx.x = <long long*>malloc(n * sizeof(long long))
    ctx.best_x = <long long*>malloc(n * sizeof(long long))
    try:
        for i in range(k):
            ctx.b[i] = b[i]
            ctx.partial[i] = 0
            for j in range(n):
                ctx.row[i * n + j] = tflat[i * n + j]
        for j in range(n):
            ctx.gamma[j] = gamma[j]
            ctx.lo[j] = lo[j]
            ctx.hi[j] = hi[j]
            ctx.cvec[j] = c[j] if c is not None else 0
        for i in range(k):
            ctx.suf_min[i * (n + 1) + n] = 0
            for j in range(n - 1, -1, -1):
                t = ctx.row[i * n + j]
                contrib = t * ctx.lo[j] if t >= 0 else t * ctx.hi[j]
                ctx.suf_min[i * (n + 1) + j] = ctx.suf_min[i * (n + 1) + j + 1] + contrib
        ctx.csuf_min[n] = 0
        for j in range(n - 1, -1, -1):
            cj = ctx.cvec[j]
            ctx.csuf_min[j] = ctx.csuf_min[j + 1] + (cj * ctx.lo[j] if cj >= 0 else cj * ctx.hi[j])
        _box_rec(&ctx, 0, 0)
        if not ctx.has_best:
            return (False, None, 0)
        out = [ctx.best_x[j] for j in range(n)]
        return (True, out, int(ctx.best_val))
    finally:
        free(ctx.row); free(ctx.b); free(ctx.gamma); free(ctx.lo); free(ctx.hi)
        free(ctx.cvec); free(ctx.suf_min); free(ctx.csuf_min); free(ctx.partial)
        free(ctx.x); free(ctx.best_x)
