# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels (int64 fast path).

Same algorithms and pivot rules as ``_pycore``. ``snf`` raises
``OverflowError`` as soon as any intermediate leaves the int64 range; the
caller then reruns the big-integer fallback.
"""

from libc.stdlib cimport malloc, free
from libc.string cimport memset


cdef extern from *:
    """
    static inline int tp_mul_ovf(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int tp_add_ovf(long long a, long long b, long long *r) {
        return __builtin_add_overflow(a, b, r);
    }
    """
    bint tp_mul_ovf(long long a, long long b, long long *r) nogil
    bint tp_add_ovf(long long a, long long b, long long *r) nogil


cdef inline long long _abs(long long x) noexcept nogil:
    return -x if x < 0 else x


cdef inline long long _floordiv(long long a, long long b) noexcept nogil:
    cdef long long q = a // b
    if (a % b != 0) and ((a < 0) != (b < 0)):
        q -= 1
    return q


cdef inline int _nearest(long long a, long long p, long long *q) noexcept nogil:
    # quotient rounded to nearest (ties upward); p > 0; returns 1 on overflow
    cdef long long two_a, num, den
    if tp_add_ovf(a, a, &two_a) or tp_add_ovf(two_a, p, &num) or tp_add_ovf(p, p, &den):
        return 1
    q[0] = _floordiv(num, den)
    return 0


cdef inline long long _pymod(long long a, long long b) noexcept nogil:
    cdef long long r = a % b
    if r != 0 and ((r < 0) != (b < 0)):
        r += b
    return r


cdef int _add_row(long long *A, long long *U, int m, int n,
                  int dst, int src, long long q) noexcept nogil:
    # row[dst] += q * row[src]; returns 1 on overflow
    cdef int k
    cdef long long t
    for k in range(n):
        if A[src * n + k] != 0:
            if tp_mul_ovf(q, A[src * n + k], &t):
                return 1
            if tp_add_ovf(A[dst * n + k], t, &A[dst * n + k]):
                return 1
    for k in range(m):
        if U[src * m + k] != 0:
            if tp_mul_ovf(q, U[src * m + k], &t):
                return 1
            if tp_add_ovf(U[dst * m + k], t, &U[dst * m + k]):
                return 1
    return 0


cdef int _add_col(long long *A, long long *V, int m, int n,
                  int dst, int src, long long q) noexcept nogil:
    cdef int k
    cdef long long t
    for k in range(m):
        if A[k * n + src] != 0:
            if tp_mul_ovf(q, A[k * n + src], &t):
                return 1
            if tp_add_ovf(A[k * n + dst], t, &A[k * n + dst]):
                return 1
    for k in range(n):
        if V[k * n + src] != 0:
            if tp_mul_ovf(q, V[k * n + src], &t):
                return 1
            if tp_add_ovf(V[k * n + dst], t, &V[k * n + dst]):
                return 1
    return 0


cdef void _swap_rows(long long *A, long long *U, int m, int n, int i, int j) noexcept nogil:
    cdef int k
    cdef long long t
    if i == j:
        return
    for k in range(n):
        t = A[i * n + k]; A[i * n + k] = A[j * n + k]; A[j * n + k] = t
    for k in range(m):
        t = U[i * m + k]; U[i * m + k] = U[j * m + k]; U[j * m + k] = t


cdef void _swap_cols(long long *A, long long *V, int m, int n, int i, int j) noexcept nogil:
    cdef int k
    cdef long long t
    if i == j:
        return
    for k in range(m):
        t = A[k * n + i]; A[k * n + i] = A[k * n + j]; A[k * n + j] = t
    for k in range(n):
        t = V[k * n + i]; V[k * n + i] = V[k * n + j]; V[k * n + j] = t


cdef int _negate_row(long long *A, long long *U, int m, int n, int i) noexcept nogil:
    cdef int k
    cdef long long LIM = 0x7FFFFFFFFFFFFFFF
    for k in range(n):
        if A[i * n + k] == -LIM - 1:
            return 1
        A[i * n + k] = -A[i * n + k]
    for k in range(m):
        if U[i * m + k] == -LIM - 1:
            return 1
        U[i * m + k] = -U[i * m + k]
    return 0


cdef int _snf(long long *A, long long *U, long long *V, int m, int n) noexcept nogil:
    cdef int t = 0, i, j, bi, bj, bad, dirty
    cdef long long p, q, x, bv, LIM = 0x7FFFFFFFFFFFFFFF
    cdef int r = m if m < n else n
    while t < r:
        bv = 0
        bi = -1
        bj = -1
        for i in range(t, m):
            for j in range(t, n):
                x = A[i * n + j]
                if x != 0:
                    if x == -LIM - 1:
                        return 1
                    if bi < 0 or _abs(x) < bv:
                        bv = _abs(x); bi = i; bj = j
                        if bv == 1:
                            break
            if bi >= 0 and bv == 1:
                break
        if bi < 0:
            break
        _swap_rows(A, U, m, n, t, bi)
        _swap_cols(A, V, m, n, t, bj)
        while True:
            if A[t * n + t] < 0:
                if _negate_row(A, U, m, n, t):
                    return 1
            p = A[t * n + t]
            dirty = 0
            for i in range(t + 1, m):
                if A[i * n + t] != 0:
                    if _nearest(A[i * n + t], p, &q):
                        return 1
                    if _add_row(A, U, m, n, i, t, -q):
                        return 1
                    if A[i * n + t] != 0:
                        dirty = 1
            for j in range(t + 1, n):
                if A[t * n + j] != 0:
                    if _nearest(A[t * n + j], p, &q):
                        return 1
                    if _add_col(A, V, m, n, j, t, -q):
                        return 1
                    if A[t * n + j] != 0:
                        dirty = 1
            if dirty:
                bi = t; bj = t; bv = _abs(p)
                for i in range(t + 1, m):
                    x = A[i * n + t]
                    if x != 0 and _abs(x) < bv:
                        bi = i; bj = t; bv = _abs(x)
                for j in range(t + 1, n):
                    x = A[t * n + j]
                    if x != 0 and _abs(x) < bv:
                        bi = t; bj = j; bv = _abs(x)
                _swap_rows(A, U, m, n, t, bi)
                _swap_cols(A, V, m, n, t, bj)
                continue
            bad = -1
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if _pymod(A[i * n + j], p) != 0:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad < 0:
                break
            if _add_row(A, U, m, n, t, bad, 1):
                return 1
        t += 1
    return 0


def snf(rows, int m, int n):
    """int64 Smith normal form; raises ``OverflowError`` outside that range."""
    cdef long long *A = <long long *> malloc(sizeof(long long) * (m * n + 1))
    cdef long long *U = <long long *> malloc(sizeof(long long) * (m * m + 1))
    cdef long long *V = <long long *> malloc(sizeof(long long) * (n * n + 1))
    cdef int i, j, status
    if A == NULL or U == NULL or V == NULL:
        free(A); free(U); free(V)
        raise MemoryError()
    try:
        for i in range(m):
            row = rows[i]
            for j in range(n):
                A[i * n + j] = row[j]
        memset(U, 0, sizeof(long long) * (m * m + 1))
        memset(V, 0, sizeof(long long) * (n * n + 1))
        for i in range(m):
            U[i * m + i] = 1
        for i in range(n):
            V[i * n + i] = 1
        with nogil:
            status = _snf(A, U, V, m, n)
        if status:
            raise OverflowError("int64 overflow in Smith normal form")
        return ([[U[i * m + j] for j in range(m)] for i in range(m)],
                [[A[i * n + j] for j in range(n)] for i in range(m)],
                [[V[i * n + j] for j in range(n)] for i in range(n)])
    finally:
        free(A); free(U); free(V)


cdef long long _inv_mod(long long a, long long p) noexcept nogil:
    cdef long long result = 1, e = p - 2
    a %= p
    while e > 0:
        if e & 1:
            result = result * a % p
        a = a * a % p
        e >>= 1
    return result


cdef int _rref_mod_p(long long *A, int m, int n, long long p, int *pivots) noexcept nogil:
    cdef int rank = 0, c, i, k, piv
    cdef long long inv, f, t
    for c in range(n):
        piv = -1
        for i in range(rank, m):
            if A[i * n + c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for k in range(n):
                t = A[rank * n + k]; A[rank * n + k] = A[piv * n + k]; A[piv * n + k] = t
        inv = _inv_mod(A[rank * n + c], p)
        for k in range(n):
            A[rank * n + k] = A[rank * n + k] * inv % p
        for i in range(m):
            if i != rank and A[i * n + c] != 0:
                f = A[i * n + c]
                for k in range(n):
                    A[i * n + k] = _pymod(A[i * n + k] - f * A[rank * n + k], p)
        pivots[rank] = c
        rank += 1
    return rank


cdef long long *_load_mod_p(rows, int m, int n, long long p) except NULL:
    cdef long long *A = <long long *> malloc(sizeof(long long) * (m * n + 1))
    cdef int i, j
    if A == NULL:
        raise MemoryError()
    for i in range(m):
        row = rows[i]
        for j in range(n):
            A[i * n + j] = row[j] % p
    return A


def rank_mod_p(rows, int ncols, long long p):
    cdef int m = len(rows), rank
    if p >= 3037000499:
        raise OverflowError("prime too large for the compiled kernel")
    cdef long long *A = _load_mod_p(rows, m, ncols, p)
    cdef int *piv = <int *> malloc(sizeof(int) * (ncols + 1))
    try:
        with nogil:
            rank = _rref_mod_p(A, m, ncols, p, piv)
        return rank
    finally:
        free(A); free(piv)


def nullspace_mod_p(rows, int ncols, long long p):
    cdef int m = len(rows), rank, r, c, free_c
    if p >= 3037000499:
        raise OverflowError("prime too large for the compiled kernel")
    cdef long long *A = _load_mod_p(rows, m, ncols, p)
    cdef int *piv = <int *> malloc(sizeof(int) * (ncols + 1))
    try:
        with nogil:
            rank = _rref_mod_p(A, m, ncols, p, piv)
        pivot_set = set(piv[r] for r in range(rank))
        basis = []
        for free_c in range(ncols):
            if free_c in pivot_set:
                continue
            vec = [0] * ncols
            vec[free_c] = 1
            for r in range(rank):
                c = piv[r]
                vec[c] = (p - A[r * ncols + free_c]) % p
            basis.append(vec)
        return basis
    finally:
        free(A); free(piv)


cdef void _reduce_dense(long long *M, int nrows, int ncols, long long p,
                        int *owner, int *lows) noexcept nogil:
    cdef int j, k, r, low
    cdef long long f
    cdef long long *col
    cdef long long *other
    for r in range(nrows):
        owner[r] = -1
    for j in range(ncols):
        col = M + <long long> j * nrows
        while True:
            low = -1
            for r in range(nrows - 1, -1, -1):
                if col[r] != 0:
                    low = r
                    break
            if low < 0 or owner[low] < 0:
                break
            k = owner[low]
            other = M + <long long> k * nrows
            f = col[low] * _inv_mod(other[low], p) % p
            for r in range(low + 1):
                if other[r] != 0:
                    col[r] = _pymod(col[r] - f * other[r], p)
        lows[j] = low
        if low >= 0:
            owner[low] = j


def reduce_columns_mod_p(columns, int nrows, long long p):
    cdef int ncols = len(columns), j
    if p >= 3037000499:
        raise OverflowError("prime too large for the compiled kernel")
    cdef long long *M = <long long *> malloc(sizeof(long long) * (<long long> nrows * ncols + 1))
    cdef int *owner = <int *> malloc(sizeof(int) * (nrows + 1))
    cdef int *lows = <int *> malloc(sizeof(int) * (ncols + 1))
    if M == NULL or owner == NULL or lows == NULL:
        free(M); free(owner); free(lows)
        raise MemoryError()
    try:
        memset(M, 0, sizeof(long long) * (<long long> nrows * ncols + 1))
        for j in range(ncols):
            for r, c in columns[j]:
                M[<long long> j * nrows + r] = c % p
        with nogil:
            _reduce_dense(M, nrows, ncols, p, owner, lows)
        return [lows[j] for j in range(ncols)]
    finally:
        free(M); free(owner); free(lows)
