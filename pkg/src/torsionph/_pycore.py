"""Pure-Python kernels.

Reference implementation of the hot loops. ``_core.pyx`` mirrors every
function here with a machine-integer fast path; both must return identical
results on the same input.
"""


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _nearest(a, p):
    # quotient rounded to nearest (ties upward); p > 0
    return (2 * a + p) // (2 * p)


def snf(rows, m, n):
    """Smith normal form of an ``m x n`` integer matrix given as row lists.

    Returns ``(U, D, V)`` as row lists with ``U * A * V == D``.
    The pivot is always the nonzero entry of least absolute value.
    """
    A = [list(r) for r in rows]
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row[dst] += q * row[src]
        a_d, a_s = A[dst], A[src]
        for k in range(n):
            if a_s[k]:
                a_d[k] += q * a_s[k]
        u_d, u_s = U[dst], U[src]
        for k in range(m):
            if u_s[k]:
                u_d[k] += q * u_s[k]

    def negate_row(i):
        A[i] = [-x for x in A[i]]
        U[i] = [-x for x in U[i]]

    def add_col(dst, src, q):
        for row in A:
            if row[src]:
                row[dst] += q * row[src]
        for row in V:
            if row[src]:
                row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])

        while True:
            if A[t][t] < 0:
                negate_row(t)
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -_nearest(A[i][t], p))
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -_nearest(A[t][j], p))
                    if A[t][j]:
                        dirty = True
            if dirty:
                bi, bj, bv = t, t, abs(p)
                for i in range(t + 1, m):
                    if A[i][t] and abs(A[i][t]) < bv:
                        bi, bj, bv = i, t, abs(A[i][t])
                for j in range(t + 1, n):
                    if A[t][j] and abs(A[t][j]) < bv:
                        bi, bj, bv = t, j, abs(A[t][j])
                swap_rows(t, bi)
                swap_cols(t, bj)
                continue
            bad = -1
            for i in range(t + 1, m):
                row = A[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad < 0:
                break
            add_row(t, bad, 1)

        t += 1
    return U, A, V


def rank_mod_p(rows, ncols, p):
    A = [[x % p for x in r] for r in rows]
    rank = 0
    for c in range(ncols):
        piv = None
        for i in range(rank, len(A)):
            if A[i][c]:
                piv = i
                break
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][c], p - 2, p)
        A[rank] = [(x * inv) % p for x in A[rank]]
        pr = A[rank]
        for i in range(len(A)):
            if i != rank and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], pr)]
        rank += 1
    return rank


def nullspace_mod_p(rows, ncols, p):
    """Basis (list of column vectors) of the right kernel mod ``p``."""
    A = [[x % p for x in r] for r in rows]
    pivots = []
    rank = 0
    for c in range(ncols):
        piv = None
        for i in range(rank, len(A)):
            if A[i][c]:
                piv = i
                break
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][c], p - 2, p)
        A[rank] = [(x * inv) % p for x in A[rank]]
        pr = A[rank]
        for i in range(len(A)):
            if i != rank and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], pr)]
        pivots.append(c)
        rank += 1
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [0] * ncols
        vec[free] = 1
        for r, c in enumerate(pivots):
            vec[c] = (-A[r][free]) % p
        basis.append(vec)
    return basis


def reduce_columns_mod_p(columns, nrows, p):
    """Standard left-to-right persistence reduction over GF(p).

    ``columns`` is a list of sparse columns, each a list of ``(row, coeff)``.
    Returns the pivot ("low") row of every reduced column, ``-1`` if the
    column reduced to zero.
    """
    cols = []
    for col in columns:
        d = {}
        for r, c in col:
            c %= p
            if c:
                d[r] = c
        cols.append(d)
    owner = {}
    lows = []
    for j, col in enumerate(cols):
        while col:
            low = max(col)
            k = owner.get(low)
            if k is None:
                break
            other = cols[k]
            f = col[low] * pow(other[low], p - 2, p) % p
            for r, c in other.items():
                v = (col.get(r, 0) - f * c) % p
                if v:
                    col[r] = v
                else:
                    col.pop(r, None)
        if col:
            low = max(col)
            owner[low] = j
            lows.append(low)
        else:
            lows.append(-1)
    return lows
