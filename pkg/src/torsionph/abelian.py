"""Finitely generated abelian groups and exact integer linear algebra.

Groups are kept in invariant-factor form ``Z^r + Z/d_1 + ... + Z/d_m`` with
``d_1 | d_2 | ... | d_m`` and every ``d_i >= 2``, so isomorphism is plain
equality. The central decision procedure is :func:`is_subquotient`: does some
subgroup of ``A`` surject onto ``B``?

>>> G = cokernel(IntMatrix([[2, 0], [0, 4]]))
>>> G
FgAbelianGroup(rank=0, torsion=(2, 4))
>>> is_subquotient(FgAbelianGroup(torsion=(4,)), G)
True
>>> is_subquotient(FgAbelianGroup(torsion=(4,)), FgAbelianGroup(torsion=(2, 2)))
False
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import prod

from . import kernels
from .errors import FactorizationLimit, OracleBound

PRIME_BOUND = 10**6
ORACLE_BOUND = 64


class IntMatrix:
    """Dense immutable matrix of Python integers.

    The shape is stored explicitly so that ``0 x n`` and ``n x 0`` matrices
    keep their dimensions.
    """

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data=(), rows=None, cols=None):
        data = tuple(tuple(int(x) for x in row) for row in data)
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError(f"ragged or mis-shaped matrix data for {rows}x{cols}")
        self.rows = rows
        self.cols = cols
        self._data = data

    @classmethod
    def zeros(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n):
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, columns, rows):
        columns = list(columns)
        return cls([[c[i] for c in columns] for i in range(rows)], rows, len(columns))

    @property
    def shape(self):
        return (self.rows, self.cols)

    def tolist(self):
        return [list(r) for r in self._data]

    def row(self, i):
        return self._data[i]

    def column(self, j):
        return tuple(r[j] for r in self._data)

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.rows, self.cols, self._data))

    def __repr__(self):
        if not self.rows or not self.cols:
            return f"IntMatrix.zeros({self.rows}, {self.cols})"
        return f"IntMatrix({self.tolist()!r})"

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = other.columns()
        return IntMatrix(
            [[sum(a * b for a, b in zip(r, c)) for c in ocols] for r in self._data],
            self.rows,
            other.cols,
        )

    @property
    def T(self):
        return IntMatrix([self.column(j) for j in range(self.cols)], self.cols, self.rows)

    def hstack(self, other):
        if self.rows != other.rows:
            raise ValueError("row counts differ")
        return IntMatrix(
            [a + b for a, b in zip(self._data, other._data)], self.rows, self.cols + other.cols
        )

    def is_diagonal(self):
        return all(
            x == 0 for i, r in enumerate(self._data) for j, x in enumerate(r) if i != j
        )

    def diagonal(self):
        return [self._data[i][i] for i in range(min(self.rows, self.cols))]

    def det(self):
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k]), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]


def smith_normal_form(M):
    """Return unimodular ``U``, ``V`` and diagonal ``D`` with ``U @ M @ V == D``.

    The diagonal is nonnegative and forms a divisibility chain (zeros last).
    """
    U, D, V = kernels.snf(M.tolist(), M.rows, M.cols)
    return (
        IntMatrix(U, M.rows, M.rows),
        IntMatrix(D, M.rows, M.cols),
        IntMatrix(V, M.cols, M.cols),
    )


def kernel_basis(M):
    """Columns form a Z-basis of the integer kernel ``{x : M x = 0}``."""
    _, D, V = smith_normal_form(M)
    r = sum(1 for d in D.diagonal() if d)
    return IntMatrix(
        [row[r:] for row in V.tolist()], M.cols, M.cols - r
    )


@dataclass(frozen=True)
class FgAbelianGroup:
    """``Z^rank`` plus cyclic torsion factors in invariant-factor form."""

    rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        torsion = tuple(int(d) for d in self.torsion)
        object.__setattr__(self, "torsion", torsion)
        if self.rank < 0:
            raise ValueError("free rank must be nonnegative")
        if any(d < 2 for d in torsion):
            raise ValueError(f"invariant factors must be >= 2, got {torsion}")
        if any(b % a for a, b in zip(torsion, torsion[1:])):
            raise ValueError(f"invariant factors must form a divisibility chain: {torsion}")

    @classmethod
    def from_cyclic(cls, *orders):
        """Direct sum of cyclic groups ``Z/n`` (``n = 0`` meaning ``Z``)."""
        rank = sum(1 for n in orders if n == 0)
        finite = [abs(n) for n in orders if n != 0]
        diag = IntMatrix(
            [[finite[i] if i == j else 0 for j in range(len(finite))] for i in range(len(finite))],
            len(finite),
            len(finite),
        )
        G = cokernel(diag)
        return cls(rank, G.torsion)

    def is_trivial(self):
        return self.rank == 0 and not self.torsion

    def is_finite(self):
        return self.rank == 0

    def order(self):
        if self.rank:
            raise ValueError("infinite group has no finite order")
        return prod(self.torsion)

    def __str__(self):
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        return {"rank": self.rank, "torsion": list(self.torsion)}

    @classmethod
    def from_json(cls, obj):
        return cls(int(obj["rank"]), tuple(int(d) for d in obj["torsion"]))


TRIVIAL = FgAbelianGroup()
Z = FgAbelianGroup(1)


def cokernel(relations):
    """``Z^g`` modulo the column lattice of a ``g``-row relation matrix."""
    _, D, _ = smith_normal_form(relations)
    diag = D.diagonal()
    nonzero = [d for d in diag if d]
    return FgAbelianGroup(relations.rows - len(nonzero), tuple(d for d in nonzero if d > 1))


def direct_sum(G1, G2):
    finite = G1.torsion + G2.torsion
    G = FgAbelianGroup.from_cyclic(*finite) if finite else TRIVIAL
    return FgAbelianGroup(G1.rank + G2.rank, G.torsion)


def is_trivial(G):
    return G.is_trivial()


def _factorize(n, bound=PRIME_BOUND):
    factors = {}
    m = n
    d = 2
    while d * d <= m and d <= bound:
        while m % d == 0:
            factors[d] = factors.get(d, 0) + 1
            m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        # cofactor has no prime factor <= min(bound, sqrt(m))
        if m > bound * bound:
            raise FactorizationLimit(
                f"cannot certify factorization of {n}: cofactor {m} exceeds {bound}^2"
            )
        factors[m] = factors.get(m, 0) + 1
    return factors


@lru_cache(maxsize=4096)
def _primary_items(G, bound):
    view = {}
    for d in G.torsion:
        for p, e in _factorize(d, bound).items():
            view.setdefault(p, []).append(e)
    return tuple((p, tuple(sorted(es, reverse=True))) for p, es in sorted(view.items()))


def primary_view(G, bound=PRIME_BOUND):
    """Map each prime ``p`` to the descending exponents of the p-primary part."""
    return dict(_primary_items(G, bound))


def from_primary_view(view, rank=0):
    length = max((len(es) for es in view.values()), default=0)
    factors = [1] * length
    for p, es in view.items():
        # largest exponents go to the last (largest) invariant factors
        for i, e in enumerate(es):
            factors[length - 1 - i] *= p**e
    return FgAbelianGroup(rank, tuple(factors))


@lru_cache(maxsize=65536)
def is_subquotient(B, A):
    """True iff some subgroup of ``A`` admits a surjection onto ``B``.

    For finitely generated groups this is the same as ``B`` being a quotient
    of ``A``. The free part of ``A`` left over after covering ``B``'s free
    part supplies ``w`` wildcard generators, each able to cover one cyclic
    summand at every prime at once.
    """
    if B.is_trivial():
        return True
    if B.rank > A.rank:
        return False
    w = A.rank - B.rank
    vb, va = primary_view(B), primary_view(A)
    for p, mu in vb.items():
        lam = va.get(p, ())
        for j in range(1, mu[0] + 1):
            need = sum(1 for e in mu if e >= j)
            have = sum(1 for e in lam if e >= j)
            if need > w + have:
                return False
    return True


def _elements(G):
    return list(product(*(range(d) for d in G.torsion)))


def _add(x, y, mods):
    return tuple((a + b) % m for a, b, m in zip(x, y, mods))


def _scale(k, x, mods):
    return tuple((k * a) % m for a, m in zip(x, mods))


def _all_subgroups(elements, mods, zero):
    start = frozenset([zero])
    found = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for S in frontier:
            for g in elements:
                if g in S:
                    continue
                T = _span_add(S, g, mods)
                if T not in found:
                    found.add(T)
                    nxt.append(T)
        frontier = nxt
    return found


def _span_add(S, g, mods):
    out = set(S)
    frontier = list(S)
    while frontier:
        nxt = []
        for x in frontier:
            y = _add(x, g, mods)
            if y not in out:
                out.add(y)
                nxt.append(y)
        frontier = nxt
    return frozenset(out)


def _generating_chain(S, mods, zero):
    """Greedy generators g_1..g_r of S with their growth indices k_i."""
    gens, span = [], frozenset([zero])
    while len(span) < len(S):
        g = next(x for x in sorted(S) if x not in span)
        k, y = 1, g
        while y not in span:
            y = _add(y, g, mods)
            k += 1
        gens.append((g, k))
        span = _span_add(span, g, mods)
    return gens


def oracle_is_subquotient_finite(B, A, bound=ORACLE_BOUND):
    """Brute force: enumerate subgroups ``S`` of ``A`` and homomorphisms ``S -> B``.

    Independent of the counting rule in :func:`is_subquotient`; used only to
    cross-check it on small finite groups.
    """
    if not (A.is_finite() and B.is_finite()):
        raise ValueError("oracle handles finite groups only")
    if A.order() > bound:
        raise OracleBound(f"|A| = {A.order()} exceeds oracle bound {bound}")
    ma, mb = A.torsion, B.torsion
    za, zb = tuple(0 for _ in ma), tuple(0 for _ in mb)
    order_b = B.order()
    b_elems = _elements(B)

    subgroups = sorted(_all_subgroups(_elements(A), ma, za), key=lambda S: (-len(S), sorted(S)))
    for S in subgroups:
        if len(S) % order_b:
            continue
        chain = _generating_chain(S, ma, za)
        if _extend_hom(chain, 0, {za: zb}, order_b, b_elems, ma, mb):
            return True
    return False


def _extend_hom(chain, i, phi, order_b, b_elems, ma, mb):
    if i == len(chain):
        return len(set(phi.values())) == order_b
    image_size = len(set(phi.values()))
    if image_size * prod(k for _, k in chain[i:]) < order_b:
        return False
    g, k = chain[i]
    kg = _scale(k, g, ma)
    target = phi[kg]
    for b in b_elems:
        if _scale(k, b, mb) != target:
            continue
        ext = dict(phi)
        for x, fx in phi.items():
            y, fy = x, fx
            for _ in range(1, k):
                y = _add(y, g, ma)
                fy = _add(fy, b, mb)
                ext[y] = fy
        if _extend_hom(chain, i + 1, ext, order_b, b_elems, ma, mb):
            return True
    return False


def abelian_groups_of_order(n):
    """Every abelian group of order ``n``, one per isomorphism class."""
    factors = _factorize(n) if n > 1 else {}
    per_prime = [
        [[p**e for e in part] for part in _partitions(exp)] for p, exp in factors.items()
    ]
    groups = []
    for combo in product(*per_prime):
        orders = [q for part in combo for q in part]
        groups.append(FgAbelianGroup.from_cyclic(*orders) if orders else TRIVIAL)
    return sorted(set(groups), key=lambda G: G.torsion)


def _partitions(n, largest=None):
    if largest is None:
        largest = n
    if n == 0:
        return [[]]
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            out.append([first] + rest)
    return out
