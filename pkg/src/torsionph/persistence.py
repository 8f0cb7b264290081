"""Persistent homology groups of filtered complexes.

``persistent_group(K, k, u, v, coeffs)`` is the image of
``H_k(K_u) -> H_k(K_v)`` for ``u <= v``. Over the integers it is an
:class:`~torsionph.abelian.FgAbelianGroup`; over a field it is a dimension.

The integral image is computed as ``Z^m / R`` where the columns of ``Z``
form a basis of the k-cycles of ``K_u`` and ``R = {x : Z x in B_v}`` is read
off the kernel of the block matrix ``[Z | -boundary_{k+1}(K_v)]``.
"""

import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import kernels
from .abelian import TRIVIAL, FgAbelianGroup, IntMatrix, cokernel, kernel_basis
from .complex import INF, cell_index, critical_values, format_rational, leq
from .errors import DimensionMismatch, MultiDimUnsupported, TorsionPHError


@dataclass(frozen=True)
class Coefficients:
    kind: str  # "z", "q" or "zp"
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("z", "q", "zp"):
            raise ValueError(f"unknown coefficient kind {self.kind!r}")
        if self.kind == "zp" and not _is_prime(self.p):
            raise ValueError(f"PrimeField needs a prime, got {self.p}")

    @property
    def is_field(self):
        return self.kind != "z"

    def __str__(self):
        return f"zp:{self.p}" if self.kind == "zp" else self.kind

    @classmethod
    def parse(cls, text):
        text = text.strip().lower()
        if text in ("z", "q"):
            return cls(text)
        if text.startswith("zp:"):
            try:
                p = int(text[3:])
            except ValueError:
                raise ValueError(f"bad prime in {text!r}") from None
            return cls("zp", p)
        raise ValueError(f"coefficients must be z, q or zp:P, got {text!r}")


INTEGERS = Coefficients("z")
RATIONALS = Coefficients("q")


def PrimeField(p):
    return Coefficients("zp", p)


def _is_prime(p):
    if not isinstance(p, int) or p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def group_to_json(value):
    if isinstance(value, FgAbelianGroup):
        return value.to_json()
    return {"rank": value, "torsion": []}


def group_str(value):
    if isinstance(value, FgAbelianGroup):
        return str(value)
    return f"dim {value}"


# --- chain complexes ----------------------------------------------------------


class _Chains:
    """Boundary matrices of a complex restricted to sublevel sets."""

    def __init__(self, K):
        self.K = K
        self.by_dim = {}
        for i, s in enumerate(K.simplices):
            self.by_dim.setdefault(s.dim, []).append(i)

    def cells(self, members, k):
        # k-simplices of a sublevel, in complex order
        return [i for i in self.by_dim.get(k, ()) if i in members]

    def boundary(self, rows, cols):
        """Signed boundary matrix with ``rows`` (k-1)-simplices, ``cols`` k-simplices."""
        K = self.K
        pos = {K.simplices[r].vertices: a for a, r in enumerate(rows)}
        M = [[0] * len(cols) for _ in rows]
        for b, c in enumerate(cols):
            vs = K.simplices[c].vertices
            if len(vs) == 1:
                continue
            for i in range(len(vs)):
                face = vs[:i] + vs[i + 1:]
                M[pos[face]][b] = -1 if i % 2 else 1
        return M


def _members(K, u):
    return frozenset(i for i, s in enumerate(K.simplices) if leq(s.grade, u))


class _IntegerImage:
    def __init__(self, K, k):
        self.chains = _Chains(K)
        self.k = k
        self._cycles = {}
        self._bounds = {}

    def cycles(self, mu):
        got = self._cycles.get(mu)
        if got is None:
            ch, k = self.chains, self.k
            ck = ch.cells(mu, k)
            ckm1 = ch.cells(mu, k - 1)
            d = IntMatrix(ch.boundary(ckm1, ck), len(ckm1), len(ck))
            got = (ck, kernel_basis(d))
            self._cycles[mu] = got
        return got

    def boundaries(self, mv):
        got = self._bounds.get(mv)
        if got is None:
            ch, k = self.chains, self.k
            ck = ch.cells(mv, k)
            ckp1 = ch.cells(mv, k + 1)
            got = (ck, ch.boundary(ck, ckp1), len(ckp1))
            self._bounds[mv] = got
        return got

    def image(self, mu, mv):
        ck_u, Z = self.cycles(mu)
        m = Z.cols
        if m == 0:
            return TRIVIAL
        ck_v, B, nb = self.boundaries(mv)
        pos = {s: a for a, s in enumerate(ck_v)}
        block = [[0] * (m + nb) for _ in ck_v]
        for a, s in enumerate(ck_u):
            row = block[pos[s]]
            zr = Z.row(a)
            for j in range(m):
                row[j] = zr[j]
        for a in range(len(ck_v)):
            row, br = block[a], B[a]
            for j in range(nb):
                row[m + j] = -br[j]
        ker = kernel_basis(IntMatrix(block, len(ck_v), m + nb))
        R = IntMatrix([ker.row(i) for i in range(m)], m, ker.cols)
        return cokernel(R)


class _FieldImage:
    def __init__(self, K, k, coeffs):
        self.chains = _Chains(K)
        self.k = k
        self.coeffs = coeffs
        self._cycles = {}
        self._brank = {}

    def cycles(self, mu):
        got = self._cycles.get(mu)
        if got is None:
            ch, k = self.chains, self.k
            ck = ch.cells(mu, k)
            ckm1 = ch.cells(mu, k - 1)
            got = (ck, field_nullspace(ch.boundary(ckm1, ck), len(ck), self.coeffs))
            self._cycles[mu] = got
        return got

    def image(self, mu, mv):
        ck_u, Z = self.cycles(mu)
        if not Z:
            return 0
        ch, k = self.chains, self.k
        ck_v = ch.cells(mv, k)
        B = ch.boundary(ck_v, ch.cells(mv, k + 1))
        nb = len(B[0]) if B else 0
        brank = self._brank.get(mv)
        if brank is None:
            brank = self._brank[mv] = field_rank(B, nb, self.coeffs)
        pos = {s: a for a, s in enumerate(ck_v)}
        block = [list(r) + [0] * len(Z) for r in B]
        for j, z in enumerate(Z):
            for a, s in enumerate(ck_u):
                block[pos[s]][nb + j] = z[a]
        return field_rank(block, nb + len(Z), self.coeffs) - brank


def field_rank(rows, ncols, coeffs):
    if not rows or not ncols:
        return 0
    if coeffs.kind == "zp":
        return kernels.rank_mod_p(rows, ncols, coeffs.p)
    return _rational_rank(rows, ncols)


def field_nullspace(rows, ncols, coeffs):
    if coeffs.kind == "zp":
        return kernels.nullspace_mod_p(rows, ncols, coeffs.p)
    return _rational_nullspace(rows, ncols)


def _rational_rref(rows, ncols):
    A = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        lead = A[rank][c]
        A[rank] = [x / lead for x in A[rank]]
        for i in range(len(A)):
            if i != rank and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[rank])]
        pivots.append(c)
        rank += 1
    return A, pivots


def _rational_rank(rows, ncols):
    return len(_rational_rref(rows, ncols)[1])


def _rational_nullspace(rows, ncols):
    A, pivots = _rational_rref(rows, ncols)
    pset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pset:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for r, c in enumerate(pivots):
            vec[c] = -A[r][free]
        basis.append(vec)
    return basis


def _engine(K, k, coeffs):
    return _IntegerImage(K, k) if coeffs.kind == "z" else _FieldImage(K, k, coeffs)


def _zero(coeffs):
    return TRIVIAL if coeffs.kind == "z" else 0


def persistent_group(K, k, u, v, coeffs=INTEGERS):
    """Image of ``H_k(K_u) -> H_k(K_v)``; requires ``u <= v`` coordinatewise."""
    u, v = tuple(Fraction(x) for x in u), tuple(Fraction(x) for x in v)
    if len(u) != K.n or len(v) != K.n:
        raise DimensionMismatch(f"grades must have {K.n} coordinates")
    if not leq(u, v):
        raise TorsionPHError("persistent_group needs u <= v")
    if k < 0 or k > K.dimension():
        return _zero(coeffs)
    return _engine(K, k, coeffs).image(_members(K, u), _members(K, v))


def persistent_betti(K, k, u, v, field=RATIONALS):
    if not field.is_field:
        raise TorsionPHError("persistent Betti numbers need field coefficients")
    return persistent_group(K, k, u, v, field)


# --- modules on the critical grid ---------------------------------------------


def _workers(workers):
    if workers is not None:
        return workers
    env = os.environ.get("TP_THREADS")
    if env:
        return int(env)
    return os.cpu_count() or 1


def _corner(axis, idx):
    if idx == 0:
        return (axis[0] - 1) if axis else Fraction(-1)
    return axis[idx - 1]


class PersistenceModule:
    """Group values on every pair of grid cells ``I <= J``.

    Along each axis with critical values ``c_0 < ... < c_{N-1}``, cell 0 is
    ``(-inf, c_0)`` and cell ``i >= 1`` is ``[c_{i-1}, c_i)`` (the last one
    unbounded). Sublevel complexes are constant on cells, so the group at
    ``(u, v)`` is ``values[(cell(u), cell(v))]``.
    """

    def __init__(self, n, degree, coeffs, grid, values):
        self.n = n
        self.degree = degree
        self.coeffs = coeffs
        self.grid = tuple(tuple(axis) for axis in grid)
        self.values = dict(values)

    def cell(self, point):
        return tuple(cell_index(axis, x) for axis, x in zip(self.grid, point))

    def value(self, u, v):
        if len(u) != self.n or len(v) != self.n:
            raise DimensionMismatch(f"points must have {self.n} coordinates")
        if not leq(u, v):
            raise TorsionPHError("module values need u <= v")
        return self.values[(self.cell(u), self.cell(v))]

    def critical_values(self):
        return self.grid

    def __eq__(self, other):
        if not isinstance(other, PersistenceModule):
            return NotImplemented
        return (self.n, self.degree, self.coeffs, self.grid, self.values) == (
            other.n, other.degree, other.coeffs, other.grid, other.values
        )

    def __repr__(self):
        return f"PersistenceModule(n={self.n}, degree={self.degree}, coeffs={self.coeffs}, cells={len(self.values)})"

    def to_json(self):
        cells = []
        for (I, J), g in sorted(self.values.items()):
            cells.append({"i": list(I), "j": list(J), "group": group_to_json(g)})
        return {
            "degree": self.degree,
            "coeffs": str(self.coeffs),
            "grid": [[format_rational(x) for x in axis] for axis in self.grid],
            "cells": cells,
        }


def cell_pairs(shape):
    """All ``(I, J)`` with ``I <= J`` componentwise; ``shape[i]`` cells per axis."""
    per_axis = [[(a, b) for a in range(s) for b in range(a, s)] for s in shape]
    for combo in product(*per_axis):
        yield tuple(a for a, _ in combo), tuple(b for _, b in combo)


def module_on_grid(K, k, coeffs=INTEGERS, workers=None):
    grid = critical_values(K)
    shape = [len(axis) + 1 for axis in grid]
    pairs = list(cell_pairs(shape))
    if k < 0 or k > K.dimension():
        zero = _zero(coeffs)
        return PersistenceModule(K.n, k, coeffs, grid, {p: zero for p in pairs})

    engine = _engine(K, k, coeffs)
    members = {}
    for I in product(*(range(s) for s in shape)):
        members[I] = _members(K, tuple(_corner(axis, i) for axis, i in zip(grid, I)))

    def evaluate(pair):
        I, J = pair
        return pair, engine.image(members[I], members[J])

    nworkers = _workers(workers)
    if nworkers > 1 and len(pairs) > 64:
        # warm the per-cell caches serially so threads only share reads
        for I in members:
            engine.cycles(members[I])
        with ThreadPoolExecutor(max_workers=nworkers) as pool:
            values = dict(pool.map(evaluate, pairs))
    else:
        values = dict(map(evaluate, pairs))
    return PersistenceModule(K.n, k, coeffs, grid, values)


# --- persistence diagrams -------------------------------------------------------


class PersistenceDiagram:
    """Finite multiset of ``(birth, death)`` points; ``death`` may be ``inf``."""

    def __init__(self, points=()):
        counts = Counter()
        for p in points:
            b, d = p[0], p[1]
            mult = p[2] if len(p) > 2 else 1
            b = Fraction(b)
            d = INF if d == INF else Fraction(d)
            if not b < d:
                raise TorsionPHError(f"diagram point ({b}, {d}) needs birth < death")
            counts[(b, d)] += mult
        self.counts = counts

    def points(self):
        """Points with multiplicity, sorted; infinite deaths last per birth."""
        return sorted(self.counts.items(), key=lambda item: (item[0][0], item[0][1]))

    def expanded(self):
        return [pt for pt, m in self.points() for _ in range(m)]

    def __len__(self):
        return sum(self.counts.values())

    def __eq__(self, other):
        if not isinstance(other, PersistenceDiagram):
            return NotImplemented
        return +self.counts == +other.counts

    def __repr__(self):
        return f"PersistenceDiagram({[(format_rational(b), format_rational(d), m) for (b, d), m in self.points()]})"

    def betti(self, u, v):
        """Number of points born by ``u`` and still alive after ``v``."""
        return sum(m for (b, d), m in self.counts.items() if b <= u and d > v)

    def to_json(self):
        return [
            {"b": format_rational(b), "d": format_rational(d), "mult": m}
            for (b, d), m in self.points()
        ]


def filtration_order(K):
    """Simplex indices sorted by (grade, dimension, index)."""
    return sorted(range(len(K)), key=lambda i: (K.simplices[i].grade, K.simplices[i].dim, i))


def diagram(K, k, field=RATIONALS):
    if K.n != 1:
        raise MultiDimUnsupported(f"persistence diagrams need n = 1, complex has n = {K.n}")
    if not field.is_field:
        raise TorsionPHError("persistence diagrams need field coefficients (q or zp:P)")
    order = filtration_order(K)
    pos = {K.simplices[i].vertices: r for r, i in enumerate(order)}
    columns = []
    for i in order:
        vs = K.simplices[i].vertices
        col = []
        if len(vs) > 1:
            for a in range(len(vs)):
                col.append((pos[vs[:a] + vs[a + 1:]], -1 if a % 2 else 1))
        columns.append(col)
    if field.kind == "zp":
        lows = kernels.reduce_columns_mod_p(columns, len(order), field.p)
    else:
        lows = _reduce_rational(columns)

    sims = [K.simplices[i] for i in order]
    killed = set()
    points = []
    for j, low in enumerate(lows):
        if low < 0:
            continue
        killed.add(low)
        if sims[low].dim == k:
            b, d = sims[low].grade[0], sims[j].grade[0]
            if b < d:
                points.append((b, d))
    for j, low in enumerate(lows):
        if low < 0 and j not in killed and sims[j].dim == k:
            points.append((sims[j].grade[0], INF))
    return PersistenceDiagram(points)


def _reduce_rational(columns):
    cols = [{r: Fraction(c) for r, c in col} for col in columns]
    owner, lows = {}, []
    for j, col in enumerate(cols):
        while col:
            low = max(col)
            other = owner.get(low)
            if other is None:
                break
            f = col[low] / cols[other][low]
            for r, c in cols[other].items():
                x = col.get(r, 0) - f * c
                if x:
                    col[r] = x
                else:
                    col.pop(r, None)
        if col:
            low = max(col)
            owner[low] = j
            lows.append(low)
        else:
            lows.append(-1)
    return lows
