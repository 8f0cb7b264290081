"""Distances between persistent homology groups and between diagrams.

``d_T`` compares two persistence modules through shifted subquotient
conditions: for ``eps`` to be admissible, at every ``u < v`` each module's
group at ``(u - eps, v + eps)`` must be a quotient of a subgroup of the other
module's group at ``(u, v)``. ``d_T`` is the infimum of admissible shifts.

Both modules are piecewise constant on their critical grids, so the
condition for a fixed ``eps`` is decided on a finite refinement of the axes,
and the infimum is always one of finitely many candidate values built from
differences and half-differences of critical values.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .abelian import FgAbelianGroup, is_subquotient
from .complex import INF, format_rational, lt, perturb, sup_distance
from .errors import DimensionMismatch, MultiDimUnsupported
from .matching import hopcroft_karp
from .persistence import INTEGERS, group_str, group_to_json, module_on_grid


def subquotient(target, source):
    """Does a subgroup of ``source`` surject onto ``target``?"""
    if isinstance(target, FgAbelianGroup):
        return is_subquotient(target, source)
    return target <= source


@dataclass(frozen=True)
class Witness:
    u: tuple
    v: tuple
    direction: int
    source: object
    target: object
    cells: tuple = ()

    def to_json(self):
        return {
            "u": [format_rational(x) for x in self.u],
            "v": [format_rational(x) for x in self.v],
            "direction": self.direction,
            "source": group_to_json(self.source),
            "target": group_to_json(self.target),
        }

    def __str__(self):
        u = ", ".join(format_rational(x) for x in self.u)
        v = ", ".join(format_rational(x) for x in self.v)
        return (
            f"direction {self.direction} at u=({u}), v=({v}): "
            f"{group_str(self.target)} is not a subquotient of {group_str(self.source)}"
        )


@dataclass(frozen=True)
class ShiftPredicateReport:
    epsilon: Fraction
    holds: bool
    witness: Witness = None

    def to_json(self):
        return {
            "epsilon": format_rational(self.epsilon),
            "holds": self.holds,
            "witness": self.witness.to_json() if self.witness else None,
        }


@dataclass(frozen=True)
class DistanceResult:
    value: object  # Fraction or INF
    attained: bool
    witness: object = None
    extra: dict = field(default_factory=dict)

    def to_json(self):
        out = {
            "value": format_rational(self.value),
            "attained": self.attained,
            "witness": self.witness.to_json() if self.witness is not None else None,
        }
        out.update(self.extra)
        return out


def _check_compatible(Mx, My):
    if Mx.n != My.n:
        raise DimensionMismatch(f"filtration dimensions differ: {Mx.n} vs {My.n}")
    if Mx.degree != My.degree:
        raise DimensionMismatch(f"homology degrees differ: {Mx.degree} vs {My.degree}")
    if Mx.coeffs != My.coeffs:
        raise DimensionMismatch(f"coefficients differ: {Mx.coeffs} vs {My.coeffs}")


def _refined_axis(Mx, My, i, eps):
    crit = set(Mx.grid[i]) | set(My.grid[i])
    return sorted(crit | {c + eps for c in crit} | {c - eps for c in crit})


def _reps(axis):
    """Left endpoints of the refined intervals, and a point strictly inside each."""
    if not axis:
        return [Fraction(0)], [Fraction(1)]
    left = [axis[0] - 1] + list(axis)
    inner = [axis[0] - Fraction(1, 2)]
    inner += [(a + b) / 2 for a, b in zip(axis, axis[1:])]
    inner.append(axis[-1] + 1)
    return left, inner


def dt_predicate(Mx, My, eps):
    """Decide whether ``eps`` is an admissible shift for ``d_T``.

    On failure the witness is the lexicographically smallest failing pair of
    refined cells, direction 1 (X's group as source) checked before 2.
    """
    _check_compatible(Mx, My)
    eps = Fraction(eps)
    if eps < 0:
        raise ValueError("epsilon must be nonnegative")
    axes = [_refined_axis(Mx, My, i, eps) for i in range(Mx.n)]
    reps = [_reps(a) for a in axes]
    per_axis = [
        [(a, b) for a in range(len(ax) + 1) for b in range(a, len(ax) + 1)] for ax in axes
    ]
    pairs = sorted(
        (tuple(a for a, _ in combo), tuple(b for _, b in combo)) for combo in product(*per_axis)
    )
    for P, Q in pairs:
        u = tuple(reps[i][0][P[i]] for i in range(Mx.n))
        v = tuple(
            reps[i][1][Q[i]] if P[i] == Q[i] else reps[i][0][Q[i]] for i in range(Mx.n)
        )
        us = tuple(x - eps for x in u)
        vs = tuple(x + eps for x in v)
        hx, hy = Mx.value(u, v), My.value(u, v)
        ty = My.value(us, vs)
        if not subquotient(ty, hx):
            return ShiftPredicateReport(eps, False, Witness(u, v, 1, hx, ty, (P, Q)))
        tx = Mx.value(us, vs)
        if not subquotient(tx, hy):
            return ShiftPredicateReport(eps, False, Witness(u, v, 2, hy, tx, (P, Q)))
    return ShiftPredicateReport(eps, True)


def candidate_shifts(Mx, My):
    pool = sorted({c for M in (Mx, My) for axis in M.grid for c in axis})
    cands = {Fraction(0)}
    for a in pool:
        for b in pool:
            if b > a:
                cands.add(b - a)
                cands.add((b - a) / 2)
    return sorted(cands)


def d_T(Mx, My, method="bisect"):
    """Exact ``d_T`` between two modules of the same degree and coefficients.

    ``method="scan"`` tests candidates in ascending order; ``"bisect"``
    (default) binary-searches them, which is valid because admissibility is
    upward closed in ``eps``. Both return the same value.
    """
    _check_compatible(Mx, My)
    cands = candidate_shifts(Mx, My)
    top = dt_predicate(Mx, My, cands[-1] + 1)
    if not top.holds:
        return DistanceResult(INF, False, top.witness)

    if method == "scan":
        last_fail = None
        for k, c in enumerate(cands):
            rep = dt_predicate(Mx, My, c)
            if rep.holds:
                return DistanceResult(c, True, last_fail)
            last_fail = rep.witness
            nxt = cands[k + 1] if k + 1 < len(cands) else c + 2
            mid = dt_predicate(Mx, My, (c + nxt) / 2)
            if mid.holds:
                return DistanceResult(c, False, rep.witness)
        raise AssertionError("admissible shift above all candidates was not found")

    if method != "bisect":
        raise ValueError(f"unknown method {method!r}")
    lo, hi = 0, len(cands)  # first index where the predicate holds lies in [lo, hi]
    cache = {}

    def holds(k):
        if k not in cache:
            cache[k] = dt_predicate(Mx, My, cands[k])
        return cache[k].holds

    while lo < hi:
        mid = (lo + hi) // 2
        if holds(mid):
            hi = mid
        else:
            lo = mid + 1
    if lo == 0:
        return DistanceResult(cands[0], True, None)
    below = cands[lo - 1]
    upper = cands[lo] if lo < len(cands) else below + 2
    probe = dt_predicate(Mx, My, (below + upper) / 2)
    if probe.holds:
        return DistanceResult(below, False, cache[lo - 1].witness)
    if lo == len(cands):
        raise AssertionError("admissible shift above all candidates was not found")
    return DistanceResult(cands[lo], True, probe.witness)


def dt_brute_force(Mx, My, step, upto=None):
    """Smallest mesh point ``j * step`` where the predicate holds (oracle)."""
    _check_compatible(Mx, My)
    step = Fraction(step)
    if upto is None:
        upto = candidate_shifts(Mx, My)[-1] + 1
    j = 0
    while j * step <= upto:
        if dt_predicate(Mx, My, j * step).holds:
            return j * step
        j += 1
    return INF


# --- matching distance -------------------------------------------------------------


def _linf(p, q):
    return max(abs(p[0] - q[0]), abs(p[1] - q[1]))


def _feasible(A, B, t):
    nA, nB = len(A), len(B)
    # left: A then diagonal copies of B; right: B then diagonal copies of A
    adj = []
    for i, a in enumerate(A):
        row = [j for j, b in enumerate(B) if _linf(a, b) <= t]
        if (a[1] - a[0]) / 2 <= t:
            row.append(nB + i)
        adj.append(row)
    for j, b in enumerate(B):
        row = [j] if (b[1] - b[0]) / 2 <= t else []
        row.extend(nB + i for i in range(nA))
        adj.append(row)
    size, _ = hopcroft_karp(adj, nB + nA)
    return size == nA + nB


def d_match(D1, D2):
    """Bottleneck distance between two persistence diagrams."""
    inf1 = sorted(b for b, d in D1.expanded() if d == INF)
    inf2 = sorted(b for b, d in D2.expanded() if d == INF)
    if len(inf1) != len(inf2):
        return DistanceResult(INF, True, None)
    inf_cost = max((abs(a - b) for a, b in zip(inf1, inf2)), default=Fraction(0))

    A = [p for p in D1.expanded() if p[1] != INF]
    B = [p for p in D2.expanded() if p[1] != INF]
    cands = {Fraction(0)}
    cands.update(_linf(a, b) for a in A for b in B)
    cands.update((p[1] - p[0]) / 2 for p in A + B)
    cands = sorted(cands)
    lo, hi = 0, len(cands) - 1  # diagonal-only matching is feasible at the top
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(A, B, cands[mid]):
            hi = mid
        else:
            lo = mid + 1
    return DistanceResult(max(inf_cost, cands[lo]), True, None)


# --- lower bounds for the natural pseudo-distance ---------------------------------


def delta_lower_bound_witness(Mx, My, uv, uv2):
    """Lower bound for the natural pseudo-distance from one failed subquotient test.

    If no subgroup of ``H_X(u, v)`` surjects onto ``H_Y(u', v')``, returns
    ``min_i min(u_i - u'_i, v'_i - v_i)``; otherwise ``None``. A nonpositive
    result is a valid but vacuous bound.
    """
    _check_compatible(Mx, My)
    (u, v), (u2, v2) = uv, uv2
    u, v, u2, v2 = (tuple(Fraction(x) for x in p) for p in (u, v, u2, v2))
    if any(len(p) != Mx.n for p in (u, v, u2, v2)):
        raise DimensionMismatch(f"points must have {Mx.n} coordinates")
    if not (lt(u, v) and lt(u2, v2)):
        raise ValueError("both pairs must satisfy u < v coordinatewise")
    if subquotient(My.value(u2, v2), Mx.value(u, v)):
        return None
    return min(min(a - b, d - c) for a, b, c, d in zip(u, u2, v, v2))


def _probe_points(M1, M2):
    crit = sorted({c for M in (M1, M2) for c in M.grid[0]})
    if not crit:
        return [Fraction(0)]
    pts = [crit[0] - 1] + crit + [(a + b) / 2 for a, b in zip(crit, crit[1:])] + [crit[-1] + 1]
    return sorted(set(pts))


def best_delta_bound(Mx, My):
    """Largest positive witness bound over probe points, either direction (n = 1 only).

    Returns ``(bound, (uv, uv2, direction))`` or ``(None, None)`` when no
    probe pair gives a positive bound.

    A failure at ``(u', v')`` persists when the interval shrinks toward
    ``(u, v)``, because the group over a wider interval is a subquotient of
    the group over a narrower one. So for each ``(u, v)`` and each ``u'``
    the largest failing ``v'`` only moves right as ``u'`` grows, and a
    two-pointer sweep finds it.
    """
    _check_compatible(Mx, My)
    if Mx.n != 1:
        raise MultiDimUnsupported("witness search is implemented for n = 1")
    pts = _probe_points(Mx, My)
    P = len(pts)

    def table(M):
        return {(a, b): M.value((pts[a],), (pts[b],)) for a in range(P) for b in range(a + 1, P)}

    tables = {id(M): table(M) for M in (Mx, My)}
    best, arg = None, None
    for direction, (M1, M2) in enumerate(((Mx, My), (My, Mx)), start=1):
        t1, t2 = tables[id(M1)], tables[id(M2)]
        for (a, b), g in t1.items():
            d = b  # largest failing index found so far, b means none
            for c in range(a):
                if d == b:
                    if b + 1 >= P or subquotient(t2[(c, b + 1)], g):
                        continue
                    d = b + 1
                while d + 1 < P and not subquotient(t2[(c, d + 1)], g):
                    d += 1
                bound = min(pts[a] - pts[c], pts[d] - pts[b])
                if best is None or bound > best:
                    best, arg = bound, (((pts[a],), (pts[b],)), ((pts[c],), (pts[d],)), direction)
    return best, arg


@dataclass(frozen=True)
class StabilityReport:
    eta: Fraction
    sup_distance: Fraction
    dt: object
    witness_bound: object
    passed: bool

    def to_json(self):
        return {
            "eta": format_rational(self.eta),
            "sup_distance": format_rational(self.sup_distance),
            "dt": format_rational(self.dt),
            "witness_bound": None if self.witness_bound is None else format_rational(self.witness_bound),
            "passed": self.passed,
        }


def stability_check(K, k, eta, seed, coeffs=INTEGERS):
    """Perturb ``K`` by at most ``eta`` and confirm ``d_T <= eta``."""
    eta = Fraction(eta)
    L = perturb(K, eta, seed)
    Mx, My = module_on_grid(K, k, coeffs), module_on_grid(L, k, coeffs)
    dt = d_T(Mx, My).value
    bound = best_delta_bound(Mx, My)[0] if K.n == 1 else None
    passed = dt <= eta and (bound is None or bound <= dt)
    return StabilityReport(eta, sup_distance(K, L), dt, bound, passed)
