"""Finite simplicial complexes filtered by exact R^n-valued grades.

A simplex enters the filtration exactly at its grade, so the sublevel
complex at ``u`` holds every simplex whose grade is coordinatewise ``<= u``.
All grades are :class:`fractions.Fraction`.
"""

import json
import math
import random
import re
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import ComplexError, DimensionMismatch

INF = math.inf

_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*([+-]?\d+))?\s*$")


def parse_rational(text, field="value"):
    """Parse ``"p/q"`` or ``"k"`` into a reduced Fraction.

    Non-reduced input is normalized; a zero denominator is an error naming
    ``field``.
    """
    if isinstance(text, bool):
        raise ComplexError(f"{field}: expected a rational string, got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ComplexError(f"{field}: expected a rational string, got {text!r}")
    m = _RATIONAL.match(text)
    if not m:
        raise ComplexError(f"{field}: malformed rational {text!r}")
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise ComplexError(f"{field}: zero denominator in {text!r}")
    return Fraction(num, den)


def parse_extended(text, field="value"):
    if isinstance(text, str) and text.strip().lower() in ("inf", "+inf", "infinity"):
        return INF
    return parse_rational(text, field)


def format_rational(x):
    if x == INF:
        return "inf"
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def leq(u, v):
    return all(a <= b for a, b in zip(u, v))


def lt(u, v):
    return all(a < b for a, b in zip(u, v))


def grade(*coords):
    return tuple(Fraction(c) for c in coords)


@dataclass(frozen=True)
class Simplex:
    vertices: tuple
    grade: tuple

    @property
    def dim(self):
        return len(self.vertices) - 1


class FilteredComplex:
    """Simplices with grades; ``n`` is the number of filtration parameters.

    Construction does not validate; call :func:`validate` (the builders and
    the file reader do).
    """

    def __init__(self, n, simplices):
        self.n = n
        self.simplices = tuple(
            Simplex(tuple(sorted(s.vertices)), tuple(Fraction(g) for g in s.grade))
            for s in simplices
        )
        self._index = {s.vertices: i for i, s in enumerate(self.simplices)}

    def __len__(self):
        return len(self.simplices)

    def __iter__(self):
        return iter(self.simplices)

    def __eq__(self, other):
        if not isinstance(other, FilteredComplex):
            return NotImplemented
        return self.n == other.n and self.simplices == other.simplices

    def __repr__(self):
        return f"FilteredComplex(n={self.n}, simplices={len(self.simplices)})"

    def index(self, vertices):
        return self._index[tuple(sorted(vertices))]

    def dimension(self):
        return max((s.dim for s in self.simplices), default=-1)

    def vertex_grades(self):
        return {s.vertices[0]: s.grade for s in self.simplices if s.dim == 0}

    def max_grade(self):
        """Coordinatewise maximum grade over all simplices."""
        return tuple(max(s.grade[i] for s in self.simplices) for i in range(self.n))


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    kind: str = ""
    message: str = ""
    simplices: tuple = ()

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {
            "ok": self.ok,
            "kind": self.kind or None,
            "message": self.message or None,
            "simplices": [list(s) for s in self.simplices],
        }


def validate(K):
    seen = set()
    for s in K.simplices:
        if not s.vertices:
            return ValidationReport(False, "empty", "simplex with no vertices")
        if len(set(s.vertices)) != len(s.vertices):
            return ValidationReport(False, "repeated-vertex", f"{list(s.vertices)} repeats a vertex", (s.vertices,))
        if s.vertices in seen:
            return ValidationReport(False, "duplicate", f"{list(s.vertices)} listed twice", (s.vertices,))
        if len(s.grade) != K.n:
            return ValidationReport(
                False, "grade-length", f"{list(s.vertices)} has {len(s.grade)} grade coordinates, expected {K.n}", (s.vertices,)
            )
        seen.add(s.vertices)
    for s in K.simplices:
        if s.dim == 0:
            continue
        for face in combinations(s.vertices, s.dim):
            if face not in K._index:
                return ValidationReport(
                    False, "closure", f"face {list(face)} of {list(s.vertices)} is missing", (face, s.vertices)
                )
            f = K.simplices[K._index[face]]
            if not leq(f.grade, s.grade):
                return ValidationReport(
                    False,
                    "monotonicity",
                    f"face {list(face)} enters at {_fmt_grade(f.grade)} after coface {list(s.vertices)} at {_fmt_grade(s.grade)}",
                    (face, s.vertices),
                )
    return ValidationReport(True)


def _fmt_grade(g):
    return "(" + ", ".join(format_rational(x) for x in g) + ")"


def closure(simplices):
    """All faces of the given vertex sets, sorted by (dimension, vertices)."""
    out = set()
    for s in simplices:
        s = tuple(sorted(s))
        for k in range(1, len(s) + 1):
            out.update(combinations(s, k))
    return sorted(out, key=lambda s: (len(s), s))


def lower_star(abstract, vertex_grades):
    """Grade each simplex by the coordinatewise max of its vertex grades."""
    vertex_grades = {v: tuple(Fraction(x) for x in g) for v, g in vertex_grades.items()}
    lengths = {len(g) for g in vertex_grades.values()}
    if len(lengths) > 1:
        raise ComplexError("vertex grades have different lengths")
    n = lengths.pop() if lengths else 1
    simplices = []
    for s in closure(abstract):
        try:
            gs = [vertex_grades[v] for v in s]
        except KeyError as e:
            raise ComplexError(f"vertex {e.args[0]} has no grade") from None
        simplices.append(Simplex(s, tuple(max(g[i] for g in gs) for i in range(n))))
    return FilteredComplex(n, simplices)


def is_lower_star(K):
    vg = K.vertex_grades()
    for s in K.simplices:
        expect = tuple(max(vg[v][i] for v in s.vertices) for i in range(K.n))
        if s.grade != expect:
            return False
    return True


def sublevel(K, u):
    if len(u) != K.n:
        raise DimensionMismatch(f"grade has {len(u)} coordinates, complex has n = {K.n}")
    return [i for i, s in enumerate(K.simplices) if leq(s.grade, u)]


def critical_values(K):
    return [sorted({s.grade[i] for s in K.simplices}) for i in range(K.n)]


def cell_index(values, x):
    """Cell of ``x`` on a sorted axis: 0 below every value, ``k`` on ``[c_{k-1}, c_k)``."""
    return bisect_right(values, x)


# --- example builders -----------------------------------------------------

RP2_TRIANGLES = (
    (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
    (1, 2, 4), (2, 3, 5), (1, 3, 4), (2, 4, 5), (1, 3, 5),
)
# Removing vertex 0 (its open star is a disk) leaves a Moebius band.
RP2_BAND_VERTICES = (1, 2, 3, 4, 5)

OCTAHEDRON_TRIANGLES = tuple(
    (e1, e2, pole)
    for e1, e2 in ((0, 1), (1, 2), (2, 3), (0, 3))
    for pole in (4, 5)
)


def _check_levels(a, b):
    a, b = Fraction(a), Fraction(b)
    if not a < b:
        raise ComplexError(f"levels must satisfy a < b, got ({a}, {b})")
    return a, b


def build_rp2(levels=(0, 1), scale=1):
    """6-vertex projective plane: band vertices at ``a*scale``, the rest at ``b*scale``."""
    a, b = _check_levels(*levels)
    scale = Fraction(scale)
    grades = {v: (a * scale if v in RP2_BAND_VERTICES else b * scale,) for v in range(6)}
    return lower_star(RP2_TRIANGLES, grades)


def build_s2(levels=(0, 1)):
    """Octahedral sphere: the four equator vertices at ``a``, both poles at ``b``."""
    a, b = _check_levels(*levels)
    grades = {v: (a if v < 4 else b,) for v in range(6)}
    return lower_star(OCTAHEDRON_TRIANGLES, grades)


def build_diagram_realization(points):
    """A 1-parameter complex whose degree-1 diagram is exactly ``points``.

    Each ``(birth, death)`` becomes a hollow triangle appearing at ``birth``
    and filled at ``death`` (never, if ``death`` is infinite). Every triangle
    is tied to a base vertex at the smallest birth by an edge entering at
    that triangle's birth.
    """
    pts = []
    for p in points:
        try:
            b, d = p
        except (TypeError, ValueError):
            raise ComplexError(f"malformed diagram point {p!r}") from None
        b = Fraction(b)
        d = INF if d == INF else Fraction(d)
        if not b < d:
            raise ComplexError(f"diagram point ({b}, {d}) needs birth < death")
        pts.append((b, d))
    if not pts:
        raise ComplexError("diagram realization needs at least one point")
    base = min(b for b, _ in pts)
    simplices = [Simplex((0,), (base,))]
    for k, (b, d) in enumerate(pts):
        x, y, z = 3 * k + 1, 3 * k + 2, 3 * k + 3
        simplices += [Simplex((v,), (b,)) for v in (x, y, z)]
        simplices += [Simplex(e, (b,)) for e in ((x, y), (y, z), (x, z))]
        simplices.append(Simplex((0, x), (b,)))
        if d != INF:
            simplices.append(Simplex((x, y, z), (d,)))
    return FilteredComplex(1, simplices)


def staircase_diagrams(m):
    """The two staircase diagrams with ``d_T = 1`` and ``d_match = m/2``."""
    left = [(0, INF)] + [(i, m + i) for i in range(m + 1)]
    right = [(0, INF)] + [(i, m + i) for i in range(m)]
    return left, right


def perturb(K, eta, seed):
    """Filtration on the same complex within sup-distance ``eta`` of ``K``.

    Offsets are multiples of ``eta/8`` drawn from ``random.Random(seed)``.
    Lower-star complexes get vertex offsets and are re-extended; any other
    complex gets per-simplex offsets followed by a monotone repair pass
    (raise each simplex to the max of its faces), which keeps every grade
    within ``eta`` of the original.
    """
    eta = Fraction(eta)
    if eta < 0:
        raise ComplexError("eta must be nonnegative")
    rng = random.Random(seed)

    def offset():
        return tuple(eta * rng.randint(-8, 8) / 8 for _ in range(K.n))

    if is_lower_star(K):
        vg = {v: tuple(g + o for g, o in zip(gr, offset())) for v, gr in sorted(K.vertex_grades().items())}
        return lower_star([s.vertices for s in K.simplices], vg)

    new = {}
    for s in sorted(K.simplices, key=lambda s: (s.dim, s.vertices)):
        g = [x + o for x, o in zip(s.grade, offset())]
        if s.dim > 0:
            for face in combinations(s.vertices, s.dim):
                g = [max(a, b) for a, b in zip(g, new[face])]
        new[s.vertices] = tuple(g)
    return FilteredComplex(K.n, [Simplex(s.vertices, new[s.vertices]) for s in K.simplices])


def sup_distance(K1, K2):
    """max over shared simplices of the max-norm grade difference."""
    if len(K1) != len(K2):
        raise ComplexError("complexes differ")
    worst = Fraction(0)
    for s in K1.simplices:
        t = K2.simplices[K2.index(s.vertices)]
        worst = max([worst] + [abs(a - b) for a, b in zip(s.grade, t.grade)])
    return worst


# --- file format ------------------------------------------------------------


def complex_from_json(obj):
    if not isinstance(obj, dict):
        raise ComplexError("complex file must hold a JSON object")
    if "n" not in obj:
        raise ComplexError("missing field 'n'")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ComplexError(f"field 'n' must be a positive integer, got {n!r}")
    if "vertex_grades" in obj:
        vg = {}
        for key, g in obj["vertex_grades"].items():
            try:
                v = int(key)
            except ValueError:
                raise ComplexError(f"vertex_grades: bad vertex id {key!r}") from None
            vg[v] = _parse_grade(g, n, f"vertex_grades[{key}]")
        abstract = obj.get("simplices_abstract")
        if abstract is None:
            raise ComplexError("missing field 'simplices_abstract'")
        for i, s in enumerate(abstract):
            _check_vertex_list(s, f"simplices_abstract[{i}]")
        abstract = list(abstract) + [[v] for v in vg]
        return lower_star(abstract, vg)
    if "simplices" not in obj:
        raise ComplexError("missing field 'simplices'")
    simplices = []
    for i, s in enumerate(obj["simplices"]):
        if not isinstance(s, dict) or "v" not in s or "g" not in s:
            raise ComplexError(f"simplices[{i}]: expected an object with 'v' and 'g'")
        _check_vertex_list(s["v"], f"simplices[{i}].v")
        simplices.append(Simplex(tuple(sorted(s["v"])), _parse_grade(s["g"], n, f"simplices[{i}].g")))
    return FilteredComplex(n, simplices)


def _check_vertex_list(v, field):
    if not isinstance(v, list) or not v or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise ComplexError(f"{field}: expected a nonempty list of integer vertex ids")


def _parse_grade(g, n, field):
    if not isinstance(g, list):
        raise ComplexError(f"{field}: expected a list of rational strings")
    if len(g) != n:
        raise ComplexError(f"{field}: has {len(g)} coordinates, expected n = {n}")
    return tuple(parse_rational(x, f"{field}[{i}]") for i, x in enumerate(g))


def complex_to_json(K):
    return {
        "n": K.n,
        "simplices": [
            {"v": list(s.vertices), "g": [format_rational(x) for x in s.grade]} for s in K.simplices
        ],
    }


def load_complex(path):
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as e:
        raise ComplexError(f"{path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise ComplexError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from None
    try:
        return complex_from_json(obj)
    except ComplexError as e:
        raise ComplexError(f"{path}: {e}") from None


EXAMPLES = {
    "rp2": lambda: build_rp2((0, 1), 1),
    "rp2x2": lambda: build_rp2((0, 1), 2),
    "s2": lambda: build_s2((0, 1)),
    "fig2-left": lambda: build_diagram_realization(staircase_diagrams(4)[0]),
    "fig2-right": lambda: build_diagram_realization(staircase_diagrams(4)[1]),
}
