import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from torsionph.abelian import FgAbelianGroup
from torsionph.complex import INF, Simplex, FilteredComplex, closure, lower_star

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# Lines recorded by the acceptance suite, echoed in the terminal summary.
ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    def record(number, title, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}"
        if detail:
            line += f" ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


# --- shared generators -----------------------------------------------------


def random_diagram(rng, max_points=6, denom=4, span=16, inf_prob=0.2):
    """Up to ``max_points`` points with grades ``k / denom``, ``0 <= k <= span``."""
    pts = []
    for _ in range(rng.randint(1, max_points)):
        b = rng.randint(0, span - 1)
        if rng.random() < inf_prob:
            pts.append((Fraction(b, denom), INF))
        else:
            pts.append((Fraction(b, denom), Fraction(rng.randint(b + 1, span), denom)))
    return pts


def random_complex(rng, n_vertices=7, n_triangles=6, levels=5, lower_star_only=False):
    """A random 1-parameter filtered complex of dimension <= 2."""
    verts = list(range(n_vertices))
    tops = set()
    for _ in range(n_triangles):
        tops.add(tuple(sorted(rng.sample(verts, 3))))
    for _ in range(rng.randint(0, 4)):
        tops.add(tuple(sorted(rng.sample(verts, 2))))
    abstract = closure(tops)
    if lower_star_only or rng.random() < 0.5:
        grades = {v: (Fraction(rng.randint(0, levels)),) for v in verts}
        return lower_star(abstract, grades)
    # generic monotone grades: each simplex at least the max of its faces
    out = {}
    for s in sorted(abstract, key=lambda s: (len(s), s)):
        g = Fraction(rng.randint(0, levels), 2)
        if len(s) > 1:
            g = max([g] + [out[s[:i] + s[i + 1 :]] for i in range(len(s))])
        out[s] = g
    return FilteredComplex(1, [Simplex(s, (g,)) for s, g in out.items()])


@st.composite
def abelian_groups(draw, max_rank=2, max_factors=3, max_order=12):
    rank = draw(st.integers(0, max_rank))
    orders = draw(st.lists(st.integers(2, max_order), max_size=max_factors))
    G = FgAbelianGroup.from_cyclic(*orders) if orders else FgAbelianGroup()
    return FgAbelianGroup(rank, G.torsion)


@pytest.fixture
def rng():
    return random.Random(20240607)
