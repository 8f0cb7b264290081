import json
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_complex
from torsionph.complex import (
    EXAMPLES,
    INF,
    RP2_BAND_VERTICES,
    FilteredComplex,
    Simplex,
    build_diagram_realization,
    build_rp2,
    build_s2,
    cell_index,
    closure,
    complex_from_json,
    complex_to_json,
    critical_values,
    format_rational,
    grade,
    is_lower_star,
    leq,
    load_complex,
    lower_star,
    parse_rational,
    perturb,
    sublevel,
    sup_distance,
    validate,
)
from torsionph.errors import ComplexError, DimensionMismatch


def cx(n, *items):
    return FilteredComplex(n, [Simplex(tuple(v), tuple(Fraction(x) for x in g)) for v, g in items])


# --- rationals --------------------------------------------------------------------


@pytest.mark.parametrize(
    "text, value",
    [("3", Fraction(3)), ("-2/4", Fraction(-1, 2)), (" 6 / 8 ", Fraction(3, 4)), ("0/5", Fraction(0))],
)
def test_parse_rational(text, value):
    assert parse_rational(text) == value


def test_parse_rational_zero_denominator_names_field():
    with pytest.raises(ComplexError, match=r"simplices\[3\]\.g\[0\]"):
        parse_rational("1/0", "simplices[3].g[0]")


@pytest.mark.parametrize("bad", ["", "1.5", "a/b", "1//2", None, True])
def test_parse_rational_rejects(bad):
    with pytest.raises(ComplexError):
        parse_rational(bad)


def test_format_rational():
    assert [format_rational(x) for x in (Fraction(3, 6), Fraction(4), INF)] == ["1/2", "4", "inf"]


# --- validation --------------------------------------------------------------------


def test_validate_single_vertex():
    assert validate(cx(1, ([0], [0])))


def test_validate_monotonicity_violation():
    r = validate(cx(1, ([0], [1]), ([1], [0]), ([0, 1], [0])))
    assert not r and r.kind == "monotonicity"
    assert r.simplices == ((0,), (0, 1))


def test_validate_closure_violation():
    items = [([v], [0]) for v in range(3)] + [([0, 1], [0]), ([1, 2], [0]), ([0, 1, 2], [0])]
    r = validate(cx(1, *items))
    assert not r and r.kind == "closure"


def test_validate_duplicate_and_grade_length():
    assert validate(cx(1, ([0], [0]), ([0], [1]))).kind == "duplicate"
    assert validate(cx(2, ([0], [0]))).kind == "grade-length"


def test_validation_report_json():
    r = validate(cx(1, ([0], [1]), ([1], [0]), ([0, 1], [0])))
    assert json.loads(json.dumps(r.to_json()))["kind"] == "monotonicity"


# --- lower star / sublevels ---------------------------------------------------------


def test_lower_star_examples():
    K = lower_star([(0, 1)], {0: (0,), 1: (1,)})
    assert K.simplices[K.index((0, 1))].grade == grade(1)
    K = lower_star([(0, 1, 2)], {0: (0, 1), 1: (1, 0), 2: (0, 0)})
    assert K.simplices[K.index((0, 1, 2))].grade == grade(1, 1)
    K = lower_star([(0, 1, 2)], {v: (0,) for v in range(3)})
    assert all(s.grade == grade(0) for s in K)


def test_lower_star_missing_vertex():
    with pytest.raises(ComplexError, match="vertex 2"):
        lower_star([(0, 1, 2)], {0: (0,), 1: (0,)})


@pytest.mark.parametrize("seed", range(30))
def test_lower_star_validates(seed):
    K = random_complex(random.Random(seed), lower_star_only=True)
    assert validate(K) and is_lower_star(K)


def test_sublevel_extremes():
    K = build_rp2()
    assert sublevel(K, grade(-1)) == []
    assert sublevel(K, grade(5)) == list(range(len(K)))
    with pytest.raises(DimensionMismatch):
        sublevel(K, grade(0, 0))


def test_rp2_sublevel_is_band():
    K = build_rp2()
    band = [K.simplices[i] for i in sublevel(K, grade(0))]
    assert {s.vertices[0] for s in band if s.dim == 0} == set(RP2_BAND_VERTICES)
    assert sum(1 for s in band if s.dim == 2) == 5


@pytest.mark.parametrize("seed", range(20))
def test_sublevels_nest_and_are_cell_constant(seed):
    K = random_complex(random.Random(seed))
    crit = critical_values(K)[0]
    pts = [crit[0] - 1] + crit + [crit[-1] + 1]
    for a, b in zip(pts, pts[1:]):
        assert set(sublevel(K, (a,))) <= set(sublevel(K, (b,)))
    for a, b in zip(crit, crit[1:]):
        assert sublevel(K, ((a + b) / 2,)) == sublevel(K, (a,))
    for s in (K.simplices[i] for i in sublevel(K, (crit[len(crit) // 2],))):
        for f in closure([s.vertices]):
            assert leq(K.simplices[K.index(f)].grade, (crit[len(crit) // 2],))


def test_critical_values_examples():
    assert critical_values(cx(1, ([0], [0]))) == [[0]]
    K = lower_star([(0, 1), (2, 3)], {0: (0,), 1: (1,), 2: (1,), 3: (2,)})
    assert critical_values(K) == [[0, 1, 2]]
    K = lower_star([(0, 1)], {0: (0, 1), 1: (1, 0)})
    assert critical_values(K) == [[0, 1], [0, 1]]


def test_cell_index():
    axis = [Fraction(0), Fraction(1)]
    assert [cell_index(axis, x) for x in (-1, 0, Fraction(1, 2), 1, 7)] == [0, 1, 1, 2, 2]


# --- builders ----------------------------------------------------------------------


def test_rp2_triangulation_is_closed_surface():
    K = build_rp2()
    assert validate(K)
    counts = [sum(1 for s in K if s.dim == d) for d in range(3)]
    assert counts == [6, 15, 10]  # Euler characteristic 1
    for e in (s for s in K if s.dim == 1):
        cofaces = [t for t in K if t.dim == 2 and set(e.vertices) <= set(t.vertices)]
        assert len(cofaces) == 2


def test_builders_reject_bad_levels():
    with pytest.raises(ComplexError):
        build_rp2((1, 1))
    with pytest.raises(ComplexError):
        build_s2((2, 0))


def test_s2_grades():
    K = build_s2((0, 1))
    assert validate(K)
    assert sum(1 for s in K if s.dim == 0 and s.grade == grade(0)) == 4


def test_realization_rejects_bad_points():
    with pytest.raises(ComplexError):
        build_diagram_realization([(2, 2)])
    with pytest.raises(ComplexError):
        build_diagram_realization([])
    with pytest.raises(ComplexError):
        build_diagram_realization([(1,)])


def test_single_point_realization():
    K = build_diagram_realization([(0, 2)])
    assert validate(K)
    tri = [s for s in K if s.dim == 2]
    assert len(tri) == 1 and tri[0].grade == grade(2)


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_examples_validate_and_round_trip(name, tmp_path):
    K = EXAMPLES[name]()
    assert validate(K)
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps(complex_to_json(K)))
    assert load_complex(str(path)) == K


# --- file format ------------------------------------------------------------------


def test_vertex_grades_format_uses_lower_star():
    obj = {"n": 1, "vertex_grades": {"0": ["0"], "1": ["2/4"]}, "simplices_abstract": [[0, 1]]}
    K = complex_from_json(obj)
    assert K.simplices[K.index((0, 1))].grade == grade(Fraction(1, 2))


@pytest.mark.parametrize(
    "obj, fragment",
    [
        ([], "JSON object"),
        ({"simplices": []}, "'n'"),
        ({"n": 0, "simplices": []}, "positive integer"),
        ({"n": 1}, "'simplices'"),
        ({"n": 1, "simplices": [{"v": [0]}]}, r"simplices\[0\]"),
        ({"n": 1, "simplices": [{"v": [0], "g": ["1/0"]}]}, r"simplices\[0\]\.g\[0\]"),
        ({"n": 1, "simplices": [{"v": [], "g": ["0"]}]}, r"simplices\[0\]\.v"),
        ({"n": 2, "simplices": [{"v": [0], "g": ["0"]}]}, "expected n = 2"),
        ({"n": 1, "vertex_grades": {"x": ["0"]}, "simplices_abstract": []}, "bad vertex id"),
    ],
)
def test_json_errors(obj, fragment):
    with pytest.raises(ComplexError, match=fragment):
        complex_from_json(obj)


def test_load_complex_errors(tmp_path):
    with pytest.raises(ComplexError, match="No such file"):
        load_complex(str(tmp_path / "missing.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    with pytest.raises(ComplexError, match="invalid JSON"):
        load_complex(str(bad))


# --- perturbation -------------------------------------------------------------------


def test_perturb_zero_is_identity():
    for make in EXAMPLES.values():
        K = make()
        assert perturb(K, 0, 7) == K


@given(
    st.sampled_from(sorted(EXAMPLES)),
    st.sampled_from([Fraction(1, 10), Fraction(1, 4), Fraction(1, 2), Fraction(3)]),
    st.integers(0, 10**6),
)
def test_perturb_stays_within_eta(name, eta, seed):
    K = EXAMPLES[name]()
    L = perturb(K, eta, seed)
    assert validate(L)
    assert sup_distance(K, L) <= eta
    vk, vl = K.vertex_grades(), L.vertex_grades()
    assert all(abs(vk[v][0] - vl[v][0]) <= eta for v in vk)


def test_perturb_is_deterministic():
    K = build_rp2()
    assert perturb(K, Fraction(1, 4), 3) == perturb(K, Fraction(1, 4), 3)


def test_perturb_rejects_negative():
    with pytest.raises(ComplexError):
        perturb(build_rp2(), -1, 0)
