import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FAMILIES, built
from oracles import maximise_numerically
from crossing_forge.bounds import (
    CUBIC,
    DENSITY_CLASSES,
    best_crossing_lower_bound,
    bound_report,
    builtin_linear_bounds,
    crossing_lemma_from_linear,
    cubic_bound,
    density_cap,
    k_planar_density_cap,
    kappa_squared,
    min_config_count,
    peel,
)
from crossing_forge.errors import (
    BeyondDensity,
    KTooSmall,
    NonpositiveCoefficient,
    NotEnoughEdges,
    UnknownClass,
)
from crossing_forge.planemap import is_simple_graph


def test_builtin_linear_bounds():
    pairs = {(lb.a, lb.b) for lb in builtin_linear_bounds()}
    assert pairs == {(1, 3), (F(7, 3), F(25, 3)), (F(37, 9), F(155, 9)), (5, F(203, 9))}


@pytest.mark.parametrize("n,m,value", [(5, 10, 1), (6, 15, 3), (7, 21, F(22, 3))])
def test_best_bound_complete_graphs(n, m, value):
    assert best_crossing_lower_bound(n, m) == value


def test_best_bound_on_tight_drawings():
    assert best_crossing_lower_bound(20, 90) == 60 == built("optimal:dodecahedron").stats.crossing_total
    assert best_crossing_lower_bound(20, 78) == 32 <= built("augmented:dodecahedron").stats.crossing_total


def test_best_bound_edges():
    assert best_crossing_lower_bound(10, 0) == 0
    with pytest.raises(ValueError):
        best_crossing_lower_bound(0, 3)


@pytest.mark.parametrize("a,b,c,p", [
    (5, F(203, 9), F(1500, 41209), F(203, 30)),
    (1, 1, F(4, 27), F(3, 2)),
    (F(7, 3), F(25, 3), F(1372, 50625), F(75, 14)),
])
def test_crossing_lemma_constant(a, b, c, p):
    k = crossing_lemma_from_linear(a, b)
    assert (k.c, k.p_star) == (c, p)
    x, best = maximise_numerically(float(a), float(b))
    assert math.isclose(x, float(p), rel_tol=1e-3)
    assert math.isclose(best, float(c), rel_tol=1e-6)


def test_headline_decimals():
    assert CUBIC.reciprocal == F(41209, 1500) < F(2748, 100)
    assert CUBIC.threshold == F(203, 30) < F(677, 100)


@pytest.mark.parametrize("a,b", [(0, 1), (1, 0), (-1, 2)])
def test_nonpositive(a, b):
    with pytest.raises(NonpositiveCoefficient):
        crossing_lemma_from_linear(a, b)


rationals = st.fractions(min_value=F(1, 100), max_value=100)


@settings(max_examples=50, deadline=None)
@given(rationals, rationals)
def test_crossing_lemma_identity(a, b):
    k = crossing_lemma_from_linear(a, b)
    x = k.p_star
    assert a / x ** 2 - b / x ** 3 == k.c == 4 * a ** 3 / (27 * b ** 2)
    # stationary point: derivative -2a/x^3 + 3b/x^4 vanishes
    assert -2 * a / x ** 3 + 3 * b / x ** 4 == 0


def test_k_planar_caps():
    assert kappa_squared() == F(41209, 3000) <= F(1374, 100)
    assert k_planar_density_cap(2).kappa <= 3.71
    assert math.isclose(k_planar_density_cap(2).display, 5.2415, abs_tol=1e-4)
    cap5 = k_planar_density_cap(5)
    assert math.isclose(cap5.display, 8.287, abs_tol=1e-3) and cap5.cap_squared <= F(83, 10) ** 2
    assert kappa_squared(F(1, 2)) == 1
    with pytest.raises(KTooSmall):
        k_planar_density_cap(1)


@pytest.mark.parametrize("cls,n,value", [
    ("3planar-F36free", 6, 20),
    ("3planar-simple", 10, 43),
    ("planar", 3, 3),
    ("1planar", 10, 32),
    ("2planar", 5, 15),
    ("2planar-F25free", 6, 18),
    ("2planar-F25F26free", 20, 78),
    ("3planar-nonsimple", 6, 22),
    ("4planar", 7, 30),
])
def test_density_caps(cls, n, value):
    assert density_cap(cls)(n) == value


def test_density_classes_and_unknown():
    assert len(DENSITY_CLASSES) == 9
    with pytest.raises(UnknownClass):
        density_cap("5planar")


def test_min_config_count():
    assert min_config_count(6, 22, "3planar") == 2
    assert min_config_count(5, 15, "2planar") == 2
    assert min_config_count(20, 90, "2planar") == 12
    assert min_config_count(20, 78, "2planar") == 0
    with pytest.raises(BeyondDensity):
        min_config_count(5, 16, "2planar")
    with pytest.raises(BeyondDensity):
        min_config_count(6, 23, "3planar")
    with pytest.raises(UnknownClass):
        min_config_count(6, 10, "4planar")


@pytest.mark.parametrize("n", [5, 8, 11, 20, 44])
def test_min_config_count_extremes(n):
    assert min_config_count(n, 5 * (n - 2), "2planar") == math.ceil(F(2, 3) * (n - 2))
    if (n - 2) % 2 == 0:
        assert min_config_count(n, F(11, 2) * (n - 2), "3planar") == (n - 2) // 2


@settings(max_examples=100, deadline=None)
@given(st.integers(3, 200), st.integers(0, 2000), st.integers(1, 50))
def test_best_bound_monotone_in_m(n, m, step):
    assert best_crossing_lower_bound(n, m) <= best_crossing_lower_bound(n, m + step)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 500))
def test_cubic_branches_at_threshold(n):
    m_star = CUBIC.threshold * n
    pure, applies = cubic_bound(n, m_star)
    assert applies
    below, applies_below = cubic_bound(n, m_star - F(1, 10 ** 6))
    assert not applies_below and below < pure


@pytest.mark.parametrize("family", FAMILIES)
def test_simple_drawings_meet_bound(family):
    m = built(family)
    if is_simple_graph(m):
        assert m.stats.crossing_total >= best_crossing_lower_bound(m.n, m.m)


def test_bound_report():
    r = bound_report(6, 22)
    values = {b["name"]: b["value"] for b in r["bounds"]}
    assert values["5m-203/9(n-2)"] == "178/9"
    assert r["best"] == "194/9" and r["cubicApplies"] is False
    assert bound_report(10, 68)["cubicApplies"] is True
    assert bound_report(6, 15, k=2)["kPlanar"]["kappaSquared"] == "41209/3000"


class TestPeel:
    def test_doubled_f36(self):
        r = peel(built("doubled:f36"))
        assert (r.m5plus, r.m4, r.m3, r.partners_removed, r.m3minus) == (0, 0, 2, 4, 0)
        assert r.remaining == 16 and r.accounted
        assert r.lower_bound == 22 == r.crossings
        assert (r.c_pent, r.c_hex, r.m0) == (0, 0, 0)
        assert r.residual_lhs == r.residual_rhs == 0 and r.residual_holds

    def test_at_density(self):
        r = peel(built("doubled:f25"))
        assert r.fallback and (r.m5plus, r.m4, r.m3, r.m3minus) == (0, 0, 0, 0)
        assert r.lower_bound == F(10, 3) * 3

    def test_augmented_fallback(self):
        m = built("augmented:dodecahedron")
        r = peel(m)
        assert r.fallback and r.lower_bound == 32
        assert any("NotEnoughEdges" in note for note in r.notes)
        with pytest.raises(NotEnoughEdges):
            peel(m, strict=True)

    def test_optimal_dodecahedron(self):
        r = peel(built("optimal:dodecahedron"))
        assert r.lower_bound == 60 and r.c_pent == 12 and r.residual_holds

    def test_report_json(self):
        d = peel(built("doubled:f36")).to_dict()
        assert d["lowerBoundValue"] == "22/1" and "conditional" in d
        assert d["removed"]["m3"] and len(d["removed"]["partners"]) == 4

    def test_small_n(self):
        with pytest.raises(ValueError):
            peel(built("cycle:3").skeleton.map if False else _two_vertex_map())


def _two_vertex_map():
    from crossing_forge.planemap import validate
    return validate({"version": "crossing-forge/1",
                     "nodes": [{"id": "u", "kind": "real"}, {"id": "v", "kind": "real"}],
                     "rotations": {"u": ["a"], "v": ["b"]}, "twins": {"a": "b", "b": "a"}})


@pytest.mark.parametrize("seed", range(5))
def test_peel_ignores_labels(seed):
    from crossing_forge.canon import relabel
    r = peel(relabel(built("doubled:f36"), seed))
    assert (r.m3, r.partners_removed, r.m3minus, r.lower_bound) == (2, 4, 0, 22)
    assert not any("anomaly" in note for note in r.notes)


def test_constants_appear_in_source_text():
    from pathlib import Path
    text = Path(__file__).resolve().parents[1].joinpath("paper.md")
    if not text.exists():
        pytest.skip("reference text not shipped")
    body = text.read_text(encoding="utf-8")
    k = crossing_lemma_from_linear(5, F(203, 9))
    assert f"\\frac{{{k.c.numerator}}}{{{k.c.denominator}}}" in body
    assert f"\\frac{{{k.p_star.numerator}}}{{{k.p_star.denominator}}}" in body
    assert "27.48" in body and "3.71" in body and "8.3n" in body
    from crossing_forge.bounds import CUBIC_CORRECTION
    assert f"\\frac{{{CUBIC_CORRECTION.numerator}}}{{{CUBIC_CORRECTION.denominator}}}" in body
