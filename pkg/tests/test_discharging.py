from fractions import Fraction as F

import pytest

from conftest import FAMILIES, TIGHT, built, polyline_drawing, wedge_gadget
from crossing_forge.configs import break_configs, is_free
from crossing_forge.discharging import (
    DEMAND,
    EXCESS,
    SCHEME_2P_F5,
    SCHEME_2P_F56,
    SCHEME_3P,
    SCHEMES,
    Amount,
    Rule,
    Scheme,
    discharge,
    initial_charges,
    of_class,
    precondition_audit,
    run_scheme,
    verify,
)
from crossing_forge.planemap import is_k_planar, validate


def by_class(m, cv):
    out = {}
    for f in m.faces:
        out.setdefault(f.label, set()).add(cv[f.id])
    return out


def k4():
    pts = {"a": (0, 0), "b": (4, 0), "c": (2, 4), "d": (2, 1)}
    return polyline_drawing(pts, [("a", "b"), ("b", "c"), ("c", "a"), ("a", "d"),
                                  ("b", "d"), ("c", "d")])


class TestInitial:
    def test_triangle(self):
        cv = initial_charges(built("cycle:3"))
        assert sorted(cv.charges.values()) == [2, 2] and cv.total == 4

    def test_pentagon_charge_is_one(self):
        m = built("doubled:f25")
        cv = initial_charges(m)
        assert by_class(m, cv)["0-pentagon"] == {1}
        assert cv.total == 12

    def test_total(self, family_map):
        _, m = family_map
        assert initial_charges(m).total == 4 * m.n - 8


class TestSchemes:
    def test_doubled_c6_under_f5(self):
        m = built("doubled:f26")
        final, trace = run_scheme(m, SCHEME_2P_F5)
        assert by_class(m, final) == {"0-hexagon": {0}, "1-triangle": {F(4, 9)},
                                      "2-triangle": {F(8, 9)}}
        sizes = {label: len(ts) for label, ts in trace.steps}
        assert sizes == {"1": 0, "2": 24, "3": 12, "4": 0, "5": 0}
        assert {t.amount for t in dict(trace.steps)["2"]} == {F(1, 18)}
        assert {t.amount for t in dict(trace.steps)["3"]} == {F(1, 3)}

    def test_doubled_c5_under_3p(self):
        m = built("doubled:f25")
        final, trace = run_scheme(m, SCHEME_3P)
        assert by_class(m, final) == {"0-pentagon": {0}, "1-triangle": {F(2, 5)},
                                      "2-triangle": {F(4, 5)}}
        steps = dict(trace.steps)
        assert len(steps["3"]) == 20 and {t.amount for t in steps["3"]} == {F(1, 10)}
        assert len(steps["4"]) == 10 and {t.amount for t in steps["4"]} == {F(1, 5)}
        assert all(not steps[s] for s in ("1", "2", "5", "6a", "6b", "7"))

    def test_doubled_c5_under_f56(self):
        m = built("doubled:f25")
        final, _ = run_scheme(m, SCHEME_2P_F56)
        classes = by_class(m, final)
        assert classes["0-pentagon"] == {1 - F(25, 13)}
        assert classes["1-triangle"] == {F(6, 13)} and classes["2-triangle"] == {F(12, 13)}
        report = verify(final, SCHEME_2P_F56.alpha)
        pentagons = sorted(f.id for f in m.faces if f.cls == (0, 5))
        assert list(report.violations) == pentagons

    def test_augmented_dodecahedron_exact(self):
        m = built("augmented:dodecahedron")
        report, _ = discharge(m, SCHEME_2P_F56)
        assert report.ok and report.tight and report.all_exact
        assert report.target_total == 72

    def test_triangulation_untouched(self):
        m = k4()
        assert sorted(f.cls for f in m.faces) == [(3, 3)] * 4
        for scheme in SCHEMES.values():
            final, trace = run_scheme(m, scheme)
            assert all(not ts for _, ts in trace.steps)
            assert final.charges == initial_charges(m).charges

    def test_alpha_zero(self):
        final, _ = run_scheme(built("augmented:dodecahedron"), SCHEME_2P_F56)
        assert verify(final, 0).ok

    def test_broken_doubled_c5_satisfies_f56(self):
        m = break_configs(built("doubled:f25"), "F25")
        assert is_free(m, "F25")
        assert discharge(m, SCHEME_2P_F56)[0].ok

    def test_negative_donor_is_diagnosed(self):
        report, trace = discharge(built("doubled:f36"), SCHEME_3P)
        assert report.violations
        assert any("negative" in d.reason for d in trace.diagnostics)
        assert report.flags


@pytest.mark.parametrize("scheme", list(SCHEMES.values()), ids=list(SCHEMES))
@pytest.mark.parametrize("family", FAMILIES)
def test_conservation_and_donor_floor(family, scheme):
    m = built(family)
    final, trace = run_scheme(m, scheme)
    target = 4 * m.n - 8
    assert all(s.total == target for s in trace.snapshots)
    real = {f.id: f.real_count for f in m.faces}
    for (label, transfers), before, rule in zip(trace.steps, trace.snapshots, scheme.rules):
        assert all(t.amount > 0 for t in transfers)
        if rule.mode == "give" and rule.amount.kind == "excess":
            given = {}
            for t in transfers:
                given[t.source] = given.get(t.source, 0) + t.amount
            for fid, amount in given.items():
                assert before[fid] - amount >= scheme.alpha * real[fid]


@pytest.mark.parametrize("family", TIGHT)
def test_tight_and_satisfied_means_exact(family):
    m = built(family)
    for scheme in SCHEMES.values():
        report, _ = discharge(m, scheme)
        if report.ok and report.tight:
            assert report.all_exact


@pytest.mark.parametrize("family", FAMILIES)
def test_density_consequence(family):
    m = built(family)
    if not is_k_planar(m, 2):
        return
    report, _ = discharge(m, SCHEME_2P_F56)
    if report.ok:
        assert m.m <= report.density_cap == F(13, 3) * (m.n - 2)
    if precondition_audit(m).passed and is_free(m, "F25") and is_free(m, "F26"):
        assert report.ok


def test_report_json_uses_strings():
    report, trace = discharge(built("doubled:f26"), SCHEME_2P_F5)
    d = report.to_dict()
    assert d["alpha"] == "4/9" and d["derivedDensityCap"] == "18/1"
    step2 = trace.to_dict()["steps"][1]
    assert step2["step"] == "2"
    assert {t["amount"] for t in step2["transfers"]} == {"1/18"}


def test_custom_scheme():
    rule = Rule("only", "give", of_class(2, 3), "region", EXCESS, partners_need_demand=True)
    scheme = Scheme("custom", F(6, 13), (rule,))
    final, trace = run_scheme(built("doubled:f25"), scheme)
    assert final.total == 12 and trace.steps[0][1]


def test_rule_amount_mismatch():
    bad = Scheme("bad", F(1, 2), (Rule("x", "receive", of_class(1, 3), "1", EXCESS),))
    with pytest.raises(ValueError):
        run_scheme(built("doubled:f25"), bad)
    ok = Scheme("ok", F(1, 2), (Rule("x", "receive", of_class(1, 3), "1", DEMAND),))
    assert run_scheme(built("doubled:f25"), ok)[0].total == 12
    assert Amount.capped("3/10").value == F(3, 10)


class TestAudit:
    def test_lens(self):
        doc = {"version": "crossing-forge/1",
               "nodes": [{"id": "u", "kind": "real"}, {"id": "v", "kind": "real"}],
               "rotations": {"u": ["a", "b"], "v": ["a'", "b'"]},
               "twins": {"a": "a'", "a'": "a", "b": "b'", "b'": "b"}}
        report = precondition_audit(validate(doc))
        assert not report.no_empty_lenses.passed and not report.min_face_size.passed
        assert sorted(report.no_empty_lenses.witnesses) == [0, 1]

    def test_wedge_gadget(self):
        m = wedge_gadget()
        report = precondition_audit(m)
        assert not report.wedge_neighbors.passed
        pairs = {(m.faces[w["face"]].cls, m.faces[w["wedge_neighbor"]].cls)
                 for w in report.wedge_neighbors.witnesses}
        # the 1-triangle and the 0-triangle are each other's wedge-neighbors
        assert pairs == {((1, 3), (0, 3)), ((0, 3), (1, 3))}

    def test_planar_triangulation_passes(self):
        report = precondition_audit(k4())
        assert report.passed and report.two_connected

    def test_report_dict(self):
        d = precondition_audit(built("doubled:f25")).to_dict()
        assert d["passed"] is True and d["two_connected"] is True
