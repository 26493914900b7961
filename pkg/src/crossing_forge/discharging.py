"""Charge assignment, step-synchronous redistribution and verification.

Each face starts with ``|f| + |V(f)| - 4``; the charges always sum to
``4n - 8``.  A :class:`Scheme` moves charge between faces in numbered steps.
Within one step all amounts are computed from the charges at the end of the
previous step and then applied together.  Everything is exact
(:class:`fractions.Fraction`).

Neighbor relations are counted per shared segment (r-neighbors), per 0-edge
(wedge-neighbors) and per crossing (vertex-neighbors), so a face adjacent
twice is served twice.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .errors import InvariantFailure
from .planemap import (
    CombinatorialMap,
    Face,
    is_two_connected,
    r_neighbors,
    vertex_neighbors,
    wedge_chain,
)
from .rational import fmt

FacePredicate = Callable[[Face], bool]


def _any(_: Face) -> bool:
    return True


def of_class(real_count: int, size: int) -> FacePredicate:
    def pred(f: Face) -> bool:
        return f.is_class(real_count, size)
    pred.__name__ = f"is_{real_count}_{size}"
    return pred


def of_classes(*classes: tuple[int, int]) -> FacePredicate:
    wanted = set(classes)

    def pred(f: Face) -> bool:
        return f.cls in wanted
    return pred


@dataclass(frozen=True)
class Amount:
    """How much moves per (donor, recipient) pair.

    ``fixed``: ``value`` per pair.  ``demand``: the recipient's demand split
    over its donors.  ``excess``: the donor's excess split equally, capped at
    ``value`` per recipient when a cap is given.  ``forward``: what the donor
    received in the previous step, split equally.
    """

    kind: str
    value: Fraction | None = None

    @staticmethod
    def fixed(q) -> Amount:
        return Amount("fixed", Fraction(q))

    @staticmethod
    def capped(cap) -> Amount:
        return Amount("excess", Fraction(cap))


DEMAND = Amount("demand")
EXCESS = Amount("excess")
FORWARD = Amount("forward")


@dataclass(frozen=True)
class Rule:
    """One discharging step.

    In ``receive`` mode each subject face pulls from its partners; in
    ``give`` mode each subject face pushes to its partners.  ``partners``
    names the relation: ``wedge``, ``0``, ``1``, ``vertex`` or ``region``
    (other faces inside the same skeleton face).
    """

    label: str
    mode: str
    subject: FacePredicate
    partners: str
    amount: Amount
    partner_filter: FacePredicate = _any
    subject_needs_demand: bool = False
    partners_need_demand: bool = False
    description: str = ""


@dataclass(frozen=True)
class Scheme:
    name: str
    alpha: Fraction
    rules: tuple[Rule, ...]


@dataclass(frozen=True)
class Transfer:
    source: int
    target: int
    amount: Fraction

    def to_dict(self) -> dict:
        return {"from": self.source, "to": self.target, "amount": fmt(self.amount)}


@dataclass(frozen=True)
class RuleInapplicable:
    """Diagnostic recorded when a rule meets a situation the proofs exclude."""

    step: str
    face: int
    reason: str

    def to_dict(self) -> dict:
        return {"step": self.step, "face": self.face, "reason": self.reason}


@dataclass(frozen=True)
class ChargeVector:
    charges: Mapping[int, Fraction]
    step: str
    real_counts: Mapping[int, int]
    n: int

    @property
    def total(self) -> Fraction:
        return sum(self.charges.values(), Fraction(0))

    def __getitem__(self, face_id: int) -> Fraction:
        return self.charges[face_id]

    def to_dict(self) -> dict:
        return {"step": self.step, "charges": {str(k): fmt(v) for k, v in sorted(self.charges.items())}}


@dataclass
class StepTrace:
    steps: list[tuple[str, list[Transfer]]] = field(default_factory=list)
    snapshots: list[ChargeVector] = field(default_factory=list)
    diagnostics: list[RuleInapplicable] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "steps": [{"step": label, "transfers": [t.to_dict() for t in ts]}
                      for label, ts in self.steps],
            "diagnostics": [d.to_dict() for d in self.diagnostics],
        }


# -- built-in schemes -----------------------------------------------------


def _two_planar_scheme(name: str, alpha: Fraction, step2: Fraction, step3: Fraction) -> Scheme:
    return Scheme(name, alpha, (
        Rule("1", "receive", of_class(0, 3), "wedge", Amount.fixed(Fraction(1, 3)),
             description="0-triangle receives 1/3 from each wedge-neighbor"),
        Rule("2", "receive", of_class(1, 3), "1", Amount.fixed(step2),
             description=f"1-triangle receives {step2} per shared 1-edge"),
        Rule("3", "receive", of_class(1, 3), "wedge", Amount.fixed(step3),
             description=f"1-triangle receives {step3} from its wedge-neighbor"),
        Rule("4", "give", of_class(2, 4), "wedge", EXCESS,
             description="2-quadrilateral gives its excess to its wedge-neighbor"),
        Rule("5", "give", of_class(2, 3), "region", EXCESS, partners_need_demand=True,
             description="2-triangle splits its excess over demanding faces of its skeleton face"),
    ))


SCHEME_2P_F56 = _two_planar_scheme("2p-13/3", Fraction(6, 13), Fraction(1, 26), Fraction(5, 13))
SCHEME_2P_F5 = _two_planar_scheme("2p-9/2", Fraction(4, 9), Fraction(1, 18), Fraction(1, 3))

SCHEME_3P = Scheme("3p", Fraction(2, 5), (
    Rule("1", "receive", of_class(0, 3), "0", Amount.fixed(1), partner_filter=of_class(2, 4),
         description="0-triangle receives 1 from each 0-neighbor that is a 2-quadrilateral"),
    Rule("2", "receive", of_class(0, 3), "wedge", Amount.fixed(Fraction(1, 3)),
         subject_needs_demand=True,
         description="0-triangle with demand receives 1/3 from each wedge-neighbor"),
    Rule("3", "give", of_class(2, 3), "1", EXCESS, partner_filter=of_class(1, 3),
         description="2-triangle splits its excess over its 1-triangle 1-neighbors"),
    Rule("4", "receive", of_class(1, 3), "wedge", DEMAND,
         description="1-triangle receives its demand from its wedge-neighbor"),
    Rule("5", "give", _any, "wedge", Amount.capped(Fraction(3, 10)),
         partner_filter=of_class(0, 5),
         description="excess to 0-pentagon wedge-neighbors, at most 3/10 each"),
    Rule("6a", "give", _any, "vertex", EXCESS, partner_filter=of_classes((0, 4), (0, 5)),
         description="excess to 0-quadrilateral and 0-pentagon vertex-neighbors"),
    Rule("6b", "give", of_class(0, 4), "0", FORWARD, partners_need_demand=True,
         description="0-quadrilaterals forward what they received over demanding 0-neighbors"),
    Rule("7", "give", _any, "region", EXCESS, partners_need_demand=True,
         description="excess to demanding faces of the same skeleton face"),
))

SCHEMES = {s.name: s for s in (SCHEME_2P_F56, SCHEME_2P_F5, SCHEME_3P)}


def get_scheme(name: str) -> Scheme:
    try:
        return SCHEMES[name]
    except KeyError:
        raise ValueError(f"unknown scheme {name!r}; choose from {sorted(SCHEMES)}") from None


# -- execution -------------------------------------------------------------


def initial_charges(m: CombinatorialMap) -> ChargeVector:
    charges = {f.id: Fraction(f.size + f.real_count - 4) for f in m.faces}
    cv = ChargeVector(charges, "0", {f.id: f.real_count for f in m.faces}, m.n)
    if m.faces and cv.total != 4 * m.n - 8:
        raise InvariantFailure(f"initial charge {cv.total} != 4n-8 = {4 * m.n - 8}")
    return cv


class _Context:
    def __init__(self, m: CombinatorialMap, trace: StepTrace):
        self.m = m
        self.trace = trace
        self._cache: dict[tuple[str, int], list[Face]] = {}

    def partners(self, rel: str, f: Face, step: str) -> list[Face]:
        key = (rel, f.id)
        if key not in self._cache:
            self._cache[key] = self._compute(rel, f, step)
        return self._cache[key]

    def _compute(self, rel: str, f: Face, step: str) -> list[Face]:
        m = self.m
        if rel == "wedge":
            out = []
            for d, cls in zip(f.darts, f.edge_classes):
                if cls != 0:
                    continue
                chain = wedge_chain(m, f, d)
                if chain:
                    out.append(chain[-1])
                else:
                    self.trace.diagnostics.append(
                        RuleInapplicable(step, f.id, f"0-quadrilateral chain at dart {d} closes up"))
            return out
        if rel in ("0", "1", "2"):
            return [g for _, g in r_neighbors(m, f, int(rel))]
        if rel == "vertex":
            return [g for _, g in vertex_neighbors(m, f)]
        if rel == "region":
            sk = m.skeleton
            return [m.faces[g] for g in sk.region_faces(f) if g != f.id]
        raise ValueError(f"unknown partner relation {rel!r}")


def _step_transfers(ctx: _Context, rule: Rule, ch: Mapping[int, Fraction], alpha: Fraction,
                    received_last: Mapping[int, Fraction]) -> list[Transfer]:
    m = ctx.m

    def demand(f: Face) -> Fraction:
        return max(Fraction(0), alpha * f.real_count - ch[f.id])

    def excess(f: Face) -> Fraction:
        return max(Fraction(0), ch[f.id] - alpha * f.real_count)

    out: list[Transfer] = []
    for f in m.faces:
        if not rule.subject(f):
            continue
        if rule.subject_needs_demand and demand(f) <= 0:
            continue
        if rule.mode == "give" and rule.amount.kind == "excess" and excess(f) <= 0:
            continue
        if rule.mode == "give" and rule.amount.kind == "forward" and received_last.get(f.id, 0) <= 0:
            continue
        partners = [g for g in ctx.partners(rule.partners, f, rule.label)
                    if rule.partner_filter(g) and (not rule.partners_need_demand or demand(g) > 0)]
        if not partners:
            continue
        k = len(partners)
        kind = rule.amount.kind
        if rule.mode == "receive":
            if kind == "fixed":
                each = rule.amount.value
            elif kind == "demand":
                each = demand(f) / k
            else:
                raise ValueError(f"receive rules take fixed or demand amounts, not {kind}")
            out.extend(Transfer(g.id, f.id, each) for g in partners if each > 0)
        else:
            if kind == "fixed":
                each = rule.amount.value
            elif kind == "excess":
                each = excess(f) / k
                if rule.amount.value is not None:
                    each = min(rule.amount.value, each)
            elif kind == "forward":
                each = received_last[f.id] / k
            else:
                raise ValueError(f"give rules take fixed, excess or forward amounts, not {kind}")
            out.extend(Transfer(f.id, g.id, each) for g in partners if each > 0)
    return out


def run_scheme(m: CombinatorialMap, scheme: Scheme) -> tuple[ChargeVector, StepTrace]:
    """Apply every rule of ``scheme`` in order; returns final charges and the trace."""
    trace = StepTrace()
    ctx = _Context(m, trace)
    cv = initial_charges(m)
    trace.snapshots.append(cv)
    expected = cv.total
    ch = dict(cv.charges)
    received_last: dict[int, Fraction] = {}
    for rule in scheme.rules:
        transfers = _step_transfers(ctx, rule, ch, scheme.alpha, received_last)
        received: dict[int, Fraction] = defaultdict(Fraction)
        for t in transfers:
            ch[t.source] -= t.amount
            ch[t.target] += t.amount
            received[t.target] += t.amount
        total = sum(ch.values(), Fraction(0))
        if total != expected:
            raise InvariantFailure(f"step {rule.label} changed the total charge to {total}")
        for fid in sorted({t.source for t in transfers}):
            if ch[fid] < 0 and rule.amount.kind in ("fixed", "demand"):
                trace.diagnostics.append(RuleInapplicable(
                    rule.label, fid, f"donor charge became negative ({fmt(ch[fid])})"))
        received_last = dict(received)
        trace.steps.append((rule.label, transfers))
        cv = ChargeVector(dict(ch), rule.label, cv.real_counts, m.n)
        trace.snapshots.append(cv)
    return cv, trace


# -- verification ----------------------------------------------------------


@dataclass(frozen=True)
class FaceResult:
    face: int
    charge: Fraction
    target: Fraction

    @property
    def slack(self) -> Fraction:
        return self.charge - self.target

    def to_dict(self) -> dict:
        return {"face": self.face, "charge": fmt(self.charge), "target": fmt(self.target),
                "slack": fmt(self.slack)}


@dataclass(frozen=True)
class VerificationReport:
    scheme: str
    alpha: Fraction
    per_face: tuple[FaceResult, ...]
    violations: tuple[int, ...]
    total_charge: Fraction
    target_total: Fraction
    density_cap: Fraction | None
    n: int
    flags: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def tight(self) -> bool:
        return self.target_total == self.total_charge

    @property
    def all_exact(self) -> bool:
        return all(r.slack == 0 for r in self.per_face)

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "alpha": fmt(self.alpha),
            "n": self.n,
            "totalCharge": fmt(self.total_charge),
            "targetTotal": fmt(self.target_total),
            "derivedDensityCap": None if self.density_cap is None else fmt(self.density_cap),
            "violations": list(self.violations),
            "tight": self.tight,
            "allExact": self.all_exact,
            "flags": list(self.flags),
            "perFace": [r.to_dict() for r in self.per_face],
        }


def verify(final: ChargeVector, alpha, scheme: str = "", flags=()) -> VerificationReport:
    """Faces whose final charge is below ``alpha * |V(f)|``."""
    alpha = Fraction(alpha)
    per_face = tuple(FaceResult(fid, c, alpha * final.real_counts[fid])
                     for fid, c in sorted(final.charges.items()))
    violations = tuple(r.face for r in per_face if r.slack < 0)
    cap = None if alpha == 0 else (2 / alpha) * (final.n - 2)
    return VerificationReport(
        scheme=scheme,
        alpha=alpha,
        per_face=per_face,
        violations=violations,
        total_charge=final.total,
        target_total=sum((r.target for r in per_face), Fraction(0)),
        density_cap=cap,
        n=final.n,
        flags=tuple(flags),
    )


def discharge(m: CombinatorialMap, scheme: Scheme) -> tuple[VerificationReport, StepTrace]:
    """Run ``scheme`` and verify the result against its own ``alpha``."""
    final, trace = run_scheme(m, scheme)
    flags = []
    if not is_two_connected(m):
        flags.append("not 2-connected: |V(f)| counts boundary incidences")
    if trace.diagnostics:
        flags.append(f"{len(trace.diagnostics)} RuleInapplicable diagnostic(s)")
    return verify(final, scheme.alpha, scheme.name, flags), trace


# -- structural preconditions ---------------------------------------------


@dataclass(frozen=True)
class Check:
    passed: bool
    witnesses: tuple = ()

    def to_dict(self) -> dict:
        return {"passed": self.passed, "witnesses": list(self.witnesses)}


@dataclass(frozen=True)
class PreconditionReport:
    no_empty_lenses: Check
    min_face_size: Check
    wedge_neighbors: Check
    cofacial_vertices: Check
    two_connected: bool

    @property
    def passed(self) -> bool:
        return all(c.passed for c in (self.no_empty_lenses, self.min_face_size,
                                      self.wedge_neighbors, self.cofacial_vertices))

    def to_dict(self) -> dict:
        return {"a_no_empty_lenses": self.no_empty_lenses.to_dict(),
                "b_face_size_at_least_3": self.min_face_size.to_dict(),
                "c_wedge_neighbors": self.wedge_neighbors.to_dict(),
                "d_cofacial_vertices": self.cofacial_vertices.to_dict(),
                "two_connected": self.two_connected,
                "passed": self.passed}


def precondition_audit(m: CombinatorialMap) -> PreconditionReport:
    """Evaluate the structural properties that the discharging proofs rely on."""
    lenses = tuple(f.id for f in m.faces if f.size == 2)
    small = tuple(f.id for f in m.faces if f.size < 3)

    bad_wedges = []
    for f in m.faces:
        if f.cls not in ((0, 3), (1, 3)):
            continue
        for d, cls in zip(f.darts, f.edge_classes):
            if cls != 0:
                continue
            chain = wedge_chain(m, f, d)
            g = chain[-1] if chain else None
            if g is None or g.size < 4 or g.cls == (0, 4):
                bad_wedges.append({"face": f.id, "dart": d,
                                   "wedge_neighbor": None if g is None else g.id})

    bad_cofacial = []
    for f in m.faces:
        reals = {m.origin(d) for d in f.darts if m.is_real(m.origin(d))}
        if f.real_count > 2 and f.cls != (3, 3):
            bad_cofacial.append({"face": f.id, "reason": f"{f.label} with |V(f)| > 2"})
            continue
        joined = {frozenset((m.origin(d), m.target(d))) for d in f.darts if m.dart_class(d) == 2}
        rs = sorted(reals)
        for i, u in enumerate(rs):
            for v in rs[i + 1:]:
                if frozenset((u, v)) not in joined:
                    bad_cofacial.append({"face": f.id, "vertices": [u, v]})

    return PreconditionReport(
        no_empty_lenses=Check(not lenses, lenses),
        min_face_size=Check(not small, small),
        wedge_neighbors=Check(not bad_wedges, tuple(bad_wedges)),
        cofacial_vertices=Check(not bad_cofacial, tuple(bad_cofacial)),
        two_connected=is_two_connected(m),
    )
