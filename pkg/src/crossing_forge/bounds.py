"""Density caps, configuration counts and crossing-number lower bounds.

All arithmetic is exact.  Floats only appear in fields named ``display``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .configs import F36_PARTNER_TRIPLES, ConfigKind, detect
from .drawing import _edge_names, delete_edges
from .errors import BeyondDensity, KTooSmall, NonpositiveCoefficient, NotEnoughEdges, UnknownClass
from .planemap import CombinatorialMap, is_simple_graph
from .rational import fmt

F = Fraction


@dataclass(frozen=True)
class LinearBound:
    """``cr(G) >= a*m - b*(n-2)``."""

    a: Fraction
    b: Fraction
    name: str
    provenance: str = ""

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise NonpositiveCoefficient(f"linear bound needs a, b > 0, got {self.a}, {self.b}")

    def value(self, n, m) -> Fraction:
        return self.a * m - self.b * (n - 2)


_BUILTIN = (
    LinearBound(F(1), F(3), "m-3(n-2)", "planar edge removal"),
    LinearBound(F(7, 3), F(25, 3), "7/3m-25/3(n-2)", "1-planar density"),
    LinearBound(F(37, 9), F(155, 9), "37/9m-155/9(n-2)", "3-planar peel"),
    LinearBound(F(5), F(203, 9), "5m-203/9(n-2)", "4-planar peel"),
)


def builtin_linear_bounds() -> list[LinearBound]:
    return list(_BUILTIN)


@dataclass(frozen=True)
class CrossingLemmaConstant:
    a: Fraction
    b: Fraction
    c: Fraction
    p_star: Fraction

    @property
    def threshold(self) -> Fraction:
        """m/n ratio from which the sampling probability ``p_star*n/m`` is at most 1."""
        return self.p_star

    @property
    def reciprocal(self) -> Fraction:
        return 1 / self.c


def crossing_lemma_from_linear(a, b) -> CrossingLemmaConstant:
    """Constant of the cubic bound obtained by random sampling from ``a*m - b*n``.

    Sampling vertices with probability ``p`` turns the linear bound into
    ``a*m/p^2 - b*n/p^3``; with ``p = x*n/m`` this is ``(a/x^2 - b/x^3) m^3/n^2``,
    maximised at ``x = 3b/(2a)``.
    """
    a, b = Fraction(a), Fraction(b)
    if a <= 0 or b <= 0:
        raise NonpositiveCoefficient(f"need a, b > 0, got a={a}, b={b}")
    c = 4 * a ** 3 / (27 * b ** 2)
    x = 3 * b / (2 * a)
    assert a / x ** 2 - b / x ** 3 == c
    return CrossingLemmaConstant(a, b, c, x)


CUBIC = crossing_lemma_from_linear(5, F(203, 9))
CUBIC_CORRECTION = F(54791, 41209)


def cubic_bound(n, m) -> tuple[Fraction, bool]:
    """Cubic lower bound and whether the pure (uncorrected) form applies."""
    n, m = F(n), F(m)
    pure = m >= CUBIC.threshold * n
    value = CUBIC.c * m ** 3 / n ** 2
    if not pure:
        value -= CUBIC_CORRECTION * n
    return value, pure


def best_crossing_lower_bound(n, m) -> Fraction:
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    candidates = [F(0), cubic_bound(n, m)[0]]
    candidates += [lb.value(n, m) for lb in _BUILTIN]
    return max(candidates)


def bound_report(n: int, m: int, k: int | None = None, simple: bool = True) -> dict:
    cubic, pure = cubic_bound(n, m)
    bounds = [{"name": lb.name, "value": fmt(lb.value(n, m))} for lb in _BUILTIN]
    bounds.append({"name": "cubic" if pure else "cubic-corrected", "value": fmt(cubic)})
    caveats = [] if simple else ["simple-only: bounds are stated for simple graphs"]
    report = {"n": n, "m": m, "bounds": bounds, "best": fmt(best_crossing_lower_bound(n, m)),
              "cubicApplies": pure, "caveats": caveats}
    if k is not None:
        cap = k_planar_density_cap(k)
        report["kPlanar"] = cap.to_dict()
        if m > cap.display * n:
            report["caveats"].append(f"m exceeds the {k}-planar density cap")
    return report


# -- density ---------------------------------------------------------------


def kappa_squared(c=CUBIC.c) -> Fraction:
    """Coefficient with ``m^2 <= k * kappa^2 * n^2`` from ``c m^3/n^2 <= k m / 2``."""
    c = Fraction(c)
    if c <= 0:
        raise NonpositiveCoefficient("crossing-lemma constant must be positive")
    return 1 / (2 * c)


@dataclass(frozen=True)
class KPlanarCap:
    k: int
    kappa_squared: Fraction

    @property
    def cap_squared(self) -> Fraction:
        return self.k * self.kappa_squared

    @property
    def kappa(self) -> float:
        return math.sqrt(self.kappa_squared)

    @property
    def display(self) -> float:
        """Cap on m/n, rounded through float."""
        return math.sqrt(self.cap_squared)

    def to_dict(self) -> dict:
        return {"k": self.k, "kappaSquared": fmt(self.kappa_squared),
                "capSquared": fmt(self.cap_squared),
                "display": {"kappa": round(self.kappa, 6), "cap": round(self.display, 6)}}


def k_planar_density_cap(k: int, c=CUBIC.c) -> KPlanarCap:
    if k < 2:
        raise KTooSmall(f"the crossing-lemma cap needs k >= 2, got {k}")
    return KPlanarCap(k, kappa_squared(c))


@dataclass(frozen=True)
class AffineBound:
    """``slope * n + intercept``."""

    slope: Fraction
    intercept: Fraction
    name: str

    def __call__(self, n) -> Fraction:
        return self.slope * n + self.intercept

    def to_dict(self) -> dict:
        return {"class": self.name, "slope": fmt(self.slope), "intercept": fmt(self.intercept)}


def _per_n_minus_2(q) -> tuple[Fraction, Fraction]:
    return F(q), -2 * F(q)


_CAPS = {
    "planar": _per_n_minus_2(3),
    "1planar": _per_n_minus_2(4),
    "2planar": _per_n_minus_2(5),
    "2planar-F25free": _per_n_minus_2(F(9, 2)),
    "2planar-F25F26free": _per_n_minus_2(F(13, 3)),
    "3planar-F36free": _per_n_minus_2(5),
    "3planar-nonsimple": _per_n_minus_2(F(11, 2)),
    "3planar-simple": (F(11, 2), F(-12)),
    "4planar": _per_n_minus_2(6),
}

DENSITY_CLASSES = tuple(_CAPS)


def density_cap(cls: str) -> AffineBound:
    key = next((k for k in _CAPS if k.lower() == str(cls).lower()), None)
    if key is None:
        raise UnknownClass(f"unknown class {cls!r}; choose from {', '.join(_CAPS)}")
    slope, intercept = _CAPS[key]
    return AffineBound(slope, intercept, key)


_CONFIG_RANGES = {
    "2planar": (F(13, 3), F(5)),
    "3planar": (F(5), F(11, 2)),
}


def min_config_count(n: int, m: int, cls: str) -> int:
    """Forced number of full configurations (F25+F26, resp. F36) once ``m``
    exceeds the configuration-free density."""
    try:
        base, top = _CONFIG_RANGES[cls]
    except KeyError:
        raise UnknownClass(f"class must be 2planar or 3planar, got {cls!r}") from None
    if m > top * (n - 2):
        raise BeyondDensity(f"m={m} exceeds {fmt(top)}(n-2) = {fmt(top * (n - 2))}; "
                            f"no {cls} drawing exists")
    return max(0, math.ceil(m - base * (n - 2)))


# -- peel ------------------------------------------------------------------


@dataclass
class PeelReport:
    n: int
    m: int
    crossings: int
    m5plus: int = 0
    m4: int = 0
    m3: int = 0
    partners_removed: int = 0
    m3minus: int = 0
    remaining: int = 0
    c_pent: int = 0
    c_hex: int = 0
    m0: int = 0
    lower_bound: Fraction = F(0)
    fallback: bool = False
    removed: dict[str, list[str]] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def residual_lhs(self) -> Fraction:
        return F(self.c_pent + self.c_hex)

    @property
    def residual_rhs(self) -> Fraction:
        return F(2, 3) * (self.n - 2) - F(4, 3) * self.m3 - self.m3minus + self.m0

    @property
    def residual_holds(self) -> bool:
        return self.residual_lhs >= self.residual_rhs

    @property
    def accounted(self) -> bool:
        return (self.m5plus + self.m4 + self.m3 + self.partners_removed + self.m3minus
                + self.remaining) == self.m

    def to_dict(self) -> dict:
        return {
            "n": self.n, "m": self.m, "crossings": self.crossings,
            "m5plus": self.m5plus, "m4": self.m4, "m3": self.m3,
            "partnersRemoved": self.partners_removed, "m3minus": self.m3minus,
            "remaining": self.remaining, "cPent": self.c_pent, "cHex": self.c_hex, "m0": self.m0,
            "lowerBoundValue": fmt(self.lower_bound),
            "conditional": "valid for cr(G) only if the input drawing is crossing-minimal",
            "fallback": self.fallback,
            "residualInequality": {"lhs": fmt(self.residual_lhs), "rhs": fmt(self.residual_rhs),
                       "holds": self.residual_holds},
            "accounted": self.accounted,
            "removed": self.removed,
            "notes": self.notes,
        }


def _max_edge(m: CombinatorialMap):
    top = m.stats.max_crossings_per_edge
    return min((e for e in m.edges if e.crossing_count == top), key=lambda e: e.id), top


def peel(m: CombinatorialMap, strict: bool = False) -> PeelReport:
    """Delete heavily crossed edges in the phases of the 4-planar argument and
    evaluate the resulting lower bound on the number of crossings."""
    n = m.n
    if n <= 2:
        raise ValueError("peel needs n > 2")
    rep = PeelReport(n=n, m=m.m, crossings=m.stats.crossing_total)
    if not is_simple_graph(m):
        rep.notes.append("simple-only: the input has parallel edges")
    target = 5 * (n - 2)
    if m.m <= target:
        if strict:
            raise NotEnoughEdges(f"m={m.m} <= 5(n-2)={target}")
        rep.fallback = True
        rep.remaining = m.m
        rep.lower_bound = F(7, 3) * m.m - F(25, 3) * (n - 2)
        rep.notes.append(f"NotEnoughEdges: m <= 5(n-2) = {target}; fallback 7/3m-25/3(n-2)")
        _residual(rep, m)
        return rep

    removed = {"m5plus": [], "m4": [], "m3": [], "partners": [], "m3minus": []}
    cur = m
    while cur.m > target and cur.stats.max_crossings_per_edge >= 4:
        e, top = _max_edge(cur)
        removed["m5plus" if top >= 5 else "m4"].append(e.id)
        cur = delete_edges(cur, [e.id])

    partners: list[str] = []
    while cur.m > target and cur.stats.max_crossings_per_edge == 3:
        instances = detect(cur, ConfigKind.F36)
        if not instances:
            rep.notes.append("anomaly: edges with 3 crossings remain but no F36 configuration")
            break
        inst = instances[0]
        pair_of = {eid: pair for pair, eid in inst.chord_edges.items()}
        heavy = sorted(eid for eid in inst.inner_edges if cur.edge(eid).crossing_count == 3)
        victim = heavy[0]
        triple = next(t for t in F36_PARTNER_TRIPLES if pair_of[victim] in t)
        partners.extend(inst.chord_edges[p] for p in triple if p != pair_of[victim])
        removed["m3"].append(victim)
        cur = delete_edges(cur, [victim])

    # ids recorded before a deletion may have lost or gained the ".0" suffix since
    ids = [e.id for e in cur.edges]
    live = set(ids) | set(_edge_names(ids).values())
    alive = [p for p in partners if p in live]
    if len(alive) != len(partners):
        rep.notes.append("anomaly: some partner edges were already removed")
    if alive:
        removed["partners"] = alive
        cur = delete_edges(cur, alive)

    while cur.stats.max_crossings_per_edge >= 3:
        e, _ = _max_edge(cur)
        removed["m3minus"].append(e.id)
        cur = delete_edges(cur, [e.id])

    rep.m5plus, rep.m4, rep.m3 = len(removed["m5plus"]), len(removed["m4"]), len(removed["m3"])
    rep.partners_removed, rep.m3minus = len(removed["partners"]), len(removed["m3minus"])
    rep.remaining = cur.m
    rep.removed = removed
    rep.lower_bound = (5 * rep.m5plus + 4 * rep.m4 + F(13, 3) * rep.m3
                       + F(2, 3) * rep.m3minus + F(10, 3) * (n - 2))
    _residual(rep, cur)
    if rep.lower_bound > rep.crossings:
        rep.notes.append("lower bound exceeds the crossings of this drawing: "
                         "the input is not crossing-minimal for its graph")
    return rep


def _residual(rep: PeelReport, cur: CombinatorialMap) -> None:
    if cur.stats.max_crossings_per_edge > 2:
        return
    pents, hexes = detect(cur, ConfigKind.F25), detect(cur, ConfigKind.F26)
    rep.c_pent, rep.c_hex = len(pents), len(hexes)
    rep.m0 = sum(inst.kind.p - len(inst.present_boundary_edges) for inst in pents + hexes)
