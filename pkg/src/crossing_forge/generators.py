"""Constructions of the tight drawings used as fixtures and witnesses.

Every construction starts from a crossing-free skeleton and draws straight
chord diagrams into selected faces (see :func:`drawing.fill_faces`).  All
outputs are deterministic.
"""

from __future__ import annotations

from enum import Enum

import networkx as nx

from .drawing import ChordFill, Drawing, fill_faces, planarize
from .errors import NotAPentagonalization
from .planemap import CombinatorialMap, Kind


class ConfigKind(str, Enum):
    F25 = "F25"
    F26 = "F26"
    F36 = "F36"

    @property
    def p(self) -> int:
        return 5 if self is ConfigKind.F25 else 6

    @property
    def k(self) -> int:
        return 3 if self is ConfigKind.F36 else 2

    @classmethod
    def parse(cls, text) -> ConfigKind:
        if isinstance(text, cls):
            return text
        return cls(str(text).upper())


def template_chords(kind: ConfigKind | str) -> list[tuple[int, int]]:
    """Inner edges of a full configuration as pairs of boundary positions."""
    kind = ConfigKind.parse(kind)
    p = kind.p
    hops = [tuple(sorted((i, (i + 2) % p))) for i in range(p)]
    if kind is ConfigKind.F36:
        hops += [(0, 3), (1, 4)]
    return hops


def _cycle_drawing(p: int) -> Drawing:
    names = [f"v{i}" for i in range(p)]
    paths, rotations = {}, {v: [] for v in names}
    for i in range(p):
        u, v = names[i], names[(i + 1) % p]
        e = f"{u}-{v}"
        paths[e] = (u, v)
        rotations[u].append((e, 1))
        rotations[v].append((e, -1))
    return Drawing({v: Kind.REAL for v in names}, paths, rotations)


def gen_planar_cycle(p: int) -> CombinatorialMap:
    if p < 3:
        raise ValueError("a planar cycle needs p >= 3")
    return planarize(_cycle_drawing(p))


def gen_full_config(kind: ConfigKind | str) -> CombinatorialMap:
    """The configuration drawn inside its boundary cycle, boundary present."""
    kind = ConfigKind.parse(kind)
    base = gen_planar_cycle(kind.p)
    return fill_faces(base, [ChordFill(base.faces[0], template_chords(kind), "f0:")])


def gen_doubled(kind: ConfigKind | str) -> CombinatorialMap:
    """The configuration drawn on both sides of its boundary cycle."""
    kind = ConfigKind.parse(kind)
    base = gen_planar_cycle(kind.p)
    chords = template_chords(kind)
    return fill_faces(base, [ChordFill(f, chords, f"f{f.id}:") for f in base.faces])


def dodecahedron() -> CombinatorialMap:
    """Plane dodecahedron, the built-in pentagonalization (n=20, 12 faces)."""
    g = nx.dodecahedral_graph()
    planar, emb = nx.check_planarity(g)
    assert planar
    name = {v: f"v{v}" for v in g}
    paths, rotations = {}, {}
    for a, b in g.edges:
        u, v = sorted((a, b))
        paths[f"v{u}-v{v}"] = (name[u], name[v])
    for v in g:
        # networkx lists neighbours clockwise
        ends = []
        for w in reversed(list(emb.neighbors_cw_order(v))):
            u, x = sorted((v, w))
            ends.append((f"v{u}-v{x}", 1 if v == u else -1))
        rotations[name[v]] = ends
    return planarize(Drawing({name[v]: Kind.REAL for v in g}, paths, rotations))


BASES = {"dodecahedron": dodecahedron, "c5": lambda: gen_planar_cycle(5)}


def _resolve_base(base) -> CombinatorialMap:
    if isinstance(base, CombinatorialMap):
        return base
    try:
        return BASES[str(base).lower()]()
    except KeyError:
        raise ValueError(f"unknown base {base!r}; choose from {sorted(BASES)}") from None


def check_pentagonalization(base: CombinatorialMap) -> None:
    if base.n != len(base.node_ids):
        raise NotAPentagonalization("base drawing has crossings")
    for f in base.faces:
        if f.size != 5 or f.distinct_real_count != 5:
            raise NotAPentagonalization(
                f"face {f.id} is a {f.size}-gon with {f.distinct_real_count} distinct vertices")


def gen_optimal_2planar(base="dodecahedron") -> CombinatorialMap:
    """Full 2-planar pentagon in every face of a pentagonalization."""
    base = _resolve_base(base)
    check_pentagonalization(base)
    chords = template_chords(ConfigKind.F25)
    return fill_faces(base, [ChordFill(f, chords, f"f{f.id}:") for f in base.faces])


def gen_pentagonalization_augmented(base="dodecahedron") -> CombinatorialMap:
    """Four of the five 2-hop chords in every face of a pentagonalization.

    The omitted chord is the one whose pair of boundary vertex ids is
    lexicographically least.
    """
    base = _resolve_base(base)
    check_pentagonalization(base)
    fills = []
    for f in base.faces:
        walk = [base.origin(d) for d in f.darts]
        chords = template_chords(ConfigKind.F25)
        drop = min(chords, key=lambda c: tuple(sorted((walk[c[0]], walk[c[1]]))))
        fills.append(ChordFill(f, [c for c in chords if c != drop], f"f{f.id}:"))
    return fill_faces(base, fills)


def generate(family: str) -> CombinatorialMap:
    """Build a drawing from a family spec such as ``doubled:f36`` or ``cycle:5``."""
    name, _, arg = family.partition(":")
    name = name.lower()
    if name in ("full", "full-config"):
        return gen_full_config(arg)
    if name == "doubled":
        return gen_doubled(arg)
    if name in ("augmented", "pentagonalization-augmented"):
        return gen_pentagonalization_augmented(arg or "dodecahedron")
    if name in ("optimal", "optimal-2planar"):
        return gen_optimal_2planar(arg or "dodecahedron")
    if name in ("cycle", "planar-cycle"):
        return gen_planar_cycle(int(arg))
    raise ValueError(f"unknown family {family!r}")
