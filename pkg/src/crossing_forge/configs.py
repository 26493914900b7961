"""Detection and removal of the full configurations F25, F26 and F36.

A configuration is found by growing a dart correspondence from a template
anchor face into the host map.  Twins must map to twins, whole rotations at
crossings must agree, and inner edges that are consecutive around a
boundary vertex must stay consecutive there.  Boundary edges are not part of
the match because they may be missing in the host.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .canon import mirror
from .drawing import delete_edges
from .errors import InvariantFailure
from .generators import ConfigKind, gen_full_config, gen_planar_cycle, template_chords
from .planemap import CombinatorialMap, Face, r_neighbors, wedge_neighbor

__all__ = [
    "ConfigKind", "ConfigInstance", "Template", "canonical_template", "detect",
    "is_free", "break_configs", "signature_faces", "F36_PARTNER_TRIPLES",
]

# Pairwise non-crossing 3-crossing chords of F36, by boundary position.
F36_PARTNER_TRIPLES = (((0, 2), (0, 3), (3, 5)), ((1, 5), (1, 4), (2, 4)))


@dataclass(frozen=True)
class Template:
    kind: ConfigKind
    map: CombinatorialMap
    boundary: tuple[str, ...]
    chord_of_edge: dict[str, tuple[int, int]]
    inner_darts: frozenset[str]
    anchor_class: tuple[int, int]

    def anchor_dart(self) -> str:
        face = min((f for f in self.map.faces if f.cls == self.anchor_class), key=lambda f: f.id)
        return face.darts[0]


@lru_cache(maxsize=None)
def _template(kind: ConfigKind) -> Template:
    t = gen_full_config(kind)
    base = gen_planar_cycle(kind.p)
    # same walk the generator used to number chord positions
    boundary = tuple(base.origin(d) for d in base.faces[0].darts)
    pos = {v: i for i, v in enumerate(boundary)}
    chord_of_edge = {}
    inner = set()
    chords = set(template_chords(kind))
    for e in t.edges:
        pair = tuple(sorted((pos[e.endpoints[0]], pos[e.endpoints[1]])))
        if e.crossing_count == 0 and (pair[1] - pair[0]) % kind.p in (1, kind.p - 1):
            continue
        assert pair in chords
        chord_of_edge[e.id] = pair
        for d in e.darts:
            inner.update((d, t.twin(d)))
    anchor = (0, 5) if kind is not ConfigKind.F26 else (0, 6)
    return Template(kind, t, boundary, chord_of_edge, frozenset(inner), anchor)


def canonical_template(kind: ConfigKind | str) -> CombinatorialMap:
    """Standalone map of a configuration inside its (present) boundary cycle."""
    return _template(ConfigKind.parse(kind)).map


@dataclass(frozen=True)
class ConfigInstance:
    kind: ConfigKind
    inner_edges: frozenset[str]
    boundary_cycle: tuple[str, ...]
    present_boundary_edges: tuple[str, ...]
    anchor_faces: tuple[int, ...]
    chord_edges: dict[tuple[int, int], str] = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "innerEdges": sorted(self.inner_edges),
            "boundaryCycle": list(self.boundary_cycle),
            "presentBoundaryEdges": list(self.present_boundary_edges),
            "anchorFaces": list(self.anchor_faces),
        }


def _match(t: CombinatorialMap, tpl: Template, host: CombinatorialMap,
           a0: str, h0: str) -> dict[str, str] | None:
    """Grow the dart correspondence ``a0 -> h0``; None if it breaks."""
    dmap = {a0: h0}
    used = {h0}
    nmap: dict[str, str] = {}
    nused: set[str] = set()
    stack = [a0]

    def bind(a: str, h: str) -> bool:
        if a in dmap:
            return dmap[a] == h
        if h in used:
            return False
        dmap[a] = h
        used.add(h)
        stack.append(a)
        return True

    while stack:
        a = stack.pop()
        h = dmap[a]
        u, hu = t.origin(a), host.origin(h)
        if u in nmap:
            if nmap[u] != hu:
                return None
        else:
            if hu in nused or t.is_real(u) != host.is_real(hu):
                return None
            nmap[u] = hu
            nused.add(hu)
        if not bind(t.twin(a), host.twin(h)):
            return None
        if t.is_real(u):
            nxt, prv = t.rot_next(a), t.rot_prev(a)
            if nxt in tpl.inner_darts and not bind(nxt, host.rot_next(h)):
                return None
            if prv in tpl.inner_darts and not bind(prv, host.rot_prev(h)):
                return None
        else:
            if host.degree(hu) != 4:
                return None
            if not bind(t.rot_next(a), host.rot_next(h)):
                return None
    if set(dmap) != tpl.inner_darts:
        return None
    return dmap


def _instance(tpl: Template, t: CombinatorialMap, host: CombinatorialMap,
              dmap: dict[str, str]) -> ConfigInstance:
    nmap = {t.origin(a): host.origin(h) for a, h in dmap.items()}
    chord_edges = {}
    for eid, pair in tpl.chord_of_edge.items():
        chord_edges[pair] = host.edge_of(dmap[t.edge(eid).darts[0]]).id
    present = []
    for f in t.faces:
        if f.cls == (tpl.kind.p, tpl.kind.p):
            continue
        outside = [d for d in f.darts if d not in tpl.inner_darts]
        if len(outside) != 1:
            continue
        b = outside[0]
        hf = host.face_of(dmap[next(d for d in f.darts if d in tpl.inner_darts)])
        images = {dmap[d] for d in f.darts if d in tpl.inner_darts}
        extra = [x for x in hf.darts if x not in images]
        if (hf.size == f.size and len(extra) == 1 and host.dart_class(extra[0]) == 2
                and host.origin(extra[0]) == nmap[t.origin(b)]
                and host.target(extra[0]) == nmap[t.target(b)]):
            present.append(host.edge_of(extra[0]).id)
    anchors = sorted({host.face_of(dmap[d]).id for f in t.faces if f.cls == tpl.anchor_class
                      for d in f.darts})
    return ConfigInstance(
        kind=tpl.kind,
        inner_edges=frozenset(chord_edges.values()),
        boundary_cycle=tuple(nmap[v] for v in tpl.boundary),
        present_boundary_edges=tuple(sorted(present)),
        anchor_faces=tuple(anchors),
        chord_edges=chord_edges,
    )


def detect(m: CombinatorialMap, kind: ConfigKind | str) -> list[ConfigInstance]:
    """All occurrences of ``kind`` in ``m``, one per inner-edge set."""
    kind = ConfigKind.parse(kind)
    tpl = _template(kind)
    variants = [tpl.map, mirror(tpl.map)]
    a0 = tpl.anchor_dart()
    found: dict[frozenset[str], ConfigInstance] = {}
    for f in m.faces:
        if f.cls != tpl.anchor_class:
            continue
        for h0 in f.darts:
            for t in variants:
                dmap = _match(t, tpl, m, a0, h0)
                if dmap is None:
                    continue
                inst = _instance(tpl, t, m, dmap)
                found.setdefault(inst.inner_edges, inst)
    out = sorted(found.values(), key=lambda i: sorted(i.inner_edges))
    if m.stats.max_crossings_per_edge <= kind.k:
        seen: set[str] = set()
        for inst in out:
            if seen & inst.inner_edges:
                raise InvariantFailure(f"{kind.value} instances share inner edges in a "
                                       f"{kind.k}-planar map")
            seen |= inst.inner_edges
    return out


def is_free(m: CombinatorialMap, kind: ConfigKind | str) -> bool:
    return not detect(m, kind)


def break_configs(m: CombinatorialMap, kind: ConfigKind | str) -> CombinatorialMap:
    """Delete the least-id inner edge of every detected instance (one pass)."""
    doomed = {min(inst.inner_edges) for inst in detect(m, kind)}
    if not doomed:
        return m
    return delete_edges(m, doomed)


def signature_faces(m: CombinatorialMap, kind: ConfigKind | str) -> list[Face]:
    """Fast face-signature filter.

    F25 and F26: 0-pentagons resp. 0-hexagons whose wedge-neighbors are all
    1-triangles.  F36: such 0-pentagons that share a 0-quadrilateral
    0-neighbor with another one.
    """
    kind = ConfigKind.parse(kind)
    size = 6 if kind is ConfigKind.F26 else 5
    out = []
    for f in m.faces:
        if f.cls != (0, size):
            continue
        wn = [wedge_neighbor(m, f, d) for d in f.darts]
        if all(w is not None and w.cls == (1, 3) for w in wn):
            out.append(f)
    if kind is not ConfigKind.F36:
        return out
    marked = {f.id for f in out}

    def partners(f: Face) -> set[int]:
        found = set()
        for _, q in r_neighbors(m, f, 0):
            if q.cls == (0, 4):
                found |= {g.id for _, g in r_neighbors(m, q, 0) if g.id in marked and g.id != f.id}
        return found

    return [f for f in out if partners(f)]
