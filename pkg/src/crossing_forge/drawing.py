"""Edge-level view of a drawing and conversion to and from plane maps.

A :class:`Drawing` lists every edge as its path of nodes (real endpoint,
crossings in order, real endpoint) and gives, for each node, the
counterclockwise order of edge ends leaving it.  An edge end is a pair
``(edge_id, +1)`` for the direction towards the edge's last node and
``(edge_id, -1)`` towards its first node.

:func:`fill_faces` inserts straight chord diagrams into faces of a
crossing-free map.  The face boundary is placed in convex position, so the
crossing order along every chord comes from exact rational geometry.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Sequence

from .errors import SchemaError
from .planemap import CombinatorialMap, Face, Kind, build_map

EdgeEnd = tuple[str, int]


@dataclass
class Drawing:
    kinds: dict[str, Kind]
    paths: dict[str, tuple[str, ...]]
    rotations: dict[str, list[EdgeEnd]]
    labels: dict[str, str] = field(default_factory=dict)

    def copy(self) -> Drawing:
        return Drawing(dict(self.kinds), dict(self.paths),
                       {v: list(r) for v, r in self.rotations.items()}, dict(self.labels))


def _dart_name(edge: str, seg: int, forward: bool) -> str:
    return f"{edge}.{seg}" if forward else f"{edge}.{seg}r"


def planarize(drawing: Drawing) -> CombinatorialMap:
    """Build the validated plane map of ``drawing``."""
    position: dict[tuple[str, str], int] = {}
    for e, path in drawing.paths.items():
        if len(path) < 2:
            raise SchemaError(f"edge {e!r} has fewer than two nodes")
        for i, v in enumerate(path):
            if (e, v) in position:
                raise SchemaError(f"edge {e!r} visits node {v!r} twice", node=v)
            position[(e, v)] = i

    rotations: dict[str, list[str]] = {}
    for v, ends in drawing.rotations.items():
        rot = []
        for e, direction in ends:
            i = position.get((e, v))
            if i is None:
                raise SchemaError(f"node {v!r} lists edge {e!r} which does not pass it", node=v)
            if direction == 1:
                if i == len(drawing.paths[e]) - 1:
                    raise SchemaError(f"edge {e!r} ends at {v!r}; no forward end there", node=v)
                rot.append(_dart_name(e, i, True))
            else:
                if i == 0:
                    raise SchemaError(f"edge {e!r} starts at {v!r}; no backward end there", node=v)
                rot.append(_dart_name(e, i - 1, False))
        if drawing.kinds.get(v) is Kind.CROSSING and len(ends) == 4:
            if ends[0][0] != ends[2][0] or ends[1][0] != ends[3][0] or ends[0][0] == ends[1][0]:
                raise SchemaError(f"crossing {v!r} does not alternate two strands", node=v)
        rotations[v] = rot

    twins = {}
    for e, path in drawing.paths.items():
        for k in range(len(path) - 1):
            a, b = _dart_name(e, k, True), _dart_name(e, k, False)
            twins[a], twins[b] = b, a
    return build_map(drawing.kinds, rotations, twins, drawing.labels)


def extract(m: CombinatorialMap) -> Drawing:
    """Edge paths and edge-end rotations of a map (inverse of :func:`planarize`)."""
    paths = {}
    direction: dict[str, EdgeEnd] = {}
    names = _edge_names([e.id for e in m.edges])
    for e in m.edges:
        name = names[e.id]
        paths[name] = (e.endpoints[0], *e.crossings, e.endpoints[1])
        for d in e.darts:
            direction[d] = (name, 1)
            direction[m.twin(d)] = (name, -1)
    rotations = {v: [direction[d] for d in m.rotation(v)] for v in m.node_ids}
    kinds = {v: m.kind(v) for v in m.node_ids}
    return Drawing(kinds, paths, rotations, dict(m.labels))


def _edge_names(ids: list[str]) -> dict[str, str]:
    # undo the ".0" that planarize appends, so round trips keep edge names stable
    short = {i: i[:-2] if i.endswith(".0") else i for i in ids}
    if len(set(short.values())) == len(ids):
        return short
    return {i: i for i in ids}


def delete_edges(m: CombinatorialMap, edge_ids: Iterable[str]) -> CombinatorialMap:
    """Remove whole edges and re-planarize: crossings on them disappear."""
    drawing = extract(m)
    names = _edge_names([e.id for e in m.edges])
    doomed = {names.get(e, e) for e in edge_ids}
    missing = doomed - set(drawing.paths)
    if missing:
        raise KeyError(f"unknown edge id(s): {sorted(missing)}")
    dead_crossings = {c for e in doomed for c in drawing.paths[e][1:-1]}
    paths = {e: tuple(v for v in p if v not in dead_crossings)
             for e, p in drawing.paths.items() if e not in doomed}
    rotations = {v: [end for end in ends if end[0] not in doomed]
                 for v, ends in drawing.rotations.items() if v not in dead_crossings}
    kinds = {v: k for v, k in drawing.kinds.items() if v not in dead_crossings}
    return planarize(Drawing(kinds, paths, rotations, drawing.labels))


# -- straight chord diagrams inside convex faces --------------------------


Point = tuple[Fraction, Fraction]


def _cross(u: Point, v: Point) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


def _sub(a: Point, b: Point) -> Point:
    return (a[0] - b[0], a[1] - b[1])


def _interleaved(a: int, b: int, c: int, d: int) -> bool:
    if len({a, b, c, d}) < 4:
        return False
    lo, hi = min(a, b), max(a, b)
    return (lo < c < hi) != (lo < d < hi)


def _intersection(p: Point, q: Point, r: Point, s: Point) -> tuple[Fraction, Point]:
    """Parameter along ``p->q`` and location where it meets ``r->s``."""
    d1, d2 = _sub(q, p), _sub(s, r)
    t = _cross(_sub(r, p), d2) / _cross(d1, d2)
    return t, (p[0] + t * d1[0], p[1] + t * d1[1])


def convex_layout(p: int, chords: Sequence[tuple[int, int]]) -> list[Point]:
    """Counterclockwise convex positions for ``p`` boundary vertices in general
    position with respect to ``chords`` (no three chords through one point)."""
    rng = random.Random(p)
    pairs = [(x, y) for i, x in enumerate(chords) for y in chords[i + 1:]
             if _interleaved(*x, *y)]
    for _ in range(1000):
        ts = sorted(Fraction(rng.randint(0, 10 * p * p)) for _ in range(p))
        if len(set(ts)) < p:
            continue
        pts = [(t, t * t) for t in ts]
        spots = {_intersection(pts[a], pts[b], pts[c], pts[d])[1] for (a, b), (c, d) in pairs}
        if len(spots) == len(pairs):
            return pts
    raise RuntimeError("no general-position layout found")  # pragma: no cover


@dataclass
class ChordFill:
    """Chords to draw inside one face, as pairs of boundary positions."""

    face: Face
    chords: Sequence[tuple[int, int]]
    prefix: str


def fill_faces(base: CombinatorialMap, fills: Sequence[ChordFill]) -> CombinatorialMap:
    """Draw straight chord diagrams into faces of a crossing-free map."""
    drawing = extract(base)
    names = _edge_names([e.id for e in base.edges])
    for fill in fills:
        _fill_one(base, drawing, fill, names)
    return planarize(drawing)


def _fill_one(base: CombinatorialMap, drawing: Drawing, fill: ChordFill,
              edge_names: dict[str, str]) -> None:
    face = fill.face
    walk = [base.origin(d) for d in face.darts]
    p = len(walk)
    if len(set(walk)) != p:
        raise ValueError(f"face {face.id} does not have a simple boundary")
    if any(not base.is_real(v) for v in walk):
        raise ValueError("chords can only be drawn into crossing-free faces")
    chords = [tuple(sorted(c)) for c in fill.chords]
    pts = convex_layout(p, chords)

    names = [f"{fill.prefix}{walk[a]}-{walk[b]}" for a, b in chords]
    along: dict[int, list[tuple[Fraction, str]]] = {i: [] for i in range(len(chords))}
    for i, (a, b) in enumerate(chords):
        for j in range(i + 1, len(chords)):
            c, d = chords[j]
            if not _interleaved(a, b, c, d):
                continue
            x = f"{fill.prefix}x{i}.{j}"
            ti, _ = _intersection(pts[a], pts[b], pts[c], pts[d])
            tj, _ = _intersection(pts[c], pts[d], pts[a], pts[b])
            along[i].append((ti, x))
            along[j].append((tj, x))
            da, dc = _sub(pts[b], pts[a]), _sub(pts[d], pts[c])
            if _cross(da, dc) > 0:
                rot = [(names[i], 1), (names[j], 1), (names[i], -1), (names[j], -1)]
            else:
                rot = [(names[i], 1), (names[j], -1), (names[i], -1), (names[j], 1)]
            drawing.kinds[x] = Kind.CROSSING
            drawing.rotations[x] = rot
    for i, (a, b) in enumerate(chords):
        crossings = [x for _, x in sorted(along[i])]
        drawing.paths[names[i]] = (walk[a], *crossings, walk[b])

    for pos, v in enumerate(walk):
        here = pts[pos]
        base_dir = _sub(pts[(pos + 1) % p], here)
        ends = []
        for i, (a, b) in enumerate(chords):
            if pos in (a, b):
                other = b if pos == a else a
                ends.append((_sub(pts[other], here), (names[i], 1 if pos == a else -1)))
        ends.sort(key=cmp_to_key(lambda x, y: -1 if _cross(x[0], y[0]) > 0 else 1))
        assert all(_cross(base_dir, u) > 0 for u, _ in ends)
        e = base.edge_of(face.darts[pos])
        outgoing = (edge_names[e.id], 1 if face.darts[pos] in e.darts else -1)
        rot = drawing.rotations[v]
        at = rot.index(outgoing) + 1
        rot[at:at] = [end for _, end in ends]
