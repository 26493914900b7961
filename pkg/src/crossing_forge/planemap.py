"""Topological drawings as combinatorial plane maps.

A drawing is stored as its planarization: real vertices and crossing points
are nodes, crossing-free edge pieces are pairs of darts.  The embedding is a
rotation system (counterclockwise dart order around every node) on the
sphere, so the unbounded face is not special.

Faces are traced with the face on the left of each dart: the successor of
dart ``d`` on its face is the clockwise neighbour of ``twin(d)`` at the
target node.
"""

from __future__ import annotations

import json
import logging
import os
from collections import Counter, deque
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .errors import (
    BadCrossingDegree,
    BrokenTwin,
    DisconnectedSkeleton,
    EulerViolation,
    InvariantFailure,
    IsolatedNode,
    LoopEdge,
    NotAZeroEdge,
    NotConnected,
    SchemaError,
    SelfCrossingEdge,
)

logger = logging.getLogger(__name__)

FORMAT_VERSION = "crossing-forge/1"
_TOP_LEVEL_KEYS = {"version", "nodes", "rotations", "twins", "labels"}
_NODE_KEYS = {"id", "kind"}

_POLYGON_NAMES = {1: "monogon", 2: "digon", 3: "triangle", 4: "quadrilateral",
                  5: "pentagon", 6: "hexagon", 7: "heptagon"}


class Kind(str, Enum):
    REAL = "real"
    CROSSING = "crossing"


@dataclass(frozen=True)
class Node:
    id: str
    kind: Kind


@dataclass(frozen=True)
class Dart:
    id: str
    origin: str
    rotation_next: str
    twin: str


def polygon_name(size: int) -> str:
    return _POLYGON_NAMES.get(size, f"{size}-gon")


def face_label(real_count: int, size: int) -> str:
    """``r-s-gon`` wording, e.g. ``face_label(0, 5) == "0-pentagon"``."""
    return f"{real_count}-{polygon_name(size)}"


@dataclass(frozen=True)
class Face:
    """One face of the plane map.

    ``real_count`` counts real-node incidences along the boundary walk;
    ``distinct_real_count`` de-duplicates them.  The two agree whenever the
    boundary is a simple cycle.
    """

    id: int
    darts: tuple[str, ...]
    real_count: int
    distinct_real_count: int
    edge_classes: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.darts)

    @property
    def cls(self) -> tuple[int, int]:
        return (self.real_count, self.size)

    @property
    def label(self) -> str:
        return face_label(self.real_count, self.size)

    def is_class(self, real_count: int, size: int) -> bool:
        return self.real_count == real_count and self.size == size


@dataclass(frozen=True)
class GraphEdge:
    """An edge of the drawing, recovered by following strands through crossings.

    ``darts`` holds the forward dart of every segment, from ``endpoints[0]``
    to ``endpoints[1]``.
    """

    id: str
    endpoints: tuple[str, str]
    darts: tuple[str, ...]
    crossings: tuple[str, ...]

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)


@dataclass(frozen=True)
class DrawingStats:
    n: int
    m: int
    crossing_total: int
    per_edge_crossings: Mapping[str, int]
    max_crossings_per_edge: int

    def is_k_planar(self, k: int) -> bool:
        return self.max_crossings_per_edge <= k

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "crossings": self.crossing_total,
            "max_crossings_per_edge": self.max_crossings_per_edge,
            "per_edge_crossings": dict(sorted(self.per_edge_crossings.items())),
        }


class CombinatorialMap:
    """Immutable rotation-system map.

    The constructor does not check invariants; use :func:`validate` or
    :func:`build_map` for untrusted input.
    """

    def __init__(
        self,
        kinds: Mapping[str, Kind],
        rotations: Mapping[str, Sequence[str]],
        twins: Mapping[str, str],
        labels: Mapping[str, str] | None = None,
    ):
        self._kinds = {v: Kind(k) for v, k in kinds.items()}
        self._rotations = {v: tuple(rotations.get(v, ())) for v in self._kinds}
        self._twin = dict(twins)
        self.labels = dict(labels or {})
        self._origin: dict[str, str] = {}
        self._pos: dict[str, int] = {}
        for v, rot in self._rotations.items():
            for i, d in enumerate(rot):
                self._origin[d] = v
                self._pos[d] = i

    # -- primitive access -------------------------------------------------

    @cached_property
    def node_ids(self) -> list[str]:
        return sorted(self._kinds)

    @cached_property
    def dart_ids(self) -> list[str]:
        return sorted(self._origin)

    @property
    def nodes(self) -> list[Node]:
        return [Node(v, self._kinds[v]) for v in self.node_ids]

    @property
    def darts(self) -> list[Dart]:
        return [Dart(d, self._origin[d], self.rot_next(d), self._twin[d])
                for d in self.dart_ids]

    def kind(self, v: str) -> Kind:
        return self._kinds[v]

    def is_real(self, v: str) -> bool:
        return self._kinds[v] is Kind.REAL

    def rotation(self, v: str) -> tuple[str, ...]:
        return self._rotations[v]

    def degree(self, v: str) -> int:
        return len(self._rotations[v])

    def origin(self, d: str) -> str:
        return self._origin[d]

    def twin(self, d: str) -> str:
        return self._twin[d]

    def target(self, d: str) -> str:
        return self._origin[self._twin[d]]

    def rot_next(self, d: str) -> str:
        rot = self._rotations[self._origin[d]]
        return rot[(self._pos[d] + 1) % len(rot)]

    def rot_prev(self, d: str) -> str:
        rot = self._rotations[self._origin[d]]
        return rot[(self._pos[d] - 1) % len(rot)]

    def rot_offset(self, d: str, k: int) -> str:
        rot = self._rotations[self._origin[d]]
        return rot[(self._pos[d] + k) % len(rot)]

    def face_next(self, d: str) -> str:
        return self.rot_prev(self._twin[d])

    def opposite(self, d: str) -> str:
        """Continuation of the strand through the crossing at ``origin(d)``."""
        return self.rot_offset(d, 2)

    def dart_class(self, d: str) -> int:
        """Number of real endpoints of the segment carrying ``d``."""
        return int(self.is_real(self.origin(d))) + int(self.is_real(self.target(d)))

    @cached_property
    def n(self) -> int:
        return sum(1 for k in self._kinds.values() if k is Kind.REAL)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def segment_count(self) -> int:
        return len(self._origin) // 2

    # -- derived structure ------------------------------------------------

    @cached_property
    def faces(self) -> tuple[Face, ...]:
        seen: set[str] = set()
        out: list[Face] = []
        for start in self.dart_ids:
            if start in seen:
                continue
            walk = []
            d = start
            while d not in seen:
                seen.add(d)
                walk.append(d)
                d = self.face_next(d)
            reals = [self.origin(x) for x in walk if self.is_real(self.origin(x))]
            out.append(Face(
                id=len(out),
                darts=tuple(walk),
                real_count=len(reals),
                distinct_real_count=len(set(reals)),
                edge_classes=tuple(self.dart_class(x) for x in walk),
            ))
        return tuple(out)

    @cached_property
    def _face_index(self) -> dict[str, int]:
        return {d: f.id for f in self.faces for d in f.darts}

    def face_of(self, d: str) -> Face:
        return self.faces[self._face_index[d]]

    def face(self, face_id: int) -> Face:
        return self.faces[face_id]

    @cached_property
    def edges(self) -> tuple[GraphEdge, ...]:
        return tuple(_trace_edges(self))

    @cached_property
    def _edge_index(self) -> dict[str, GraphEdge]:
        out = {}
        for e in self.edges:
            for d in e.darts:
                out[d] = e
                out[self._twin[d]] = e
        return out

    def edge_of(self, d: str) -> GraphEdge:
        return self._edge_index[d]

    def edge(self, edge_id: str) -> GraphEdge:
        return self._edges_by_id[edge_id]

    @cached_property
    def _edges_by_id(self) -> dict[str, GraphEdge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def stats(self) -> DrawingStats:
        per_edge = {e.id: e.crossing_count for e in self.edges}
        return DrawingStats(
            n=self.n,
            m=len(self.edges),
            crossing_total=len(self._kinds) - self.n,
            per_edge_crossings=per_edge,
            max_crossings_per_edge=max(per_edge.values(), default=0),
        )

    @cached_property
    def skeleton(self) -> Skeleton:
        return _build_skeleton(self)

    def to_json(self) -> dict:
        out = {
            "version": FORMAT_VERSION,
            "nodes": [{"id": v, "kind": self._kinds[v].value} for v in self.node_ids],
            "rotations": {v: list(self._rotations[v]) for v in self.node_ids},
            "twins": {d: self._twin[d] for d in self.dart_ids},
        }
        if self.labels:
            out["labels"] = dict(sorted(self.labels.items()))
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=False)

    def __repr__(self) -> str:
        return (f"CombinatorialMap(n={self.n}, crossings={len(self._kinds) - self.n}, "
                f"segments={self.segment_count}, faces={len(self.faces)})")


# -- construction and validation -----------------------------------------


def build_map(kinds, rotations, twins, labels=None) -> CombinatorialMap:
    """Construct a map and check every invariant, raising a :class:`MapError`."""
    for v, rot in rotations.items():
        if v not in kinds:
            raise SchemaError(f"rotation given for unknown node {v!r}", node=v)
    listed: dict[str, str] = {}
    for v, rot in rotations.items():
        for d in rot:
            if d in listed:
                raise SchemaError(f"dart {d!r} appears in the rotation of {listed[d]!r} and {v!r}",
                                  dart=d)
            listed[d] = v
    for d in listed:
        t = twins.get(d)
        if t is None:
            raise BrokenTwin(f"dart {d!r} has no twin", dart=d)
        if t == d:
            raise BrokenTwin(f"dart {d!r} is its own twin", dart=d)
        if t not in listed:
            raise BrokenTwin(f"twin {t!r} of dart {d!r} is not in any rotation", dart=d)
        if twins.get(t) != d:
            raise BrokenTwin(f"twin of {t!r} is {twins.get(t)!r}, expected {d!r}", dart=t)
    for d in twins:
        if d not in listed:
            raise BrokenTwin(f"dart {d!r} has a twin but no origin", dart=d)

    m = CombinatorialMap(kinds, rotations, twins, labels)
    for v in m.node_ids:
        deg = m.degree(v)
        if m.kind(v) is Kind.CROSSING and deg != 4:
            raise BadCrossingDegree(f"crossing node {v!r} has degree {deg}", node=v, degree=deg)
        if m.kind(v) is Kind.REAL and deg == 0 and len(kinds) > 0:
            raise IsolatedNode(f"real node {v!r} has no incident segment", node=v)

    if not kinds:
        return m
    _check_connected(m)
    v_, e_, f_ = len(kinds), m.segment_count, len(m.faces)
    if v_ - e_ + f_ != 2:
        raise EulerViolation(f"V'-E'+F' = {v_}-{e_}+{f_} = {v_ - e_ + f_} != 2",
                             V=v_, E=e_, F=f_)
    m.edges  # raises LoopEdge / SelfCrossingEdge
    return m


def _check_connected(m: CombinatorialMap) -> None:
    nodes = m.node_ids
    seen = {nodes[0]}
    queue = deque([nodes[0]])
    while queue:
        v = queue.popleft()
        for d in m.rotation(v):
            w = m.target(d)
            if w not in seen:
                seen.add(w)
                queue.append(w)
    if len(seen) != len(nodes):
        missing = sorted(set(nodes) - seen)
        raise NotConnected(f"{len(missing)} node(s) unreachable, e.g. {missing[0]!r}",
                           node=missing[0])


def strict_default() -> bool:
    return os.environ.get("CROSSING_FORGE_STRICT", "") == "1"


def validate(raw, strict: bool | None = None) -> CombinatorialMap:
    """Parse a ``crossing-forge/1`` document (JSON text or mapping) into a valid map.

    In strict mode unknown fields are rejected; otherwise they are ignored
    with a logged warning.  Strictness defaults to ``CROSSING_FORGE_STRICT``.
    """
    if strict is None:
        strict = strict_default()
    if isinstance(raw, (str, bytes, bytearray)):
        try:
            raw = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"not valid JSON: {exc}") from exc
    if not isinstance(raw, Mapping):
        raise SchemaError("document must be a JSON object")

    unknown = set(raw) - _TOP_LEVEL_KEYS
    if unknown:
        _unknown_fields("top level", unknown, strict)
    if raw.get("version") != FORMAT_VERSION:
        raise SchemaError(f"version must be {FORMAT_VERSION!r}, got {raw.get('version')!r}")
    for key in ("nodes", "rotations", "twins"):
        if key not in raw:
            raise SchemaError(f"missing field {key!r}")

    nodes, rotations, twins = raw["nodes"], raw["rotations"], raw["twins"]
    if not isinstance(nodes, list):
        raise SchemaError("'nodes' must be a list")
    kinds: dict[str, Kind] = {}
    for entry in nodes:
        if not isinstance(entry, Mapping) or not isinstance(entry.get("id"), str):
            raise SchemaError(f"malformed node entry {entry!r}")
        extra = set(entry) - _NODE_KEYS
        if extra:
            _unknown_fields(f"node {entry['id']!r}", extra, strict)
        if entry.get("kind") not in ("real", "crossing"):
            raise SchemaError(f"node {entry['id']!r} has kind {entry.get('kind')!r}",
                              node=entry["id"])
        if entry["id"] in kinds:
            raise SchemaError(f"duplicate node id {entry['id']!r}", node=entry["id"])
        kinds[entry["id"]] = Kind(entry["kind"])

    if not isinstance(rotations, Mapping) or not all(
            isinstance(r, list) and all(isinstance(d, str) for d in r) for r in rotations.values()):
        raise SchemaError("'rotations' must map node ids to lists of dart ids")
    if not isinstance(twins, Mapping) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in twins.items()):
        raise SchemaError("'twins' must map dart ids to dart ids")
    labels = raw.get("labels") or {}
    if not isinstance(labels, Mapping) or not all(isinstance(v, str) for v in labels.values()):
        raise SchemaError("'labels' must map node ids to strings")

    return build_map(kinds, rotations, twins, labels)


def _unknown_fields(where: str, names: Iterable[str], strict: bool) -> None:
    names = sorted(names)
    if strict:
        raise SchemaError(f"unknown field(s) at {where}: {', '.join(names)}")
    logger.warning("ignoring unknown field(s) at %s: %s", where, ", ".join(names))


def load(path) -> CombinatorialMap:
    with open(path, encoding="utf-8") as fh:
        return validate(fh.read())


# -- edges ----------------------------------------------------------------


def _trace_edges(m: CombinatorialMap) -> list[GraphEdge]:
    covered: set[str] = set()
    edges: list[GraphEdge] = []
    for start in m.dart_ids:
        if start in covered or not m.is_real(m.origin(start)):
            continue
        forward = [start]
        crossings: list[str] = []
        d = start
        while not m.is_real(m.target(d)):
            c = m.target(d)
            if c in crossings:
                raise SelfCrossingEdge(f"edge starting with dart {start!r} passes crossing {c!r} twice",
                                       edge=start, node=c)
            crossings.append(c)
            d = m.opposite(m.twin(d))
            forward.append(d)
        u, v = m.origin(start), m.target(d)
        if u == v:
            raise LoopEdge(f"edge starting with dart {start!r} is a loop at {u!r}", edge=start, node=u)
        backward = [m.twin(x) for x in forward]
        covered.update(forward)
        covered.update(backward)
        edge_id = min(forward + backward)
        if edge_id in backward:
            # orient from the endpoint whose outgoing dart carries the id
            forward = backward[::-1]
            crossings = crossings[::-1]
            u, v = v, u
        edges.append(GraphEdge(edge_id, (u, v), tuple(forward), tuple(crossings)))
    leftover = sorted(set(m.dart_ids) - covered)
    if leftover:
        raise LoopEdge(f"strand through dart {leftover[0]!r} closes on itself without real endpoints",
                       edge=leftover[0])
    edges.sort(key=lambda e: e.id)
    return edges


def recover_edges(m: CombinatorialMap) -> list[GraphEdge]:
    """Edges of the drawing, each assembled from its segments through crossings."""
    return list(m.edges)


def drawing_stats(m: CombinatorialMap) -> DrawingStats:
    return m.stats


def is_k_planar(m: CombinatorialMap, k: int) -> bool:
    return m.stats.max_crossings_per_edge <= k


def is_simple_graph(m: CombinatorialMap) -> bool:
    pairs = Counter(frozenset(e.endpoints) for e in m.edges)
    return all(c == 1 for c in pairs.values())


def is_two_connected(m: CombinatorialMap) -> bool:
    """Whether the plane map has no cut node (real or crossing)."""
    if len(m.node_ids) < 3:
        return len(m.node_ids) == 2
    g = nx.Graph()
    g.add_nodes_from(m.node_ids)
    g.add_edges_from((m.origin(d), m.target(d)) for d in m.dart_ids)
    return nx.is_biconnected(g)


# -- faces and neighbour relations ---------------------------------------


def faces(m: CombinatorialMap) -> list[Face]:
    return list(m.faces)


def face_census(m: CombinatorialMap) -> Counter:
    return Counter(f.label for f in m.faces)


def across(m: CombinatorialMap, d: str) -> Face:
    """The face on the other side of the segment carrying ``d``."""
    return m.face_of(m.twin(d))


def r_neighbors(m: CombinatorialMap, face: Face, r: int) -> list[tuple[str, Face]]:
    """Faces sharing an r-edge with ``face``, one entry per shared segment."""
    return [(d, across(m, d)) for d, cls in zip(face.darts, face.edge_classes) if cls == r]


def wedge_chain(m: CombinatorialMap, face: Face, d: str) -> list[Face]:
    """Faces ``f_1, ..., f_i`` crossed when looking for the wedge-neighbor at 0-edge ``d``.

    The last entry is the wedge-neighbor.  Returns an empty list if the chain
    of 0-quadrilaterals closes up on itself, which has no wedge-neighbor.
    """
    if d not in face.darts:
        raise NotAZeroEdge(f"dart {d!r} is not on the boundary of face {face.id}")
    if m.dart_class(d) != 0:
        raise NotAZeroEdge(f"dart {d!r} carries a {m.dart_class(d)}-edge")
    chain: list[Face] = []
    seen: set[str] = set()
    entry = m.twin(d)
    while True:
        if entry in seen:
            return []
        seen.add(entry)
        f = m.face_of(entry)
        chain.append(f)
        if not f.is_class(0, 4):
            return chain
        k = f.darts.index(entry)
        entry = m.twin(f.darts[(k + 2) % 4])


def wedge_neighbor(m: CombinatorialMap, face: Face, d: str) -> Face | None:
    chain = wedge_chain(m, face, d)
    if chain and len(chain) > 3 and m.stats.max_crossings_per_edge <= 3:
        raise InvariantFailure(
            f"wedge chain of length {len(chain)} from face {face.id} in a 3-planar map")
    return chain[-1] if chain else None


def wedge_neighbors(m: CombinatorialMap, face: Face) -> list[tuple[str, Face | None]]:
    """Wedge-neighbors at every 0-edge of ``face`` (None where the chain cycles)."""
    return [(d, wedge_neighbor(m, face, d))
            for d, cls in zip(face.darts, face.edge_classes) if cls == 0]


def vertex_neighbors(m: CombinatorialMap, face: Face) -> list[tuple[str, Face]]:
    """Faces diagonally opposite ``face`` at each crossing on its boundary.

    A pair is reported only when the two faces share no segment incident to
    that crossing.
    """
    out = []
    for d in face.darts:
        c = m.origin(d)
        if m.is_real(c):
            continue
        other = m.face_of(m.rot_offset(d, 2))
        if other.id == face.id:
            continue
        shares_edge = False
        for x in m.rotation(c):
            sides = {m.face_of(x).id, m.face_of(m.twin(x)).id}
            if face.id in sides and other.id in sides:
                shares_edge = True
                break
        if not shares_edge:
            out.append((c, other))
    return out


# -- planar skeleton ------------------------------------------------------


@dataclass
class Skeleton:
    """Uncrossed edges with their induced embedding.

    ``region_of`` groups the faces of the full map by the skeleton face that
    contains them; faces in one region lie inside the same minimal planar
    cycle.
    """

    map: CombinatorialMap
    region_of: dict[int, int]
    regions: list[tuple[int, ...]]
    region_skeleton_face: dict[int, int | None]
    connected: bool
    warnings: list[str] = field(default_factory=list)

    def region_faces(self, face: Face | int) -> tuple[int, ...]:
        fid = face if isinstance(face, int) else face.id
        return self.regions[self.region_of[fid]]

    def skeleton_face(self, face: Face | int) -> Face | None:
        fid = face if isinstance(face, int) else face.id
        sf = self.region_skeleton_face[self.region_of[fid]]
        return None if sf is None else self.map.faces[sf]

    def enclosing_cycle(self, face: Face | int) -> tuple[str, ...]:
        """Real nodes along the skeleton face containing ``face``."""
        sf = self.skeleton_face(face)
        if sf is None:
            return ()
        return tuple(self.map.origin(d) for d in sf.darts)


def _build_skeleton(m: CombinatorialMap) -> Skeleton:
    planar = {d for d in m.dart_ids if m.dart_class(d) == 2}
    kinds = {v: Kind.REAL for v in m.node_ids if m.is_real(v)}
    rotations = {v: [d for d in m.rotation(v) if d in planar] for v in kinds}
    twins = {d: m.twin(d) for d in planar}
    skel = CombinatorialMap(kinds, rotations, twins)

    parent = list(range(len(m.faces)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for d in m.dart_ids:
        if d not in planar:
            a, b = find(m.face_of(d).id), find(m.face_of(m.twin(d)).id)
            if a != b:
                parent[max(a, b)] = min(a, b)
    roots: dict[int, int] = {}
    region_of: dict[int, int] = {}
    regions: list[list[int]] = []
    for f in m.faces:
        r = find(f.id)
        if r not in roots:
            roots[r] = len(regions)
            regions.append([])
        region_of[f.id] = roots[r]
        regions[roots[r]].append(f.id)

    region_face: dict[int, int | None] = {}
    for idx, members in enumerate(regions):
        darts = sorted(d for fid in members for d in m.faces[fid].darts if d in planar)
        region_face[idx] = skel.face_of(darts[0]).id if darts else None

    connected = True
    if kinds:
        seen: set[str] = set()
        start = min(kinds)
        stack = [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            for d in skel.rotation(v):
                w = skel.target(d)
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        connected = len(seen) == len(kinds)
    warnings = [] if connected else ["DisconnectedSkeleton: regions are taken per skeleton component"]
    return Skeleton(skel, region_of, [tuple(r) for r in regions], region_face, connected, warnings)


def planar_skeleton(m: CombinatorialMap, strict: bool = False) -> Skeleton:
    """Skeleton of uncrossed edges and the face-to-skeleton-face mapping."""
    sk = m.skeleton
    if strict and not sk.connected:
        raise DisconnectedSkeleton("uncrossed edges do not form a connected plane graph")
    return sk
