"""Canonical codes, isomorphism tests and random relabeling of plane maps."""

from __future__ import annotations

import random

from .planemap import CombinatorialMap, build_map


def _dart_invariant(m: CombinatorialMap, d: str) -> tuple:
    # symmetric under mirroring, so it can restrict start darts in both modes
    u, v = m.origin(d), m.target(d)
    sides = sorted((m.face_of(d).cls, m.face_of(m.twin(d)).cls))
    return (not m.is_real(u), m.degree(u), not m.is_real(v), m.degree(v), sides)


def _code_from(m: CombinatorialMap, start: str, mirrored: bool) -> tuple:
    step = m.rot_prev if mirrored else m.rot_next
    index = {start: 0}
    order = [start]
    i = 0
    while i < len(order):
        d = order[i]
        i += 1
        for x in (m.twin(d), step(d)):
            if x not in index:
                index[x] = len(order)
                order.append(x)
    return tuple((m.is_real(m.origin(d)), index[m.twin(d)], index[step(d)]) for d in order)


def canonical_code(m: CombinatorialMap, allow_mirror: bool = False) -> tuple:
    """A code equal for two maps iff they are isomorphic as oriented maps
    (or up to reflection when ``allow_mirror`` is set)."""
    if not m.dart_ids:
        return tuple(sorted(m.is_real(v) for v in m.node_ids))
    invs = {d: _dart_invariant(m, d) for d in m.dart_ids}
    best_inv = min(invs.values())
    starts = [d for d in m.dart_ids if invs[d] == best_inv]
    modes = (False, True) if allow_mirror else (False,)
    return min(_code_from(m, d, mode) for d in starts for mode in modes)


def is_isomorphic(a: CombinatorialMap, b: CombinatorialMap, allow_mirror: bool = False) -> bool:
    if (len(a.node_ids), len(a.dart_ids), a.n) != (len(b.node_ids), len(b.dart_ids), b.n):
        return False
    return canonical_code(a, allow_mirror) == canonical_code(b, allow_mirror)


def mirror(m: CombinatorialMap) -> CombinatorialMap:
    """The reflected map: every rotation reversed."""
    return CombinatorialMap({v: m.kind(v) for v in m.node_ids},
                            {v: tuple(reversed(m.rotation(v))) for v in m.node_ids},
                            {d: m.twin(d) for d in m.dart_ids}, m.labels)


def relabel(m: CombinatorialMap, seed: int | random.Random | None = None) -> CombinatorialMap:
    """Same map with shuffled node and dart ids and rotated rotation lists."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    nodes = list(m.node_ids)
    darts = list(m.dart_ids)
    node_names = [f"n{i}" for i in range(len(nodes))]
    dart_names = [f"d{i}" for i in range(len(darts))]
    rng.shuffle(node_names)
    rng.shuffle(dart_names)
    nmap = dict(zip(nodes, node_names))
    dmap = dict(zip(darts, dart_names))
    rotations = {}
    for v in nodes:
        rot = [dmap[d] for d in m.rotation(v)]
        k = rng.randrange(len(rot)) if rot else 0
        rotations[nmap[v]] = rot[k:] + rot[:k]
    kinds = {nmap[v]: m.kind(v) for v in nodes}
    twins = {dmap[d]: dmap[m.twin(d)] for d in darts}
    labels = {nmap[v]: s for v, s in m.labels.items() if v in nmap}
    return build_map(kinds, rotations, twins, labels)
