"""Independent reference computations used to freeze derived values.

These work on the raw serialized document (plain dicts and lists) and share
no code with the package.
"""

from __future__ import annotations

import itertools
import math


def raw_faces(doc):
    """Face boundary walks, traced directly from the JSON rotation lists."""
    where = {}
    for node, rot in doc["rotations"].items():
        for i, d in enumerate(rot):
            where[d] = (node, i)
    twins = doc["twins"]

    def succ(d):
        t = twins[d]
        node, i = where[t]
        rot = doc["rotations"][node]
        return rot[i - 1]

    seen, out = set(), []
    for d in sorted(where):
        if d in seen:
            continue
        walk = []
        while d not in seen:
            seen.add(d)
            walk.append(d)
            d = succ(d)
        out.append(walk)
    return out, where


def raw_census(doc):
    kinds = {n["id"]: n["kind"] for n in doc["nodes"]}
    faces, where = raw_faces(doc)
    out = {}
    for walk in faces:
        reals = sum(kinds[where[d][0]] == "real" for d in walk)
        key = (reals, len(walk))
        out[key] = out.get(key, 0) + 1
    return out


def raw_counts(doc):
    """(V', E', F', n, real degree sum)."""
    kinds = {n["id"]: n["kind"] for n in doc["nodes"]}
    faces, _ = raw_faces(doc)
    darts = sum(len(r) for r in doc["rotations"].values())
    deg_real = sum(len(r) for v, r in doc["rotations"].items() if kinds[v] == "real")
    n = sum(k == "real" for k in kinds.values())
    return len(kinds), darts // 2, len(faces), n, deg_real


def raw_edge_crossings(doc):
    """Crossing count of every edge, following strands by rotation offset 2."""
    kinds = {n["id"]: n["kind"] for n in doc["nodes"]}
    where = {}
    for node, rot in doc["rotations"].items():
        for i, d in enumerate(rot):
            where[d] = (node, i)
    twins = doc["twins"]
    done, counts = set(), []
    for d in sorted(where):
        if d in done or kinds[where[d][0]] != "real":
            continue
        k, x = 0, d
        while True:
            done.add(x)
            t = twins[x]
            done.add(t)
            node, i = where[t]
            if kinds[node] == "real":
                break
            k += 1
            x = doc["rotations"][node][(i + 2) % 4]
        counts.append(k)
    return sorted(counts)


def raw_vertex_neighbor_classes(doc, face_walk):
    """Brute-force vertex-neighbors of one face: faces meeting it at a crossing
    without sharing a segment incident to that crossing."""
    kinds = {n["id"]: n["kind"] for n in doc["nodes"]}
    faces, where = raw_faces(doc)
    face_of = {d: i for i, w in enumerate(faces) for d in w}
    me = face_of[face_walk[0]]
    twins = doc["twins"]
    out = []
    for d in face_walk:
        c = where[d][0]
        if kinds[c] != "crossing":
            continue
        around = doc["rotations"][c]
        incident = {face_of[x] for x in around}
        adjacent = set()
        for x in around:
            sides = {face_of[x], face_of[twins[x]]}
            if me in sides:
                adjacent |= sides
        for g in incident - adjacent - {me}:
            walk = faces[g]
            out.append((sum(kinds[where[y][0]] == "real" for y in walk), len(walk)))
    return sorted(out)


def interleaved_pairs(chords):
    """Crossing pairs among chords of a convex polygon."""
    count = 0
    for (a, b), (c, d) in itertools.combinations(chords, 2):
        if len({a, b, c, d}) < 4:
            continue
        lo, hi = sorted((a, b))
        count += (lo < c < hi) != (lo < d < hi)
    return count


def per_chord_crossings(chords):
    out = {}
    for x in chords:
        out[x] = interleaved_pairs([x] + [y for y in chords if y != x]) - interleaved_pairs(
            [y for y in chords if y != x])
    return out


def maximise_numerically(a, b, steps=200000):
    """Grid maximum of a/x^2 - b/x^3 for x > 0 (float check of the closed form)."""
    best_x, best = None, -math.inf
    lo, hi = 1e-3, 50 * b / a
    for i in range(1, steps):
        x = lo + (hi - lo) * i / steps
        v = a / x ** 2 - b / x ** 3
        if v > best:
            best_x, best = x, v
    return best_x, best
