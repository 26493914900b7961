import math
from functools import lru_cache

import pytest

from crossing_forge import generators
from crossing_forge.drawing import Drawing, planarize
from crossing_forge.planemap import Kind

FAMILIES = [
    "doubled:f25", "doubled:f26", "doubled:f36",
    "full:f25", "full:f26", "full:f36",
    "augmented:dodecahedron", "augmented:c5",
    "optimal:dodecahedron", "optimal:c5",
    "cycle:3", "cycle:5", "cycle:6",
]
TIGHT = ["doubled:f25", "doubled:f26", "doubled:f36", "augmented:dodecahedron",
         "augmented:c5", "optimal:dodecahedron", "optimal:c5"]


@lru_cache(maxsize=None)
def built(family):
    return generators.generate(family)


@pytest.fixture(params=FAMILIES)
def family_map(request):
    return request.param, built(request.param)


def polyline_drawing(points, edges):
    """Plane map from straight polylines; nodes named ``x...`` are crossings.

    Rotations come from sorting neighbour directions by angle.
    """
    paths = {f"e{i}": tuple(p) for i, p in enumerate(edges)}
    ends = {v: [] for v in points}
    for name, path in paths.items():
        for i, v in enumerate(path):
            if i + 1 < len(path):
                ends[v].append((path[i + 1], (name, 1)))
            if i > 0:
                ends[v].append((path[i - 1], (name, -1)))
    rotations = {}
    for v, lst in ends.items():
        x0, y0 = points[v]
        lst.sort(key=lambda t: math.atan2(points[t[0]][1] - y0, points[t[0]][0] - x0))
        rotations[v] = [e for _, e in lst]
    kinds = {v: Kind.CROSSING if v.startswith("x") else Kind.REAL for v in points}
    return planarize(Drawing(kinds, paths, rotations))


def wedge_gadget():
    """Two edges from v cross each other at xz; edge g crosses both in between.

    The 1-triangle (v, x1, x2) has the 0-triangle (x1, xz, x2) as wedge-neighbor.
    """
    pts = {"v": (0, 0), "x1": (-1, 1), "x2": (1, 1), "xz": (0, 2),
           "a": (1, 3), "b": (-1, 3), "g1": (-2, 1), "g2": (2, 1)}
    edges = [("v", "x1", "xz", "a"), ("v", "x2", "xz", "b"), ("g1", "x1", "x2", "g2")]
    return polyline_drawing(pts, edges)
