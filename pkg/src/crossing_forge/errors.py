"""Exception hierarchy.

Every validation failure names the invariant it violates and carries the
offending node, dart or edge so callers can report it without parsing text.
"""

from __future__ import annotations


class CrossingForgeError(Exception):
    """Base class for all library errors."""


class MapError(CrossingForgeError, ValueError):
    """A serialized or constructed map violates a structural invariant."""

    invariant = "map"

    def __init__(self, message: str, **witness):
        super().__init__(message)
        self.witness = witness

    def to_dict(self) -> dict:
        return {"error": type(self).__name__, "invariant": self.invariant,
                "message": str(self), "witness": self.witness}


class SchemaError(MapError):
    invariant = "schema"


class BrokenTwin(MapError):
    invariant = "twin is a fixed-point-free involution"


class BadCrossingDegree(MapError):
    invariant = "crossing nodes have degree 4"


class IsolatedNode(MapError):
    invariant = "real nodes have degree >= 1"


class NotConnected(MapError):
    invariant = "map is connected"


class EulerViolation(MapError):
    invariant = "V' - E' + F' = 2"


class LoopEdge(MapError):
    invariant = "edges have distinct endpoints"


class SelfCrossingEdge(MapError):
    invariant = "an edge passes each crossing at most once"


class NotAZeroEdge(CrossingForgeError, ValueError):
    """A wedge-neighbor query was issued on a segment that is not a 0-edge."""


class DisconnectedSkeleton(CrossingForgeError):
    """The subgraph of uncrossed edges is not connected."""


class NotAPentagonalization(CrossingForgeError, ValueError):
    pass


class UnknownClass(CrossingForgeError, KeyError):
    pass


class BeyondDensity(CrossingForgeError, ValueError):
    pass


class NonpositiveCoefficient(CrossingForgeError, ValueError):
    pass


class KTooSmall(CrossingForgeError, ValueError):
    pass


class NotEnoughEdges(CrossingForgeError):
    pass


class InvariantFailure(CrossingForgeError, AssertionError):
    """An internal invariant (conservation, Euler, chain length) failed."""
