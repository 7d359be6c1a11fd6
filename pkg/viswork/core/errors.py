"""Exception hierarchy for viswork."""


class VisworkError(Exception):
    """Base class for all viswork errors."""


class InvalidQuery(VisworkError, ValueError):
    """A query violated its precondition (bad index, point equal to q, point off the chain)."""


class DegenerateInput(VisworkError, ValueError):
    """The input violates weak general position with respect to the viewpoint."""


class OverlapDegenerate(DegenerateInput):
    """A ray runs along a segment instead of crossing it."""


class NotSimple(VisworkError, ValueError):
    """The polygon boundary intersects itself."""


class NotCCW(VisworkError, ValueError):
    """The vertices are given clockwise and auto-reversal is disabled."""


class ViewpointOutside(VisworkError, ValueError):
    """The viewpoint is not strictly inside the polygon."""


class ChainNotIndependent(VisworkError):
    """A chain endpoint is not visible from the viewpoint."""


class OffsetOutside(VisworkError, ValueError):
    """A generator offset placed the viewpoint outside the polygon."""


class PolygonParseError(VisworkError, ValueError):
    """A polygon file could not be parsed."""

    def __init__(self, message: str, line: int = 0):
        if line:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InternalError(VisworkError, RuntimeError):
    """An algorithm exceeded a safety cap; this indicates a predicate bug."""
