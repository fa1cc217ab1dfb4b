"""Exception hierarchy shared by all modules."""


class PolygonError(Exception):
    """Base class for every error raised by the package."""


class AntipodalLog(PolygonError, ValueError):
    """Logarithm requested at -1, where the principal branch is undefined."""


class BadRadius(PolygonError, ValueError):
    """Side length outside the open interval (0, pi)."""


class BadIndex(PolygonError, IndexError):
    """Index (or index pair) outside the admissible range."""


BadIndices = BadIndex


class ClassMismatch(PolygonError, ValueError):
    """Tuple entry does not lie in the conjugacy class it claims."""


class NoSolution(PolygonError):
    """Closure solver exhausted its restarts."""


class NotClosed(PolygonError, ValueError):
    """Operation needs a closed tuple (or closed cocycle)."""


class DegeneratePoint(PolygonError):
    """Polygon lies on a geodesic; the reduced space is singular there."""


class DegenerateDiagonal(PolygonError):
    """Diagonal of length 0 or pi; the normalized flow is undefined."""

    def __init__(self, message, j=None):
        super().__init__(message)
        self.j = j


class DegenerateElement(PolygonError, ValueError):
    """Group element equal to +1 or -1 where a regular one is needed."""


class AnchorMismatch(PolygonError, ValueError):
    """Two cocycles anchored at different representations."""


class ProjectionSingular(PolygonError):
    """Cocycle closure constraint is rank deficient."""


class BraidParseError(PolygonError, ValueError):
    """Unreadable braid word; carries the offending token and byte offset."""

    def __init__(self, message, token=None, offset=None):
        super().__init__(message)
        self.token = token
        self.offset = offset
