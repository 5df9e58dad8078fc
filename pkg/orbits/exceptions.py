"""
Orbit-space exceptions.

Library code raises these; the SDK turns them into result dicts and the
management command turns them into exit code 2.
"""

from typing import Optional


class OrbitError(Exception):
    """Base class for every error raised by the orbits package."""


class DimensionMismatch(OrbitError, ValueError):
    """A group element and a point (or image) live in different R^k."""


class ShapeMismatch(OrbitError, ValueError):
    """Two images do not share the point count n (or the dimension k)."""


class SingularLinearPart(OrbitError, ValueError):
    """The linear part of an affine element fails the rank tolerance."""


class DegenerateImage(OrbitError, ValueError):
    """All points coincide, so there is no scale to normalize by."""


class ConvergenceFailure(OrbitError, ArithmeticError):
    """A Jacobi iteration did not converge within its sweep budget."""


class UnsupportedDimension(OrbitError, ValueError):
    """The brute-force oracle only searches k = 2 and k = 3."""


class InvalidGridSpec(OrbitError, ValueError):
    pass


class NotSymmetric(OrbitError, ValueError):
    pass


class ParseError(OrbitError, ValueError):
    """An image or manifest file could not be read."""

    def __init__(self, message: str, path: Optional[str] = None,
                 line: Optional[int] = None, field: Optional[int] = None):
        self.path = path
        self.line = line
        self.field = field
        location = []
        if path is not None:
            location.append(str(path))
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(f"field {field}")
        prefix = f"{', '.join(location)}: " if location else ''
        super().__init__(f"{prefix}{message}")


class NotOrthogonal(OrbitError, ValueError):
    """The linear part of a motion fails the orthogonality tolerance."""
