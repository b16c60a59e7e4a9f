"""
Exception hierarchy shared by the services and the command line
"""
from typing import Optional


class DeltaKitError(Exception):
    """Base class for every error raised by deltakit"""


class NotDeltaSystem(DeltaKitError):
    """Pairwise intersections over an index set disagree"""


class DegenerateSize(DeltaKitError):
    """A kernel or certificate was requested for fewer than two members"""


class CapExceeded(DeltaKitError):
    """An exhaustive search would exceed its configured cap"""

    def __init__(self, cap_name: str, limit: int, requested: int):
        self.cap_name = cap_name
        self.limit = limit
        self.requested = requested
        super().__init__(f"{cap_name} exceeded: {requested} > {limit}")


class InvalidParams(DeltaKitError, ValueError):
    """Operation parameters outside their allowed range"""


class InvalidInstance(DeltaKitError, ValueError):
    """A value violates the structural invariants of its type"""


class PlanInvalid(DeltaKitError):
    """A witness plan does not support the requested assembly"""


class DomainClash(DeltaKitError):
    """The q, r and s pieces of a witness overlap"""


class SchemaViolation(DeltaKitError):
    """A JSON document does not match its schema"""

    def __init__(self, message: str, path: str = "$", line: Optional[int] = None,
                 column: Optional[int] = None):
        self.path = path
        self.line = line
        self.column = column
        location = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{path}: {message}{location}")
