"""Domain error hierarchy.

Every error the library raises for bad input carries a machine-readable
``code`` (the class name); the CLI maps these to exit status 1.
"""

from __future__ import annotations


class DomainError(Exception):
    """Base class for input-domain violations."""

    @property
    def code(self) -> str:
        return type(self).__name__


class IsolatedVertex(DomainError):
    pass


class BadEndpoint(DomainError):
    pass


class NonPositiveWeight(DomainError):
    pass


class UnknownEdge(DomainError):
    pass


class NotIncident(DomainError):
    """Consecutive darts at ``position``/``position + 1`` do not meet."""

    def __init__(self, position: int):
        super().__init__(f"darts at positions {position} and {position + 1} are not incident")
        self.position = position


class NotClosed(DomainError):
    pass


class Backtrack(DomainError):
    """Dart at ``position + 1`` is the inverse of the dart at ``position``."""

    def __init__(self, position: int):
        super().__init__(f"immediate reversal after position {position}")
        self.position = position


class Tail(DomainError):
    pass


class BadEdgeSubset(DomainError):
    pass


class NotSimpleGraph(DomainError):
    pass


class Disconnected(DomainError):
    pass


class ZeroChain(DomainError):
    pass


class NotCirculation(DomainError):
    pass


class DisconnectedSupport(DomainError):
    pass


class NotUniversal(DomainError):
    pass


class BudgetExceeded(DomainError):
    pass


class NonAdjacentDemand(DomainError):
    pass


class EmptyTask(DomainError):
    pass


class StartUnreachable(DomainError):
    pass


class NotFound(DomainError):
    pass


class InvalidFormat(DomainError):
    pass
