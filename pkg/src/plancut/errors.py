"""Exception types raised across the package."""


class PlancutError(Exception):
    """Base class for all package errors."""


class EulerViolation(PlancutError):
    """V - E + F != 2 on some connected component."""


class InconsistentRotation(PlancutError):
    """Dart pairing between neighbor lists failed."""


class NegativeWeight(PlancutError):
    pass


class NotAClosedWalk(PlancutError):
    pass


class UnsupportedSelfCrossing(PlancutError):
    """Walk revisits a vertex in a shape other than simple-cycle-plus-tail."""


class BadParams(PlancutError):
    pass


class ParseError(PlancutError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class RootNotInScope(PlancutError):
    pass


class EndpointUnreachable(PlancutError):
    pass


class BadR(PlancutError):
    pass


class SameVertex(PlancutError):
    pass


class SameFace(PlancutError):
    pass


class EmptyScope(PlancutError):
    pass


class NoNonTreeEdge(PlancutError):
    pass


class RegionTooSmall(PlancutError):
    """Raised by divide_region when a region must go to the terminal step."""


class EmbeddingViolation(PlancutError):
    pass


class NoSuchEdge(PlancutError):
    pass


class AgreementFailure(PlancutError):
    """Benchmark cross-algorithm answer mismatch."""


class InternalInvariantError(PlancutError):
    """A solver produced a structurally invalid intermediate result."""
