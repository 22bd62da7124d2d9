"""Exception types shared across the package."""


class FgtError(Exception):
    """Base class for all package-specific errors."""


class ParseError(FgtError):
    """Malformed instance file. Carries the 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class InvalidColourCount(FgtError):
    """Requested more colours than vertices (or fewer than one)."""


class PlantInfeasible(FgtError):
    """The requested colour classes cannot host the planted triangles."""


class NegativeCycle(FgtError):
    """A negative cycle was detected while computing shortest paths."""


class DimensionMismatch(FgtError):
    """Operands of a matrix operation have different dimensions."""


class InternalInconsistency(FgtError):
    """A self-check failed; indicates a broken intermediate result."""


class EmptyDomain(FgtError):
    """A search primitive was invoked on an empty domain."""


class InvalidDelta(FgtError):
    """Triangle threshold outside the admissible range [0, n^3]."""


class UnsupportedCombination(FgtError):
    """The requested problem/algorithm pairing is not implemented."""
