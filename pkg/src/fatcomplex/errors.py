"""Exception hierarchy for fatcomplex.

Every failure mode that callers are expected to handle gets its own class;
plain ``ValueError`` is reserved for programming errors.
"""


class FatComplexError(Exception):
    """Base class for all fatcomplex errors."""


class MalformedWord(FatComplexError):
    """A boundary word violates the syntactic encoding rules."""


class InvalidGraph(FatComplexError):
    """A half-edge structure is not a valid (bordered) fat graph."""


class NonIntegerGenus(InvalidGraph):
    """Euler characteristic bookkeeping does not solve to an integer genus."""


class NotCollapsible(FatComplexError):
    """Requested edge collapse on a loop, a leaf-edge, or a missing edge."""


class NotSingleBoundary(FatComplexError):
    """Circle-action operation applied to a graph with more than one boundary."""


class ResourceLimit(FatComplexError):
    """Enumeration exceeded the configured class-count ceiling."""

    def __init__(self, message, partial_count=None):
        super().__init__(message)
        self.partial_count = partial_count


class CorruptCache(FatComplexError):
    """Census cache file failed its checksum or version check."""


class ComplexInvalid(FatComplexError):
    """A graded complex fails d.d = 0; homology refused."""


class NotACycle(FatComplexError):
    """A chain expected to be a cycle has a nonzero boundary."""


class DegreeMismatch(FatComplexError):
    """A chain's degree disagrees with the degree of its terms or context."""


class MixedSurfaceTypes(FatComplexError):
    """An operation received chains over incompatible surface types."""
