"""Exception types.  Everything user-facing derives from :class:`SGSError`."""


class SGSError(Exception):
    """Base class for errors caused by bad input or inapplicable operations."""


class SchemaError(SGSError, ValueError):
    """Malformed set, graph document or literal."""


class EmptyShiftError(SGSError):
    """The essential graph is empty, so the shift space is empty."""


class DivergentEntryError(SGSError):
    """A generating function diverges at the requested point."""


class ApproximateSetError(SGSError):
    """An exact answer was requested for a set known only by truncation."""


class EmptyTruncationError(SGSError):
    """Truncating a set to ``[1, n]`` left nothing."""


class CycleCapError(SGSError):
    """Cycle or cycle-family enumeration exceeded its cap."""


class ConvergenceError(SGSError):
    """An iterative numeric routine failed to converge."""


class DecompositionError(SGSError):
    """A set decomposition or edge partition is invalid for the transform."""


class ObstructionError(SGSError):
    """No conjugate S-graph shift exists on the requested number of letters."""


class NotWeaklySpecifiedError(SGSError):
    """Specification constants requested for a shift without weak specification."""


class OracleCapError(SGSError):
    """Brute-force enumeration request exceeds the configured caps."""


class InvariantError(RuntimeError):
    """An internal consistency check failed; this indicates a bug."""
