"""Exception types shared across the package.

The CLI maps these onto exit codes: ParseError -> 2 (bad input),
DomainError -> 3 (out-of-domain request or refused cap), OSError -> 4.
"""


class LabsError(Exception):
    """Base class for all package-specific errors."""


class DomainError(LabsError, ValueError):
    """Input is syntactically fine but outside the operation's domain.

    Covers size errors (sequence too short), range errors (shift or flip
    index out of bounds) and refused caps (exhaustive search too large).
    """


class ParseError(LabsError, ValueError):
    """Malformed textual input (hex payloads, class expressions, flags)."""
