"""Exception hierarchy for the toolkit.

Every exception carries a short machine-readable ``kind`` token used by the
CLI to emit one-line diagnostics.
"""

from __future__ import annotations


class PhaseSpaceError(Exception):
    kind = "error"


class InvalidDimensionError(PhaseSpaceError):
    kind = "invalid-dimension"


class InvalidParameterError(PhaseSpaceError):
    kind = "invalid-parameter"


class OrderingRangeError(PhaseSpaceError):
    """Ordering tag outside the validity range of an operation."""

    kind = "out-of-range"


class SingularConversionError(PhaseSpaceError):
    """Ordering conversion hit a vanishing scale factor; the kernel has no
    representation at the requested tag (delta-function limit)."""

    kind = "singular-conversion"


class SingularParameterError(PhaseSpaceError):
    kind = "singular-parameter"


class DivergenceError(PhaseSpaceError):
    """Integrand does not decay inside the quadrature window."""

    kind = "divergence"


class TruncationError(PhaseSpaceError):
    kind = "truncation"


class GridCoverageError(PhaseSpaceError):
    """Grid too small for the field it is supposed to cover."""

    kind = "grid-coverage"


class PSingularError(PhaseSpaceError):
    """The P function exists only as a distribution for this state."""

    kind = "p-singular"


class StateSpecError(PhaseSpaceError):
    """Semantic error in a state specification."""

    kind = "semantic"

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message)
        self.offset = offset


class ParseError(StateSpecError):
    """Syntax error with exact byte offset."""

    kind = "parse"

    def __init__(self, offset: int, expected: str, found: str):
        super().__init__(
            f"at offset {offset}: expected {expected}, found {found!r}", offset
        )
        self.expected = expected
        self.found = found
