"""Exception hierarchy. The CLI maps these onto exit codes."""


class CensusError(Exception):
    """Base class for all errors raised by basscensus."""


class UsageError(CensusError, ValueError):
    """Bad or out-of-scope input (CLI exit code 2)."""


class StructuralError(CensusError):
    """An input does not have the algebraic shape an operation requires."""


class ResourceError(CensusError):
    """An exhaustive enumeration would exceed its configured budget."""

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class PrecisionError(CensusError):
    """The working precision p^k is too small for a requested invariant."""

    def __init__(self, message, precision=None):
        super().__init__(message)
        self.precision = precision


class InternalConsistencyError(CensusError):
    """A fixture or a derived object failed a self-check."""


class UnsupportedError(CensusError):
    """No justification path exists for this input; supply a fixture."""
