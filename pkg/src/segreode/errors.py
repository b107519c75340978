"""Exception types shared across the package."""


class SegreOdeError(Exception):
    """Base class for all package errors."""


class StructureError(SegreOdeError):
    """Structural misuse: variable-tag mismatch, wrong matrix shape, ..."""


class DomainError(SegreOdeError):
    """Operation applied outside its mathematical domain."""


class PrecisionError(SegreOdeError):
    """A result would not be determined by the stored truncated data."""


class InternalInconsistencyError(SegreOdeError):
    """A theorem-backed postcondition failed; indicates a bug or invalid input."""
