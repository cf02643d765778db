"""Error types shared across the package."""


class QcensError(Exception):
    """Base class for all package errors."""


class ValidationError(QcensError, ValueError):
    """A value is outside its allowed domain (bad probability, empty list, ...)."""


class StructuralError(QcensError, ValueError):
    """Objects are internally inconsistent (index out of range, size mismatch, ...)."""


class ParseError(QcensError, ValueError):
    """A file could not be parsed; the message names the offending location."""
