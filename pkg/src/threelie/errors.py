"""Exception hierarchy.

Every validation error carries a machine-readable ``witness`` dict so the
CLI can report exactly where an identity broke.
"""
from __future__ import annotations


class ThreeLieError(Exception):
    """Base class for all errors raised by the package."""

    witness: dict = {}

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.witness = dict(witness or {})


class DimensionMismatch(ThreeLieError, ValueError):
    pass


class IndexOutOfRange(ThreeLieError, IndexError):
    pass


class DegreeOverflowGuard(ThreeLieError, ValueError):
    pass


class ValidationFailure(ThreeLieError):
    """An algebraic identity does not hold; ``witness`` says where."""


class FundamentalIdentityViolation(ValidationFailure):
    pass


class RepresentationAxiomViolation(ValidationFailure):
    pass


class NotASubalgebra(ValidationFailure):
    pass


class NotAMorphism(ValidationFailure):
    pass


class BaseNotMorphism(NotAMorphism):
    pass


class NotFirstOrderDeformation(ValidationFailure):
    pass


class SchemaError(ThreeLieError):
    """Malformed input document. ``line``/``column`` are 1-based when known."""

    def __init__(self, message: str, *, line: int | None = None,
                 column: int | None = None, path: str | None = None):
        witness = {k: v for k, v in
                   (("line", line), ("column", column), ("path", path))
                   if v is not None}
        super().__init__(message, witness)
        self.line = line
        self.column = column
        self.path = path
