"""Exception hierarchy for mycocat.

Every error raised by the library derives from :class:`MycocatError`, so
callers can catch the whole family with one clause. The subclasses mirror
the failure modes of the public operations: structural mismatches, violated
admissibility constraints, numeric trouble, and bad configuration.
"""


class MycocatError(Exception):
    """Base class for all mycocat errors."""


class CompositionError(MycocatError):
    """Morphisms or field rules that do not line up for composition."""


class PreconditionError(MycocatError):
    """A documented operation precondition does not hold (e.g. non-mono leg)."""


class ConstraintError(MycocatError):
    """An admissibility constraint is violated; the message names the bound."""


class ShapeError(MycocatError):
    """Dimension or layout mismatch between numeric objects."""


class NumericError(MycocatError):
    """Non-finite values or a numerically meaningless result."""


class DomainError(MycocatError):
    """Input outside the mathematical domain of the operation (e.g. matrix
    logarithm of a matrix with a nonpositive real eigenvalue)."""


class ParameterError(MycocatError):
    """Invalid parameter value (negative weight, unsupported order, ...)."""


class ResourceError(MycocatError):
    """Request would exceed the enumeration budget of an exhaustive check."""


class InsufficientDataError(MycocatError):
    """Not enough usable data points for a fit."""


class InputError(MycocatError):
    """Required checker input is missing or malformed."""


class ConfigError(MycocatError):
    """Malformed experiment or CLI configuration; message carries the field path."""
