"""Exception taxonomy shared by all cloudtheta modules."""

from __future__ import annotations


class CloudthetaError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(CloudthetaError):
    """Caller passed parameters or data that violate a documented precondition."""


class ParseError(InvalidInputError):
    """Malformed DIMACS or other serialized input."""


class Not3CNFError(ParseError):
    """A clause does not have exactly three literals."""


class DuplicateVariableError(ParseError):
    """A clause mentions the same variable twice."""


class OutOfRangeError(ParseError):
    """A variable index lies outside the declared range."""


class ResourceLimitError(CloudthetaError):
    """An explicit size or iteration cap was exceeded; the result was not computed."""


class InternalInconsistencyError(CloudthetaError):
    """An internal invariant failed; indicates a bug, not bad input."""
