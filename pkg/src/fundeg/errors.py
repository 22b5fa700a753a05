"""Exception types shared across the package."""


class FundegError(Exception):
    """Base class for all package errors."""


class ParseError(FundegError, ValueError):
    """Malformed textual input (group specs, polynomials, expressions, JSON)."""


class GroupMismatchError(FundegError, ValueError):
    """Operands live in different groups, rings or fields."""


class CapExceeded(FundegError):
    """An enumeration limit was hit; no approximate answer is produced."""


class InternalInvariantError(FundegError, AssertionError):
    """A computed value contradicts a proven bound; indicates a bug."""
