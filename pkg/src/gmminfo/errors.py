"""Exception hierarchy shared by all gmminfo modules."""


class GmmInfoError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(GmmInfoError, ValueError):
    """A parameter is outside its domain (theta not in (0,1], bad code, malformed permutation)."""


class DimensionMismatchError(GmmInfoError, ValueError):
    """Two objects that must share the same number of items do not."""


class EnumerationLimitError(GmmInfoError, RuntimeError):
    """A brute-force enumeration was requested for an n above the configured cap."""
