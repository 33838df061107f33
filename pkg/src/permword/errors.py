"""Exception types shared across the package."""


class PermwordError(Exception):
    """Base class for all package-specific errors."""


class RetryExhaustedError(PermwordError):
    """A randomized search hit its retry cap without succeeding."""


class BudgetExceededError(PermwordError):
    """A produced word exceeded its guaranteed length budget."""


class SideConditionError(PermwordError):
    """A constructive step could not satisfy its side conditions."""


class MixingCapError(PermwordError):
    """A mixing-time scan passed its step cap without reaching the threshold."""


class WordParseError(PermwordError, ValueError):
    """Malformed word text."""
