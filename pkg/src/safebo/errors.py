"""Exception hierarchy shared across the package.

The CLI maps these onto distinct exit codes, so library code should raise
the most specific class that applies.
"""


class SafeBoError(Exception):
    """Base class for all package-specific errors."""


class ContractError(SafeBoError):
    """A caller violated an operation precondition (e.g. dimension mismatch)."""


class ConfigError(SafeBoError):
    """Invalid configuration value (bad domain box, delta outside (0,1), ...)."""


class NumericalError(SafeBoError):
    """Linear-algebra failure that survived jitter escalation, or non-finite
    values produced by a solve."""
