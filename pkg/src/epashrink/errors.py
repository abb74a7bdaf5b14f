"""Exception hierarchy shared across the package.

The CLI maps each category to a distinct exit code, so library code should
raise the most specific class that applies.
"""


class EpashrinkError(Exception):
    """Base class for all package errors."""


class InputError(EpashrinkError, ValueError):
    """Malformed or unusable input data (bad file, non-dyadic length, ...)."""


class ConfigError(EpashrinkError, ValueError):
    """Invalid configuration (unknown keys, unparseable values, ...)."""


class DomainError(EpashrinkError, ValueError):
    """Parameter outside its mathematical domain (alpha, beta, lambda, ...)."""


class NumericError(EpashrinkError, ArithmeticError):
    """A numerical routine failed to reach its accuracy target."""
