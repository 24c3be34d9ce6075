"""Exception types shared across the package."""


class StackGaError(Exception):
    """Base class for all package errors."""


class DataError(StackGaError):
    """Malformed or unusable input data (bad CSV row, all-zero column, ...)."""


class ConfigError(StackGaError):
    """Invalid configuration: unknown keys, bad values, schema mismatches."""
