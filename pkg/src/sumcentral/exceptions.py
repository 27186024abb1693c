"""Exceptions raised by sumcentral."""


class SumcentralError(Exception):
    """Base class of all sumcentral errors."""


class ConfigError(SumcentralError, ValueError):
    """Invalid configuration or parameter value."""


class DataError(SumcentralError, ValueError):
    """Invalid or unusable input data."""


class NoScorableOutputError(DataError):
    """An evaluation found nothing to score."""
