"""
Contains the module's errors
"""


class TpeqwException(Exception):
    pass


class DomainError(TpeqwException, ValueError):
    pass


class ResonanceError(TpeqwException, ValueError):
    pass


class ConvergenceError(TpeqwException):
    pass


class ResourceError(TpeqwException):
    pass


class InsufficientStatisticsError(TpeqwException):
    pass


class ConfigError(TpeqwException):
    pass


degenerate_pair_error = DomainError(
    "Signal and idler frequencies coincide, the photons cannot be tagged by frequency"
)
