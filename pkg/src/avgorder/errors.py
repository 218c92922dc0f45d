"""Exception hierarchy shared by the library and the CLI."""


class AvgOrderError(Exception):
    """Base class; the CLI maps subclasses to exit codes."""

    exit_code = 3


class ConfigError(AvgOrderError):
    exit_code = 2


class ParseError(ConfigError):
    pass


class ZeroGenerator(ConfigError):
    pass


class NonPositive(ConfigError):
    pass


class Unfactorable(ConfigError):
    pass


class TrivialGroup(ConfigError):
    pass


class SupportTooLarge(ConfigError):
    pass


class LimitTooLarge(ConfigError):
    pass


class NotPrimeGenerators(ConfigError):
    pass


class NotSquareFree(AvgOrderError):
    pass


class NotDivisor(AvgOrderError):
    pass


class DimensionMismatch(AvgOrderError):
    pass


class NonIntegralDegree(AvgOrderError):
    pass


class PrecisionUnreachable(AvgOrderError):
    pass


class DomainError(AvgOrderError):
    pass


class SegmentTooLarge(AvgOrderError):
    pass


class ZeroResidue(AvgOrderError):
    pass
