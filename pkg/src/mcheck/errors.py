"""Exception types shared across the package."""


class McheckError(Exception):
    """Base class for all errors raised by this package."""


class IndexOutOfRange(McheckError):
    pass


class NonFiniteValue(McheckError):
    pass


class ToleranceTooSmall(McheckError):
    pass


class NotSubstochastic(McheckError):
    """Raised when an operation requires a substochastic matrix.

    Carries the violation report produced by validate_substochastic.
    """

    def __init__(self, report):
        self.report = report
        super().__init__(str(report))


class NotSquare(McheckError):
    pass


class OrderTooLargeForFloat(McheckError):
    pass


class OrderTooLargeForOracle(McheckError):
    pass


class IncompatibleDimensions(McheckError):
    pass


class NotL0(McheckError):
    pass


class NotWdd(McheckError):
    pass


class InvalidConfig(McheckError):
    pass


class InvalidArgs(McheckError):
    pass


class ParseError(McheckError):
    """Malformed input file; carries the 1-based line number and a reason."""

    def __init__(self, line, reason):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class UnsupportedHeader(McheckError):
    pass


class IoError(McheckError):
    pass
