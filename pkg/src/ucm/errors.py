"""Exception types raised across the package."""


class UcmError(ValueError):
    pass


class ZeroEffectMarginal(UcmError):
    pass


class EmptyTable(UcmError):
    pass


class EmptyRow(UcmError):
    pass


class DimensionMismatch(UcmError):
    pass


class TooLarge(UcmError):
    pass


class DegenerateTable(UcmError):
    pass


class ParseError(UcmError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class FewerThanTwoColumns(ParseError):
    pass


class EmptyAfterFiltering(UcmError):
    pass
