"""Exception types shared across the package."""


class MonochromeError(Exception):
    """Base class for all errors raised by this package."""


class InstanceTooLarge(MonochromeError):
    """An exact search exceeded its size cap or node budget."""


class NotConnected(MonochromeError):
    pass


class PreconditionViolated(MonochromeError):
    """A stated hypothesis of a construction does not hold.

    ``clause`` names the violated hypothesis so callers can report it.
    """

    def __init__(self, message, clause=None):
        super().__init__(message)
        self.clause = clause


class BlowupTooLarge(MonochromeError):
    pass


class InfeasibleParameters(MonochromeError):
    pass


class MinDegreeTooLow(MonochromeError):
    pass


class InternalContradiction(MonochromeError):
    """The component case analysis ran out of options.

    This means either a bug or a small-scale counterexample; the offending
    instance is attached so it can be logged.
    """

    def __init__(self, message, instance=None):
        super().__init__(message)
        self.instance = instance


class ConstructionFailed(MonochromeError):
    pass


class GraphFormatError(MonochromeError):
    """Malformed graph or certificate input; carries a line/column when known."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"line {line}, column {column or 1}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column
