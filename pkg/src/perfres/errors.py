class PerfresError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(PerfresError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ModelViolation(PerfresError):
    pass


class NotConnected(PerfresError):
    pass


class NotBiconnected(PerfresError):
    pass


class PreconditionViolated(PerfresError):
    pass


class CycleDetected(PerfresError):
    pass


class NotOnFace(PerfresError):
    pass


class LinkExists(PerfresError):
    pass


class MarkedArcsNotContiguous(PerfresError):
    pass


class NotIncident(PerfresError):
    pass


class InvalidPriorityChoice(PerfresError):
    pass


class NotNice(PerfresError):
    pass


class WrongClass(PerfresError):
    pass


class MissingComponentPattern(PerfresError):
    pass


class CapExceeded(PerfresError):
    pass


class SizeExceeded(PerfresError):
    pass


class UnknownGadget(PerfresError):
    pass


class UnknownNode(PerfresError):
    pass
