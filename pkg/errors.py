"""
Exception hierarchy. Every error raised on purpose by the library derives
from :class:`LevyError`, so the command-line runner can map all of them to
exit status 1.
"""


class LevyError(Exception):
    pass


class ArgumentError(LevyError, ValueError):
    """An argument violates an operation's precondition."""


class UnsupportedExponentError(ArgumentError):
    pass


class NumericError(LevyError, ArithmeticError):
    """
    A computed quantity is not finite.

    Attributes:
        location (str): Where the non-finite value appeared, for example
            ``'compensator at t=0.4375'``.
    """

    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = '{} ({})'.format(message, location)
        super().__init__(message)


class BlowUpError(NumericError):
    def __init__(self, message, time):
        self.time = time
        super().__init__(message, 't={:.6g}'.format(time))


class CapabilityError(LevyError, NotImplementedError):
    """The requested term needs something the inputs do not provide."""


class HypothesisViolatedError(LevyError):
    pass


class ConfigError(LevyError):
    """
    A config file failed to parse or validate.

    Attributes:
        line (int or None): 1-based line of the offending key, if known.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = 'line {}: {}'.format(line, message)
        super().__init__(message)
