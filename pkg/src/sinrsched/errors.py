"""Exception hierarchy shared by all modules."""


class SinrschedError(Exception):
    pass


class ValidationError(SinrschedError, ValueError):
    """Malformed instance, configuration or input set."""


class UnknownNodeError(SinrschedError, KeyError):
    pass


class DomainError(SinrschedError, ValueError):
    """Argument outside the mathematical domain (zero distance, d <= 0, ...)."""


class InfeasibleLinkError(DomainError):
    """Link cannot meet the transmission condition at the configured power."""


class PreconditionError(SinrschedError, ValueError):
    pass


class ProtocolViolation(SinrschedError, RuntimeError):
    """An agent asked the simulator for an action the radio model forbids."""


class RefusalError(SinrschedError, RuntimeError):
    """Exhaustive search refused because the input is too large."""
