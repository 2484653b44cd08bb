"""Exception hierarchy.

Everything raised on purpose derives from :class:`MWrightError` so callers
(the CLI in particular) can map failures onto exit codes.
"""


class MWrightError(Exception):
    """Base class for all library errors."""


class InputError(MWrightError):
    """Bad user input: unreadable file, unparsable value, invalid flag."""


class EstimationError(MWrightError):
    """A numerical or statistical procedure could not produce a result."""


class DomainError(EstimationError, ValueError):
    """Argument outside the mathematical domain of the operation."""


class PoleError(DomainError):
    """Evaluation at a pole of the gamma function."""


class NonConvergence(EstimationError, ArithmeticError):
    """A series or iteration failed to reach tolerance."""


class InsufficientData(EstimationError):
    """Too few usable observations."""


class ZeroObservation(EstimationError):
    """A zero value reached a log transform with exclusion disabled."""
