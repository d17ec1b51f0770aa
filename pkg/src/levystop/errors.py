"""Exception hierarchy.

Every error raised deliberately by the package derives from
:class:`LevyStopError`; the ones signalling bad input also derive from
``ValueError`` so generic callers can catch them the usual way.
"""


class LevyStopError(Exception):
    """Base class for all package errors."""


# model
class NonPositiveRate(LevyStopError, ValueError):
    pass


class DegenerateModel(LevyStopError, ValueError):
    pass


class DriftNotNegative(LevyStopError, ValueError):
    pass


class PoleEvaluation(LevyStopError, ValueError):
    pass


class EnvelopeOutsideStrip(LevyStopError, ValueError):
    pass


# spectral
class RootBracketFailure(LevyStopError):
    pass


class DriftAssumptionViolated(LevyStopError, ValueError):
    pass


class UnsupportedModel(LevyStopError, ValueError):
    """The resolvent is not a pure exponential mixture (e.g. it has an atom)."""


# wienerhopf
class FactorConstructionFailure(LevyStopError):
    pass


class OutOfConvergenceStrip(LevyStopError, ValueError):
    pass


# stopping
class DomainError(LevyStopError, ValueError):
    pass


class NoRoot(LevyStopError):
    pass


class NonConvergence(LevyStopError):
    pass


class QuadratureNonConvergence(LevyStopError):
    pass


class StepTooLarge(LevyStopError, ValueError):
    pass
