"""Exception types shared across the package."""


class SpnetError(Exception):
    """Base class for all library errors."""


class MalformedInputError(SpnetError):
    """Input document or expression text could not be parsed."""


class CycleError(SpnetError):
    """The edge set contains a directed cycle."""


class IdOutOfRange(MalformedInputError):
    """An edge references an activity id outside 0..n-1."""


class MissingDuration(SpnetError):
    """A workload does not cover every activity of the network."""


class NotAnExtension(SpnetError):
    """The second network does not extend the first."""


class OverlappingActivities(SpnetError):
    """Composition operands share an activity label."""


class DuplicateActivity(SpnetError):
    """An activity appears more than once in an SP expression."""


class ExpressionSyntaxError(MalformedInputError):
    """SP expression text violates the concrete grammar."""


class NotSeriesParallel(SpnetError):
    """The network contains the forbidden 4-activity N pattern."""


class SizeLimitExceeded(SpnetError):
    """The network is too large for exhaustive enumeration."""


class SpecTooNarrow(SpnetError):
    """An NS grid is too narrow to place one heavy activity per level."""


class NotAntichain(SpnetError):
    """The given activities are not pairwise incomparable."""


class TripleNotFound(SpnetError):
    """No antichain-to-chain triple exists; would contradict the factor-2
    disproof construction and must be reported loudly."""


class SlowdownBoundViolation(SpnetError):
    """A measured slowdown exceeded a bound that is conjectured or proved.

    Carries a full dump of the offending instance so a genuine
    counterexample is never silently swallowed.
    """

    def __init__(self, message: str, dump: dict):
        super().__init__(message)
        self.dump = dump
